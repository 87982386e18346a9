#pragma once

#include <string>
#include <vector>

#include "fairpool/axioms.hpp"
#include "fairpool/json_io.hpp"
#include "fairpool/schemes.hpp"

namespace fairpool {

// Column order used by both summary tables.
inline constexpr std::array<Axiom, 6> table_columns = {
    Axiom::fixed_total_reward,       Axiom::relative_redistribution,
    Axiom::absolute_redistribution,  Axiom::round_based_rewards,
    Axiom::budget_limit,             Axiom::ordinality,
};

struct TableRow {
    Scheme scheme;
    std::vector<Verdict> cells;          // one per column
    std::vector<bool> expected_fail;     // the reference grid
};

struct TableReport {
    int which = 2;
    CheckBudget budget;
    std::vector<TableRow> rows;
    bool matches_expected = true;
    std::vector<std::string> diffs;      // human-readable cell mismatches
};

// Table 1: the six schemes that each violate exactly one axiom.
// Table 2: pps, pplns(3), geometric(2), constrained geometric(2), ic(3),
// slush(1200), checked against the reference pass/fail grid.
TableReport reproduce_table(int which, const CheckBudget& budget);

std::string render_table_text(const TableReport& report);
ordered_json table_to_json(const TableReport& report);

struct FixtureResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Worked examples with externally fixed expected values: a PPLNS window
// walk-through, geometric awards before and after an extension, and slush
// awards checked against coarse two-decimal anchors.
std::vector<FixtureResult> run_fixture_examples();

struct SimConfig {
    std::vector<long> weights = {1};
    Rat solve_probability = Rat(1, 100);
    int rounds = 100;
    std::uint64_t seed = 0;
    RewardConfig reward;
    static constexpr int max_round_length = 64;
};

struct SimMiner {
    std::string name;
    long weight = 0;
    long shares = 0;
    Award total;
};

struct SimReport {
    long total_shares = 0;
    int pending_shares = 0;
    int settled_rounds = 0;          // rounds with no pending member
    std::vector<SimMiner> miners;
    Award grand_total;
    // Mean and variance of the per-round totals over settled rounds,
    // exact for exact schemes.
    bool exact = true;
    Rat round_mean;
    Rat round_variance;
    double fround_mean = 0.0;
    double fround_variance = 0.0;
};

SimReport simulate(const Scheme& scheme, const SimConfig& config);

std::string render_sim_text(const Scheme& scheme, const SimConfig& config, const SimReport& report);
ordered_json sim_to_json(const Scheme& scheme, const SimConfig& config, const SimReport& report);

}  // namespace fairpool
