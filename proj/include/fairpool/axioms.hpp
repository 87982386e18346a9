#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairpool/schemes.hpp"

namespace fairpool {

enum class Axiom {
    fixed_total_reward,
    ordinality,
    budget_limit,
    absolute_redistribution,
    relative_redistribution,
    round_based_rewards,
    strict_positivity,
};

inline constexpr int axiom_count = 7;
inline constexpr std::array<Axiom, axiom_count> all_axioms = {
    Axiom::fixed_total_reward,    Axiom::ordinality,
    Axiom::budget_limit,          Axiom::absolute_redistribution,
    Axiom::relative_redistribution, Axiom::round_based_rewards,
    Axiom::strict_positivity,
};

const char* axiom_name(Axiom a);
std::optional<Axiom> axiom_from_name(std::string_view name);

// Search budget for one axiom check. The instance stream is the canonical
// exhaustive family (every round composition of every size up to n_max,
// integer share times) followed by `random_trials` randomized draws. Growing
// any budget field only appends instances, it never changes earlier ones.
struct CheckBudget {
    int n_max = 6;
    int max_rounds = 3;
    int random_trials = 500;
    std::uint64_t seed = 0;
    double tolerance = 1e-6;  // scaled by the net reward for value comparisons
};

// A concrete refutation: the histories involved (the base instance first,
// then the derived one where the axiom needs a construction), the share and
// round indices the violated clause talks about, and the two quantities that
// were supposed to satisfy `relation`'s negation.
//
// relation is one of:
//   "ne"  lhs != rhs, where the axiom demands equality
//   "gt"  lhs >  rhs, where the axiom demands lhs <= rhs
//   "le"  lhs <= rhs, where the axiom demands lhs >  rhs
struct Witness {
    Axiom axiom = Axiom::fixed_total_reward;
    std::vector<History> histories;
    std::vector<size_t> share_indices;
    std::vector<int> round_indices;
    bool exact = true;
    Rat lhs;
    Rat rhs;
    double flhs = 0.0;
    double frhs = 0.0;
    std::string relation;
    std::string note;
};

struct Verdict {
    Axiom axiom = Axiom::fixed_total_reward;
    bool failed = false;
    long instances_checked = 0;
    std::optional<Witness> witness;
    std::vector<std::string> notes;
};

// Canonical instances followed by the seeded random ones. All use block
// reward 1 and zero fee.
std::vector<History> generate_instances(const CheckBudget& budget);

// Searches a single history for a violation of one axiom. Returns the first
// violation in a fixed deterministic order, or nullopt. Skip decisions forced
// by pending awards are reported through `notes` when non-null.
std::optional<Witness> find_violation(const Scheme& scheme, Axiom axiom, const History& h,
                                      double tolerance, std::vector<std::string>* notes = nullptr);

// Strictly smaller variants of `h` to try while shrinking a counterexample:
// the history without its last round, then the history without each single
// non-full share in turn.
std::vector<History> shrink_candidates(const History& h);

// Runs the instance stream until the first violating history, then shrinks it
// to a fixpoint (no candidate from shrink_candidates still violates) and
// reports the witness found on the minimal history.
Verdict check_axiom(const Scheme& scheme, Axiom axiom, const CheckBudget& budget);

std::array<Verdict, axiom_count> check_all(const Scheme& scheme, const CheckBudget& budget);

// Re-establishes a witness from its stored artifacts alone: checks the
// derived history really is the claimed construction over the base one, then
// recomputes the awards and the violated comparison from scratch.
bool reverify(const Scheme& scheme, const Witness& w, double tolerance);

}  // namespace fairpool
