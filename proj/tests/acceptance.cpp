// Acceptance gate for the whole project: eight criteria, one line each.
// Every tolerance and budget is pinned here; the exit code is the number of
// failed criteria. Two criteria assert externally fixed anchor values that
// the implemented formulas provably cannot meet (a two-decimal rounding slip
// upstream); they are asserted as stated and stay red rather than being
// loosened. See the README for the arithmetic.

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "fairpool/harness.hpp"
#include "fairpool/rng.hpp"

using namespace fairpool;

namespace {

std::string g_cli;

struct RunResult {
    int code = -1;
    std::string output;
    double seconds = 0.0;
};

RunResult run_cli(const std::string& args) {
    RunResult r;
    std::string cmd = "\"" + g_cli + "\" " + args + " 2>&1";
    auto start = std::chrono::steady_clock::now();
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    int status = pclose(pipe);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

History make_history(const std::vector<int>& lengths, RewardConfig rc = {}) {
    std::vector<Share> shares;
    int t = 0;
    for (int len : lengths) {
        for (int i = 0; i < len; ++i) {
            ++t;
            shares.push_back({"s" + std::to_string(t), Rat(t), i == len - 1});
        }
    }
    return History(std::move(shares), rc);
}

// All round-length compositions with the given total, any number of rounds.
void compositions(int total, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (total == 0) {
        out.push_back(prefix);
        return;
    }
    for (int part = 1; part <= total; ++part) {
        prefix.push_back(part);
        compositions(total - part, prefix, out);
        prefix.pop_back();
    }
}

std::vector<Rat> values(const Scheme& s, const History& h) {
    std::vector<Rat> out;
    for (const Award& a : s.awards(h)) out.push_back(a.value);
    return out;
}

// Feasible generators for random tables in the absolute-fair family. The
// family's constraint set is convex, so any convex combination stays valid.
std::vector<std::vector<Rat>> absolute_generators(int size) {
    std::vector<std::vector<Rat>> gens(4, std::vector<Rat>(size));
    for (int j = 1; j <= size; ++j) {
        gens[0][j - 1] = Rat(1, j);                      // proportional
        gens[1][j - 1] = Rat(1, 2).pow(unsigned(j - 1)); // geometric decay
        gens[2][j - 1] = Rat(j <= 2 ? 1 : 0);            // first two ranks
        gens[3][j - 1] = Rat(j == 1 ? 1 : 0);            // winner takes all
    }
    return gens;
}

EpsilonTable random_absolute_table(SplitMix64& rng, int size) {
    auto gens = absolute_generators(size);
    std::array<long, 4> w{};
    long total = 0;
    for (long& wi : w) {
        wi = static_cast<long>(rng.below(5));
        total += wi;
    }
    if (total == 0) {
        w[0] = 1;
        total = 1;
    }
    std::vector<Rat> eps(size, Rat(0));
    for (size_t g = 0; g < gens.size(); ++g)
        for (int j = 0; j < size; ++j) eps[j] += Rat(w[g]) * gens[g][j] / Rat(total);
    return EpsilonTable::from_values(std::move(eps));
}

EpsilonTable random_relative_table(SplitMix64& rng, int size) {
    std::vector<Rat> eps;
    eps.push_back(Rat(1));
    for (int j = 2; j <= size; ++j) {
        long den = 1 + static_cast<long>(rng.below(8));
        long num = static_cast<long>(rng.below(static_cast<std::uint64_t>(den) + 1));
        eps.push_back(Rat(num, den));
    }
    return EpsilonTable::from_values(std::move(eps));
}

struct Criterion {
    int number = 0;
    std::string title;
    bool pass = true;
    std::vector<std::string> details;

    void fail(const std::string& why) {
        pass = false;
        if (details.size() < 8) details.push_back(why);
    }
    void require(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

void report(const Criterion& c, int& failures) {
    std::cout << "criterion " << c.number << ": " << (c.pass ? "PASS" : "FAIL") << " - "
              << c.title << "\n";
    for (const std::string& d : c.details) std::cout << "    " << d << "\n";
    if (!c.pass) ++failures;
}

std::string witness_label(const Scheme& s, const Verdict& v) {
    return s.spec_string() + " / " + axiom_name(v.axiom);
}

// Witnesses gathered across criteria, re-examined wholesale by criterion 7.
struct EmittedWitness {
    Scheme scheme;
    Axiom axiom;
    Witness witness;
};
std::vector<EmittedWitness> g_witnesses;

void collect_table_witnesses(const TableReport& report) {
    for (const TableRow& row : report.rows)
        for (const Verdict& cell : row.cells)
            if (cell.witness) g_witnesses.push_back({row.scheme, cell.axiom, *cell.witness});
}

Criterion criterion_1(const TableReport& table2) {
    Criterion c{1, "summary table of the six classic schemes, exact grid, witnesses replayable"};

    RunResult r = run_cli("tables --which 2 --n-max 6 --trials 500 --seed 0");
    c.require(r.seconds <= 60.0, "table 2 run took too long");
    c.require(r.code == 0, "tables --which 2 exited " + std::to_string(r.code) +
                               " (grid differs from the reference table)");
    for (const std::string& d : table2.diffs) c.fail("cell mismatch: " + d);

    for (const TableRow& row : table2.rows) {
        for (const Verdict& cell : row.cells) {
            if (cell.failed != bool(cell.witness))
                c.fail("cell without a witness: " + witness_label(row.scheme, cell));
            if (cell.witness && !reverify(row.scheme, *cell.witness, CheckBudget{}.tolerance))
                c.fail("witness does not replay: " + witness_label(row.scheme, cell));
        }
    }
    return c;
}

Criterion criterion_2(const TableReport& table1) {
    Criterion c{2, "independence table, exactly one failing axiom per scheme"};

    RunResult r = run_cli("tables --which 1 --n-max 6 --trials 500 --seed 0");
    c.require(r.seconds <= 60.0, "table 1 run took too long");
    c.require(r.code == 0, "tables --which 1 exited " + std::to_string(r.code));
    c.require(table1.matches_expected, "library grid differs from the reference table");

    for (size_t i = 0; i < table1.rows.size(); ++i) {
        const TableRow& row = table1.rows[i];
        int fails = 0;
        for (const Verdict& cell : row.cells)
            if (cell.failed) ++fails;
        if (fails != 1 || !row.cells[i].failed)
            c.fail(row.scheme.spec_string() + " does not fail exactly its own axiom");
        if (row.cells[i].witness &&
            !reverify(row.scheme, *row.cells[i].witness, CheckBudget{}.tolerance))
            c.fail("witness does not replay: " + witness_label(row.scheme, row.cells[i]));
    }
    return c;
}

Criterion criterion_3() {
    Criterion c{3, "worked-example fixtures, including the two-decimal award anchors"};
    for (const FixtureResult& f : run_fixture_examples())
        if (!f.pass) c.fail(f.name + ": " + f.detail);
    return c;
}

Criterion criterion_4() {
    Criterion c{4, "family identities agree pointwise on every history up to 8 shares"};

    std::vector<std::vector<int>> shapes;
    std::vector<int> prefix;
    for (int n = 1; n <= 8; ++n) compositions(n, prefix, shapes);
    c.require(shapes.size() == 255, "expected 255 round compositions");

    Scheme prop = Scheme::proportional();
    Scheme abs_prop = Scheme::absolute_fair(EpsilonTable::proportional(8));
    Scheme rel_prop = Scheme::relative_fair(EpsilonTable::proportional(8));
    std::vector<Scheme> pseudo_inf = {
        Scheme::k_pseudo(std::nullopt, Rat(0)),
        Scheme::k_pseudo(std::nullopt, Rat(1, 10)),
        Scheme::k_pseudo(std::nullopt, Rat(1)),
    };
    const Rat rates[] = {Rat(3, 2), Rat(2), Rat(3)};
    std::vector<std::pair<Scheme, Scheme>> geo_pairs;
    for (const Rat& r : rates)
        geo_pairs.emplace_back(
            Scheme::constrained_geometric(r),
            Scheme::relative_fair(EpsilonTable::constrained_geometric_member(r, 8)));

    // the proportional-family identities scale with the net reward, so a fee
    // is fine; the geometric pair pays from the block and needs a zero fee
    // for both sides to draw on the same pot
    const RewardConfig net_configs[] = {RewardConfig{}, RewardConfig{Rat(7, 2), Rat(1, 2)}};
    const RewardConfig block_configs[] = {RewardConfig{}, RewardConfig{Rat(7, 2), Rat(0)}};
    long mismatches = 0;
    for (const auto& shape : shapes) {
        for (const RewardConfig& rc : net_configs) {
            History h = make_history(shape, rc);
            auto base = values(prop, h);
            if (values(abs_prop, h) != base) ++mismatches;
            if (values(rel_prop, h) != base) ++mismatches;
            for (const Scheme& s : pseudo_inf)
                if (values(s, h) != base) ++mismatches;
        }
        for (const RewardConfig& rc : block_configs) {
            History h = make_history(shape, rc);
            for (const auto& [cg, rf] : geo_pairs)
                if (values(cg, h) != values(rf, h)) ++mismatches;
        }
    }
    c.require(mismatches == 0,
              std::to_string(mismatches) + " pointwise identity violations");
    return c;
}

Criterion criterion_5() {
    Criterion c{5, "round sums match their closed forms on 1000 randomized draws"};

    SplitMix64 rng{2026};
    const Rat rates[] = {Rat(3, 2), Rat(2), Rat(5, 2), Rat(3), Rat(4)};
    long bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        EpsilonTable abs_table = random_absolute_table(rng, 16);
        EpsilonTable rel_table = random_relative_table(rng, 16);
        Rat r = rates[rng.below(5)];
        Rat block(1 + static_cast<long>(rng.below(8)), 1 + static_cast<long>(rng.below(4)));
        Rat fee = block * Rat(static_cast<long>(rng.below(3)), 4);
        RewardConfig rc{block, fee};
        Rat net = rc.net();

        std::vector<int> shape;
        int parts = 1 + static_cast<int>(rng.below(3));
        for (int p = 0; p < parts; ++p) shape.push_back(1 + static_cast<int>(rng.below(16)));
        History h = make_history(shape, rc);

        auto sums = [&](const Scheme& s) {
            return compute_payout_report(s, h).round_sums;
        };

        auto rel_sums = sums(Scheme::relative_fair(rel_table));
        auto abs_sums = sums(Scheme::absolute_fair(abs_table));
        auto geo_sums = sums(Scheme::geometric(r));
        auto cgeo_sums = sums(Scheme::constrained_geometric(r));
        for (int round = 0; round < h.round_count(); ++round) {
            int len = h.round_length(round + 1);
            if (rel_sums[round].value != net) ++bad;
            if (abs_sums[round].value != net * abs_table.at(1)) ++bad;
            Rat geo_expect = block * (Rat(1) - Rat(1) / r.pow(unsigned(len)));
            if (geo_sums[round].value != geo_expect) ++bad;
            if (cgeo_sums[round].value != block) ++bad;
        }
    }
    c.require(bad == 0, std::to_string(bad) + " round sums off their closed form");
    return c;
}

Criterion criterion_6() {
    Criterion c{6, "random family members pass their axioms; finite k starves rank k+1"};

    CheckBudget budget;
    budget.random_trials = 100;  // pinned: keeps the 100-table sweeps fast

    const Axiom shared[] = {Axiom::fixed_total_reward, Axiom::budget_limit,
                            Axiom::round_based_rewards, Axiom::ordinality};

    SplitMix64 rng{7};
    for (int i = 0; i < 100; ++i) {
        Scheme s = Scheme::absolute_fair(random_absolute_table(rng, 8));
        std::vector<Axiom> axioms(shared, shared + 4);
        axioms.push_back(Axiom::absolute_redistribution);
        for (Axiom a : axioms) {
            Verdict v = check_axiom(s, a, budget);
            if (v.failed)
                c.fail("absolute-fair table " + std::to_string(i) + " fails " + axiom_name(a));
        }
    }
    for (int i = 0; i < 100; ++i) {
        Scheme s = Scheme::relative_fair(random_relative_table(rng, 8));
        std::vector<Axiom> axioms(shared, shared + 4);
        axioms.push_back(Axiom::relative_redistribution);
        for (Axiom a : axioms) {
            Verdict v = check_axiom(s, a, budget);
            if (v.failed)
                c.fail("relative-fair table " + std::to_string(i) + " fails " + axiom_name(a));
        }
    }

    const long ks[] = {2, 3, 4};
    const Rat deltas[] = {Rat(0), Rat(1, 3), Rat(1)};
    for (long k : ks) {
        for (const Rat& delta : deltas) {
            Scheme s = Scheme::k_pseudo(k, delta);
            std::string label = s.spec_string();
            for (Axiom a : table_columns) {
                Verdict v = check_axiom(s, a, budget);
                if (v.failed) c.fail(label + " fails " + axiom_name(a));
            }

            Verdict pos = check_axiom(s, Axiom::strict_positivity, budget);
            if (!pos.failed || !pos.witness) {
                c.fail(label + " unexpectedly satisfies strict positivity");
                continue;
            }
            g_witnesses.push_back({s, Axiom::strict_positivity, *pos.witness});

            // interior delta needs rank k+1 to see a zero; at the boundary
            // the starved rank already sits inside a round of length k
            int expect_len = (delta.is_zero() || delta == Rat(1)) ? int(k) : int(k) + 1;
            const History& wh = pos.witness->histories[0];
            if (wh.round_count() != 1 || int(wh.size()) != expect_len)
                c.fail(label + " minimal witness is not a single round of length " +
                       std::to_string(expect_len));

            // the rank past k is paid exactly zero in a round of length k+1
            History long_round = make_history({int(k) + 1});
            Award last = s.award(long_round, size_t(k));
            if (!last.value.is_zero())
                c.fail(label + " pays rank k+1 a nonzero award");
        }
    }
    return c;
}

Criterion criterion_7() {
    Criterion c{7, "every emitted counterexample replays and admits no further shrink"};
    c.require(!g_witnesses.empty(), "no witnesses were collected");

    for (const EmittedWitness& e : g_witnesses) {
        std::string label = e.scheme.spec_string() + " / " + axiom_name(e.axiom);
        if (!reverify(e.scheme, e.witness, CheckBudget{}.tolerance)) {
            c.fail("does not replay: " + label);
            continue;
        }
        for (const History& smaller : shrink_candidates(e.witness.histories[0])) {
            if (find_violation(e.scheme, e.axiom, smaller, CheckBudget{}.tolerance))
                c.fail("shrinkable witness: " + label);
        }
    }
    if (c.pass)
        c.details.push_back(std::to_string(g_witnesses.size()) +
                            " witnesses replayed and re-shrunk");
    return c;
}

Criterion criterion_8() {
    Criterion c{8, "identical seeds produce byte-identical JSON reports"};

    const std::string cmds[] = {
        "tables --which 1 --n-max 5 --trials 60 --seed 42 --json",
        "check --scheme slush:lambda=1200 --seed 9 --json",
        "check --scheme pplns:n=3 --axiom budget_limit --seed 7 --json",
        "simulate --scheme pplns:n=3 --weights 3,1 --rounds 40 --seed 13 --json",
        "fixtures --json",
    };
    for (const std::string& cmd : cmds) {
        RunResult a = run_cli(cmd);
        RunResult b = run_cli(cmd);
        if (a.output != b.output || a.code != b.code) c.fail("run differs: " + cmd);
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cli>\n";
        return 64;
    }
    g_cli = argv[1];

    TableReport table2 = reproduce_table(2, CheckBudget{});
    TableReport table1 = reproduce_table(1, CheckBudget{});
    collect_table_witnesses(table2);
    collect_table_witnesses(table1);

    int failures = 0;
    report(criterion_1(table2), failures);
    report(criterion_2(table1), failures);
    report(criterion_3(), failures);
    report(criterion_4(), failures);
    report(criterion_5(), failures);
    report(criterion_6(), failures);
    report(criterion_7(), failures);
    report(criterion_8(), failures);

    std::cout << (8 - failures) << " of 8 criteria passed\n";
    return failures;
}
