#include "fairpool/harness.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "fairpool/rng.hpp"

namespace fairpool {

namespace {

const char* column_label(Axiom a) {
    switch (a) {
        case Axiom::fixed_total_reward: return "total";
        case Axiom::relative_redistribution: return "ratio";
        case Axiom::absolute_redistribution: return "delta";
        case Axiom::round_based_rewards: return "round";
        case Axiom::budget_limit: return "budget";
        case Axiom::ordinality: return "order";
        default: return "?";
    }
}

struct RowSpec {
    Scheme scheme;
    std::array<bool, 6> expected_fail;
};

std::vector<RowSpec> table_rows(int which) {
    // column order: total, ratio, delta, round, budget, order
    if (which == 1)
        return {
            {Scheme::independence(1), {true, false, false, false, false, false}},
            {Scheme::independence(2), {false, true, false, false, false, false}},
            {Scheme::independence(3), {false, false, true, false, false, false}},
            {Scheme::independence(4), {false, false, false, true, false, false}},
            {Scheme::independence(5), {false, false, false, false, true, false}},
            {Scheme::independence(6), {false, false, false, false, false, true}},
        };
    if (which == 2)
        return {
            {Scheme::pps(), {true, false, false, false, true, false}},
            {Scheme::pplns(3), {true, true, true, true, true, false}},
            {Scheme::geometric(Rat(2)), {true, false, true, false, false, false}},
            {Scheme::constrained_geometric(Rat(2)), {false, false, true, false, false, false}},
            {Scheme::ic(3), {false, true, true, false, false, false}},
            {Scheme::slush(1200.0), {true, true, true, true, true, true}},
        };
    throw std::invalid_argument("table number must be 1 or 2");
}

}  // namespace

TableReport reproduce_table(int which, const CheckBudget& budget) {
    TableReport report;
    report.which = which;
    report.budget = budget;
    for (RowSpec& spec : table_rows(which)) {
        TableRow row;
        row.scheme = spec.scheme;
        row.expected_fail.assign(spec.expected_fail.begin(), spec.expected_fail.end());
        for (size_t c = 0; c < table_columns.size(); ++c) {
            Verdict v = check_axiom(spec.scheme, table_columns[c], budget);
            if (v.failed != spec.expected_fail[c]) {
                report.matches_expected = false;
                std::ostringstream diff;
                diff << spec.scheme.spec_string() << " / " << axiom_name(table_columns[c])
                     << ": expected " << (spec.expected_fail[c] ? "fail" : "no counterexample")
                     << ", got " << (v.failed ? "fail" : "no counterexample");
                report.diffs.push_back(diff.str());
            }
            row.cells.push_back(std::move(v));
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string render_table_text(const TableReport& report) {
    std::ostringstream out;
    out << "table " << report.which << "   (n_max " << report.budget.n_max << ", max_rounds "
        << report.budget.max_rounds << ", trials " << report.budget.random_trials << ", seed "
        << report.budget.seed << ")\n\n";

    size_t name_width = 6;
    for (const TableRow& row : report.rows)
        name_width = std::max(name_width, row.scheme.spec_string().size());

    out << "scheme";
    for (size_t p = 6; p < name_width; ++p) out << ' ';
    for (Axiom a : table_columns) out << "  " << column_label(a);
    out << "\n";
    for (const TableRow& row : report.rows) {
        std::string name = row.scheme.spec_string();
        out << name;
        for (size_t p = name.size(); p < name_width; ++p) out << ' ';
        for (size_t c = 0; c < row.cells.size(); ++c) {
            std::string label = column_label(table_columns[c]);
            size_t pad = 2 + label.size() / 2;
            for (size_t p = 1; p < pad; ++p) out << ' ';
            out << (row.cells[c].failed ? '-' : '+');
            for (size_t p = pad; p < 2 + label.size(); ++p) out << ' ';
        }
        out << "\n";
    }
    out << "\ncolumns: ";
    for (size_t c = 0; c < table_columns.size(); ++c) {
        if (c) out << ", ";
        out << column_label(table_columns[c]) << "=" << axiom_name(table_columns[c]);
    }
    out << "\n";
    if (report.matches_expected) {
        out << "grid matches the expected table\n";
    } else {
        out << "MISMATCH against the expected table:\n";
        for (const std::string& d : report.diffs) out << "  " << d << "\n";
    }
    return out.str();
}

ordered_json table_to_json(const TableReport& report) {
    ordered_json doc;
    doc["table"] = report.which;
    ordered_json budget;
    budget["n_max"] = report.budget.n_max;
    budget["max_rounds"] = report.budget.max_rounds;
    budget["trials"] = report.budget.random_trials;
    budget["seed"] = report.budget.seed;
    budget["tolerance"] = report.budget.tolerance;
    doc["budget"] = std::move(budget);
    ordered_json columns = ordered_json::array();
    for (Axiom a : table_columns) columns.push_back(axiom_name(a));
    doc["columns"] = std::move(columns);
    ordered_json rows = ordered_json::array();
    for (const TableRow& row : report.rows) {
        ordered_json r;
        r["scheme"] = row.scheme.spec_string();
        ordered_json expected = ordered_json::array();
        for (bool f : row.expected_fail) expected.push_back(f ? "fail" : "no_counterexample");
        r["expected"] = std::move(expected);
        ordered_json cells = ordered_json::array();
        for (const Verdict& v : row.cells) cells.push_back(verdict_to_json(row.scheme, v));
        r["cells"] = std::move(cells);
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    doc["matches_expected"] = report.matches_expected;
    doc["diffs"] = report.diffs;
    return doc;
}

namespace {

History composition_history(const std::vector<int>& comp) {
    std::vector<Share> shares;
    int n = 0;
    for (int part : comp) n += part;
    shares.reserve(n);
    int t = 0;
    for (int part : comp) {
        for (int k = 0; k < part; ++k) {
            ++t;
            Share s;
            s.id = "s" + std::to_string(t);
            s.time = Rat(t);
            s.full = (k == part - 1);
            shares.push_back(std::move(s));
        }
    }
    return History(std::move(shares), RewardConfig{});
}

FixtureResult award_list_fixture(const std::string& name, const Scheme& scheme, const History& h,
                                 const std::vector<Rat>& expected) {
    FixtureResult fr;
    fr.name = name;
    auto awards = scheme.awards(h);
    std::ostringstream detail;
    fr.pass = true;
    for (size_t i = 0; i < expected.size(); ++i) {
        if (i) detail << ", ";
        detail << h.shares()[i].id << "=" << awards[i].value.str();
        if (awards[i].value != expected[i]) {
            fr.pass = false;
            detail << " (expected " << expected[i].str() << ")";
        }
    }
    fr.detail = detail.str();
    return fr;
}

FixtureResult anchor_fixture(const std::string& name, double got, double anchor, double slack) {
    FixtureResult fr;
    fr.name = name;
    fr.pass = std::fabs(got - anchor) <= slack;
    std::ostringstream detail;
    detail << "computed " << format_double(got, 9) << ", anchor " << format_double(anchor, 9)
           << " +/- " << format_double(slack, 3);
    fr.detail = detail.str();
    return fr;
}

}  // namespace

std::vector<FixtureResult> run_fixture_examples() {
    std::vector<FixtureResult> out;

    // PPLNS with a window of 3 over rounds of length 5, 1, 1, 1, 12: the
    // first six shares settle to 0, 0, 1/3, 2/3, 1, 1 and the first round
    // pays out 2 in total (twice the net reward).
    {
        Scheme pplns = Scheme::pplns(3);
        History h = composition_history({5, 1, 1, 1, 12});
        out.push_back(award_list_fixture(
            "pplns_window_awards", pplns, h,
            {Rat(0), Rat(0), Rat(1, 3), Rat(2, 3), Rat(1), Rat(1)}));

        FixtureResult fr;
        fr.name = "pplns_first_round_total";
        auto report = compute_payout_report(pplns, h);
        Rat expected(2);
        fr.pass = !report.round_has_pending[0] && report.round_sums[0].value == expected;
        fr.detail = "round 1 total " + report.round_sums[0].value.str() + ", expected " +
                    expected.str();
        out.push_back(std::move(fr));
    }

    // Geometric with r = 2 on a two-share round pays 1/4, 1/2; extending the
    // round shifts everyone down a power of two: 1/8, 1/4, 1/2.
    {
        Scheme geo = Scheme::geometric(Rat(2));
        History h = composition_history({2});
        out.push_back(
            award_list_fixture("geometric_round_awards", geo, h, {Rat(1, 4), Rat(1, 2)}));
        History he = h.extend_round(1);
        out.push_back(award_list_fixture("geometric_extension_awards", geo, he,
                                         {Rat(1, 8), Rat(1, 4), Rat(1, 2)}));
    }

    // Slush with lambda = 1200 over shares at times 1, 2, 3 (rounds of 2 and
    // 1), checked against two-decimal anchors, then again after extending the
    // first round.
    {
        Scheme slush = Scheme::slush(1200.0);
        History h = composition_history({2, 1});
        auto awards = slush.awards(h);
        out.push_back(anchor_fixture("slush_award_s1", awards[0].approx, 0.82, 0.005));
        out.push_back(anchor_fixture("slush_award_s2", awards[1].approx, 0.83, 0.005));
        out.push_back(anchor_fixture("slush_award_s3", awards[2].approx, 0.33, 0.005));

        History he = h.extend_round(1);
        auto ext = slush.awards(he);
        out.push_back(anchor_fixture("slush_extension_s1", ext[0].approx, 0.58, 0.005));
        out.push_back(anchor_fixture("slush_extension_s2", ext[1].approx, 0.58, 0.005));
    }

    return out;
}

SimReport simulate(const Scheme& scheme, const SimConfig& config) {
    if (config.weights.empty())
        throw ValidationError(ValidationCode::bad_scheme_param, "simulation needs miner weights");
    for (long w : config.weights)
        if (w <= 0)
            throw ValidationError(ValidationCode::bad_scheme_param,
                                  "miner weights must be positive");
    if (!config.solve_probability.is_positive() || config.solve_probability > Rat(1))
        throw ValidationError(ValidationCode::bad_scheme_param,
                              "solve probability must be in (0, 1]");
    if (config.rounds < 1)
        throw ValidationError(ValidationCode::bad_scheme_param, "need at least one round");

    long total_weight = 0;
    for (long w : config.weights) total_weight += w;

    SplitMix64 rng{config.seed};
    const double p = config.solve_probability.to_double();

    std::vector<Share> shares;
    std::vector<size_t> owner;
    long t = 0;
    for (int r = 0; r < config.rounds; ++r) {
        for (int len = 1;; ++len) {
            ++t;
            long pick = static_cast<long>(rng.below(static_cast<std::uint64_t>(total_weight)));
            size_t m = 0;
            while (pick >= config.weights[m]) pick -= config.weights[m++];
            bool solved = rng.unit() < p || len == SimConfig::max_round_length;
            Share s;
            s.id = "m" + std::to_string(m + 1) + "-" + std::to_string(t);
            s.time = Rat(t);
            s.full = solved;
            shares.push_back(std::move(s));
            owner.push_back(m);
            if (solved) break;
        }
    }

    History h(std::move(shares), config.reward);
    PayoutReport payout = compute_payout_report(scheme, h);

    SimReport report;
    report.exact = !scheme.floating();
    report.total_shares = static_cast<long>(h.size());
    report.pending_shares = payout.pending_shares;
    report.grand_total = payout.total;
    for (size_t m = 0; m < config.weights.size(); ++m) {
        SimMiner miner;
        miner.name = "m" + std::to_string(m + 1);
        miner.weight = config.weights[m];
        report.miners.push_back(std::move(miner));
    }
    for (size_t i = 0; i < h.size(); ++i) {
        SimMiner& miner = report.miners[owner[i]];
        ++miner.shares;
        if (payout.rows[i].award.pending) continue;
        miner.total.value += payout.rows[i].award.value;
        miner.total.approx += payout.rows[i].award.approx;
    }

    for (int r = 0; r < h.round_count(); ++r)
        if (!payout.round_has_pending[r]) ++report.settled_rounds;
    if (report.settled_rounds > 0) {
        Rat sum, sumsq;
        double fsum = 0.0, fsumsq = 0.0;
        for (int r = 0; r < h.round_count(); ++r) {
            if (payout.round_has_pending[r]) continue;
            const Award& a = payout.round_sums[r];
            sum += a.value;
            sumsq += a.value * a.value;
            fsum += a.approx;
            fsumsq += a.approx * a.approx;
        }
        Rat count(report.settled_rounds);
        report.round_mean = sum / count;
        report.round_variance = sumsq / count - report.round_mean * report.round_mean;
        report.fround_mean = fsum / report.settled_rounds;
        report.fround_variance =
            fsumsq / report.settled_rounds - report.fround_mean * report.fround_mean;
    }
    return report;
}

namespace {

std::string stat_str(bool exact, const Rat& v, double fv) {
    return exact ? v.str() : format_double(fv);
}

}  // namespace

std::string render_sim_text(const Scheme& scheme, const SimConfig& config,
                            const SimReport& report) {
    std::ostringstream out;
    out << "scheme: " << scheme.spec_string() << "\n";
    out << "rounds: " << config.rounds << " (settled " << report.settled_rounds << ")   shares: "
        << report.total_shares << " (pending " << report.pending_shares << ")   seed: "
        << config.seed << "\n";
    out << "round totals: mean " << stat_str(report.exact, report.round_mean, report.fround_mean)
        << ", variance "
        << stat_str(report.exact, report.round_variance, report.fround_variance) << "\n\n";
    out << "miner  weight  shares  total\n";
    for (const SimMiner& m : report.miners) {
        char line[64];
        std::snprintf(line, sizeof line, "%-5s  %-6ld  %-6ld  ", m.name.c_str(), m.weight,
                      m.shares);
        out << line
            << (report.exact ? m.total.value.decimal_str() : format_double(m.total.approx))
            << "\n";
    }
    out << "\ntotal paid: "
        << (report.exact ? report.grand_total.value.decimal_str()
                         : format_double(report.grand_total.approx))
        << "\n";
    return out.str();
}

ordered_json sim_to_json(const Scheme& scheme, const SimConfig& config, const SimReport& report) {
    ordered_json doc;
    doc["scheme"] = scheme.spec_string();
    ordered_json cfg;
    cfg["weights"] = config.weights;
    cfg["solve_probability"] = config.solve_probability.str();
    cfg["rounds"] = config.rounds;
    cfg["seed"] = config.seed;
    cfg["block_reward"] = config.reward.block_reward.str();
    cfg["fee"] = config.reward.fee.str();
    doc["config"] = std::move(cfg);
    doc["total_shares"] = report.total_shares;
    doc["pending_shares"] = report.pending_shares;
    doc["settled_rounds"] = report.settled_rounds;
    if (report.exact) {
        doc["round_total_mean"] = report.round_mean.str();
        doc["round_total_variance"] = report.round_variance.str();
        doc["total_paid"] = report.grand_total.value.str();
    } else {
        doc["round_total_mean"] = report.fround_mean;
        doc["round_total_variance"] = report.fround_variance;
        doc["total_paid"] = report.grand_total.approx;
    }
    ordered_json miners = ordered_json::array();
    for (const SimMiner& m : report.miners) {
        ordered_json e;
        e["name"] = m.name;
        e["weight"] = m.weight;
        e["shares"] = m.shares;
        e["total"] = report.exact ? ordered_json(m.total.value.str())
                                  : ordered_json(m.total.approx);
        miners.push_back(std::move(e));
    }
    doc["miners"] = std::move(miners);
    return doc;
}

}  // namespace fairpool
