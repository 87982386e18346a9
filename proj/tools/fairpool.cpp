#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairpool/harness.hpp"

using namespace fairpool;

namespace {

std::uint64_t seed_from_env() {
    const char* env = std::getenv("FAIRPOOL_SEED");
    if (!env) return 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') return 0;
    return v;
}

Rat parse_rat_arg(const std::string& text, const char* what) {
    auto r = Rat::parse(text);
    if (!r)
        throw ValidationError(ValidationCode::bad_reward_config,
                              std::string(what) + " is not a rational: " + text);
    return *r;
}

void add_budget_options(CLI::App* cmd, CheckBudget& budget) {
    cmd->add_option("--n-max", budget.n_max, "largest history size to enumerate")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-rounds", budget.max_rounds, "most rounds per history")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--trials", budget.random_trials, "randomized instances after the exhaustive ones")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", budget.seed, "seed for the randomized instances");
    cmd->add_option("--tolerance", budget.tolerance, "comparison tolerance for floating schemes")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reward schemes for mining pools: payouts, axiom checks, summary tables"};
    app.require_subcommand(1);
    const std::uint64_t default_seed = seed_from_env();

    auto* payout_cmd = app.add_subcommand("payout", "award every share of a history");
    std::string payout_scheme, payout_history;
    bool payout_json = false, payout_decimal = false;
    payout_cmd->add_option("--scheme", payout_scheme, "scheme spec, e.g. pplns:n=3")->required();
    payout_cmd->add_option("--history", payout_history, "history JSON file")->required();
    payout_cmd->add_flag("--json", payout_json, "emit JSON");
    payout_cmd->add_flag("--decimal", payout_decimal, "render awards as decimals");

    auto* check_cmd = app.add_subcommand("check", "search for axiom violations");
    std::string check_scheme;
    std::string check_axiom_name = "all";
    CheckBudget check_budget;
    check_budget.seed = default_seed;
    bool check_json = false;
    check_cmd->add_option("--scheme", check_scheme, "scheme spec")->required();
    {
        std::vector<std::string> names = {"all"};
        for (Axiom a : all_axioms) names.emplace_back(axiom_name(a));
        check_cmd->add_option("--axiom", check_axiom_name, "axiom to check, or all")
            ->check(CLI::IsMember(names));
    }
    add_budget_options(check_cmd, check_budget);
    check_cmd->add_flag("--json", check_json, "emit JSON");

    auto* tables_cmd = app.add_subcommand("tables", "reproduce a reference pass/fail table");
    int tables_which = 2;
    CheckBudget tables_budget;
    tables_budget.seed = default_seed;
    bool tables_json = false;
    tables_cmd->add_option("--which", tables_which, "table number")
        ->check(CLI::IsMember({1, 2}));
    add_budget_options(tables_cmd, tables_budget);
    tables_cmd->add_flag("--json", tables_json, "emit JSON");

    auto* sim_cmd = app.add_subcommand("simulate", "run a scheme over a synthetic share stream");
    std::string sim_scheme;
    SimConfig sim_config;
    sim_config.seed = default_seed;
    std::string sim_p = "1/100", sim_block = "1", sim_fee = "0";
    bool sim_json = false;
    sim_cmd->add_option("--scheme", sim_scheme, "scheme spec")->required();
    sim_cmd->add_option("--weights", sim_config.weights, "comma-separated miner weights")
        ->delimiter(',');
    sim_cmd->add_option("--p", sim_p, "per-share solve probability (rational)");
    sim_cmd->add_option("--rounds", sim_config.rounds, "rounds to generate")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim_config.seed, "stream seed");
    sim_cmd->add_option("--block-reward", sim_block, "block reward (rational)");
    sim_cmd->add_option("--fee", sim_fee, "pool fee (rational)");
    sim_cmd->add_flag("--json", sim_json, "emit JSON");

    auto* fixtures_cmd = app.add_subcommand("fixtures", "run the worked examples");
    bool fixtures_json = false;
    fixtures_cmd->add_flag("--json", fixtures_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (payout_cmd->parsed()) {
            Scheme scheme = Scheme::parse(payout_scheme);
            History h = load_history_file(payout_history);
            PayoutReport report = compute_payout_report(scheme, h);
            if (payout_json)
                std::cout << payout_to_json(scheme, h, report, payout_decimal).dump(2) << "\n";
            else
                std::cout << render_payout_text(scheme, h, report, payout_decimal);
            return 0;
        }

        if (check_cmd->parsed()) {
            Scheme scheme = Scheme::parse(check_scheme);
            bool any_failed = false;
            if (check_axiom_name == "all") {
                auto verdicts = check_all(scheme, check_budget);
                if (check_json) {
                    ordered_json arr = ordered_json::array();
                    for (const Verdict& v : verdicts) arr.push_back(verdict_to_json(scheme, v));
                    std::cout << arr.dump(2) << "\n";
                } else {
                    std::cout << "scheme: " << scheme.spec_string() << "\n";
                    for (const Verdict& v : verdicts) std::cout << render_verdict_text(scheme, v);
                }
                for (const Verdict& v : verdicts) any_failed |= v.failed;
            } else {
                Verdict v = check_axiom(scheme, *axiom_from_name(check_axiom_name), check_budget);
                if (check_json)
                    std::cout << verdict_to_json(scheme, v).dump(2) << "\n";
                else
                    std::cout << "scheme: " << scheme.spec_string() << "\n"
                              << render_verdict_text(scheme, v);
                any_failed = v.failed;
            }
            return any_failed ? 1 : 0;
        }

        if (tables_cmd->parsed()) {
            TableReport report = reproduce_table(tables_which, tables_budget);
            if (tables_json)
                std::cout << table_to_json(report).dump(2) << "\n";
            else
                std::cout << render_table_text(report);
            return report.matches_expected ? 0 : 1;
        }

        if (sim_cmd->parsed()) {
            Scheme scheme = Scheme::parse(sim_scheme);
            sim_config.solve_probability = parse_rat_arg(sim_p, "--p");
            sim_config.reward.block_reward = parse_rat_arg(sim_block, "--block-reward");
            sim_config.reward.fee = parse_rat_arg(sim_fee, "--fee");
            SimReport report = simulate(scheme, sim_config);
            if (sim_json)
                std::cout << sim_to_json(scheme, sim_config, report).dump(2) << "\n";
            else
                std::cout << render_sim_text(scheme, sim_config, report);
            return 0;
        }

        if (fixtures_cmd->parsed()) {
            auto results = run_fixture_examples();
            int passed = 0;
            if (fixtures_json) {
                ordered_json arr = ordered_json::array();
                for (const FixtureResult& fr : results) {
                    ordered_json e;
                    e["name"] = fr.name;
                    e["pass"] = fr.pass;
                    e["detail"] = fr.detail;
                    arr.push_back(std::move(e));
                    passed += fr.pass;
                }
                std::cout << arr.dump(2) << "\n";
            } else {
                for (const FixtureResult& fr : results) {
                    std::cout << (fr.pass ? "PASS" : "FAIL") << "  " << fr.name << ": "
                              << fr.detail << "\n";
                    passed += fr.pass;
                }
                std::cout << passed << " of " << results.size() << " fixtures passed\n";
            }
            return passed == static_cast<int>(results.size()) ? 0 : 1;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error (" << validation_code_name(e.code) << "): " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
