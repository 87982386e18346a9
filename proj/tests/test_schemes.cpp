#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fairpool/core.hpp"
#include "fairpool/schemes.hpp"

using namespace fairpool;

// Expected award lists in this file are frozen outputs of
// tools/oracles/expected_values.py, which recomputes every one of them
// independently of this library.

namespace {

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

std::vector<Rat> values(const Scheme& s, const History& h) {
    std::vector<Rat> out;
    for (const Award& a : s.awards(h)) out.push_back(a.value);
    return out;
}

EpsilonTable table_152() {
    return EpsilonTable::from_values({Rat(1), Rat(2, 5), Rat(1, 5)});
}

}  // namespace

TEST_CASE("proportional splits each round evenly") {
    Scheme p = Scheme::proportional();
    CHECK(values(p, make_history({3})) == std::vector<Rat>{Rat(1, 3), Rat(1, 3), Rat(1, 3)});
    CHECK(values(p, make_history({2, 1})) == std::vector<Rat>{Rat(1, 2), Rat(1, 2), Rat(1)});

    History fee = make_history({2}, RewardConfig{Rat(3), Rat(1)});
    CHECK(values(p, fee) == std::vector<Rat>{Rat(1), Rat(1)});
}

TEST_CASE("epsilon table constraints") {
    CHECK_NOTHROW(table_152().require_absolute());
    CHECK_NOTHROW(EpsilonTable::proportional().require_absolute());

    // tail weights of [1, 2/5, 1/5]: 2/5 + (1/5)/2 = 1/2 at rank 1, 1/10 at rank 2
    EpsilonTable t = table_152();
    CHECK(t.tail_weight(1) == Rat(1, 2));
    CHECK(t.tail_weight(2) == Rat(1, 10));
    CHECK(t.tail_weight(3) == Rat(0));
    CHECK(t.at(1) == Rat(1));

    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const ValidationError& e) {
            return e.code;
        }
        return ValidationCode::empty_history;
    };
    CHECK(code_of([] { EpsilonTable::from_values({}).require_relative(); }) ==
          ValidationCode::bad_epsilon);
    CHECK(code_of([] { EpsilonTable::from_values({Rat(1, 2)}).require_relative(); }) ==
          ValidationCode::bad_epsilon);
    CHECK(code_of([] { EpsilonTable::from_values({Rat(1), Rat(3, 2)}).require_relative(); }) ==
          ValidationCode::bad_epsilon);
    CHECK(code_of([] { EpsilonTable::from_values({Rat(1), Rat(-1, 2)}).require_relative(); }) ==
          ValidationCode::bad_epsilon);
    // rank 2 pays 0 but rank 3 still needs feeding: 0 < (1)/2
    CHECK(code_of([] {
              EpsilonTable::from_values({Rat(1), Rat(0), Rat(1)}).require_absolute();
          }) == ValidationCode::bad_epsilon);
}

TEST_CASE("absolute fair awards") {
    Scheme s = Scheme::absolute_fair(table_152());
    CHECK(values(s, make_history({3})) == std::vector<Rat>{Rat(1, 2), Rat(3, 10), Rat(1, 5)});

    // scales with the net reward
    History h2 = make_history({3}, RewardConfig{Rat(2), Rat(0)});
    CHECK(values(s, h2) == std::vector<Rat>{Rat(1), Rat(3, 5), Rat(2, 5)});

    // a round longer than the table is refused
    try {
        s.awards(make_history({4}));
        FAIL("expected round_too_long");
    } catch (const ValidationError& e) {
        CHECK(e.code == ValidationCode::round_too_long);
    }
}

TEST_CASE("relative fair awards") {
    Scheme s = Scheme::relative_fair(table_152());
    CHECK(values(s, make_history({3})) == std::vector<Rat>{Rat(12, 25), Rat(8, 25), Rat(1, 5)});
    CHECK(values(s, make_history({1})) == std::vector<Rat>{Rat(1)});
    CHECK(values(s, make_history({2})) == std::vector<Rat>{Rat(3, 5), Rat(2, 5)});
}

TEST_CASE("k-pseudo-proportional awards") {
    Scheme s = Scheme::k_pseudo(3, Rat(1, 10));
    CHECK(values(s, make_history({5})) ==
          std::vector<Rat>{Rat(9, 20), Rat(9, 20), Rat(1, 10), Rat(0), Rat(0)});
    CHECK(values(s, make_history({2})) == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});

    CHECK(values(Scheme::k_pseudo(2, Rat(1)), make_history({2})) ==
          std::vector<Rat>{Rat(0), Rat(1)});

    // infinite k is plain proportional
    Scheme inf = Scheme::k_pseudo(std::nullopt, Rat(1, 10));
    History h = make_history({2, 3});
    CHECK(values(inf, h) == values(Scheme::proportional(), h));

    CHECK_THROWS_AS(Scheme::k_pseudo(1, Rat(0)), ValidationError);
    CHECK_THROWS_AS(Scheme::k_pseudo(2, Rat(-1, 2)), ValidationError);
    // delta may not exceed the net reward; checked against the history
    CHECK_THROWS_AS(Scheme::k_pseudo(2, Rat(3, 2)).awards(make_history({2})), ValidationError);
}

TEST_CASE("pps pays a flat rate per share") {
    History h = make_history({2, 1});
    CHECK(values(Scheme::pps(), h) == std::vector<Rat>{Rat(1, 3), Rat(1, 3), Rat(1, 3)});
    CHECK(values(Scheme::pps(Rat(1, 5)), h) ==
          std::vector<Rat>{Rat(1, 5), Rat(1, 5), Rat(1, 5)});

    // default rate follows the net reward
    History fee = make_history({1}, RewardConfig{Rat(2), Rat(1, 2)});
    CHECK(values(Scheme::pps(), fee) == std::vector<Rat>{Rat(1, 2)});

    CHECK_THROWS_AS(Scheme::pps(Rat(0)), ValidationError);
    CHECK_THROWS_AS(Scheme::pps(Rat(-1)), ValidationError);
}

TEST_CASE("pplns window awards and pending tail") {
    Scheme s = Scheme::pplns(3);
    History h = make_history({5, 1, 1, 1, 12});
    auto awards = s.awards(h);
    REQUIRE(awards.size() == 20);

    const Rat first9[] = {Rat(0), Rat(0), Rat(1, 3), Rat(2, 3), Rat(1),
                          Rat(1), Rat(2, 3), Rat(1, 3), Rat(0)};
    for (size_t i = 0; i < 9; ++i) {
        CHECK(!awards[i].pending);
        CHECK(awards[i].value == first9[i]);
    }
    // the last N shares have no window left to settle in
    for (size_t i = 17; i < 20; ++i) {
        CHECK(awards[i].pending);
        CHECK(awards[i].value == Rat(1, 3));
    }

    CHECK_THROWS_AS(Scheme::pplns(0), ValidationError);
}

TEST_CASE("pplns payout report separates pending accruals") {
    History h = make_history({2, 1, 3});
    auto report = compute_payout_report(Scheme::pplns(3), h);

    const Rat vals[] = {Rat(2, 3), Rat(2, 3), Rat(1, 3), Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    REQUIRE(report.rows.size() == 6);
    for (size_t i = 0; i < 6; ++i) {
        CHECK(report.rows[i].award.value == vals[i]);
        CHECK(report.rows[i].award.pending == (i >= 3));
    }
    CHECK(report.rows[0].round == 1);
    CHECK(report.rows[3].rank == 1);

    REQUIRE(report.round_sums.size() == 3);
    CHECK(report.round_sums[0].value == Rat(4, 3));
    CHECK(report.round_sums[1].value == Rat(1, 3));
    CHECK(report.round_sums[2].value == Rat(0));
    CHECK(report.round_has_pending == std::vector<bool>{false, false, true});
    CHECK(report.total.value == Rat(5, 3));
    CHECK(report.pending_shares == 3);
}

TEST_CASE("geometric awards double toward the full solution") {
    Scheme g2 = Scheme::geometric(Rat(2));
    History h = make_history({2});
    CHECK(values(g2, h) == std::vector<Rat>{Rat(1, 4), Rat(1, 2)});
    CHECK(values(g2, h.extend_round(1)) == std::vector<Rat>{Rat(1, 8), Rat(1, 4), Rat(1, 2)});

    Scheme g5 = Scheme::geometric(Rat(5));
    CHECK(values(g5, make_history({2})) == std::vector<Rat>{Rat(4, 25), Rat(4, 5)});
    CHECK(values(g5, make_history({3})) ==
          std::vector<Rat>{Rat(4, 125), Rat(4, 25), Rat(4, 5)});

    // pays from the block reward; the fee field is the scheme's own margin
    History fee = make_history({2}, RewardConfig{Rat(1), Rat(1, 2)});
    CHECK(values(g2, fee) == std::vector<Rat>{Rat(1, 4), Rat(1, 2)});

    CHECK_THROWS_AS(Scheme::geometric(Rat(1)), ValidationError);
    CHECK_THROWS_AS(Scheme::geometric(Rat(1, 2)), ValidationError);
}

TEST_CASE("constrained geometric pays the whole block") {
    Scheme cg = Scheme::constrained_geometric(Rat(2));
    CHECK(values(cg, make_history({2})) == std::vector<Rat>{Rat(1, 3), Rat(2, 3)});
    CHECK(values(cg, make_history({3})) ==
          std::vector<Rat>{Rat(1, 7), Rat(2, 7), Rat(4, 7)});

    // same scheme as relative fair over the matching member table
    for (int n = 1; n <= 5; ++n) {
        History h = make_history({n});
        Scheme rf = Scheme::relative_fair(EpsilonTable::constrained_geometric_member(Rat(2)));
        CHECK(values(cg, h) == values(rf, h));
    }

    // a nearby table gives a genuinely different scheme
    Scheme other = Scheme::relative_fair(
        EpsilonTable::from_values({Rat(1), Rat(1, 3), Rat(3, 7)}));
    CHECK(values(other, make_history({3})) ==
          std::vector<Rat>{Rat(8, 21), Rat(4, 21), Rat(3, 7)});
}

TEST_CASE("ic splits up to capacity and tops up the solver") {
    RewardConfig rc{Rat(12), Rat(0)};
    Scheme s = Scheme::ic(4);
    CHECK(values(s, make_history({2}, rc)) == std::vector<Rat>{Rat(3), Rat(9)});
    CHECK(values(s, make_history({6}, rc)) ==
          std::vector<Rat>(6, Rat(2)));

    // at exactly |P| = D every branch agrees on R/D
    CHECK(values(Scheme::ic(3), make_history({3})) ==
          std::vector<Rat>{Rat(1, 3), Rat(1, 3), Rat(1, 3)});

    CHECK_THROWS_AS(Scheme::ic(0), ValidationError);
}

TEST_CASE("slush awards decay with the time signature") {
    Scheme s = Scheme::slush(1200.0);
    CHECK(s.floating());
    CHECK(!Scheme::proportional().floating());

    auto awards = s.awards(make_history({2, 1}));
    REQUIRE(awards.size() == 3);
    CHECK(awards[0].approx == doctest::Approx(0.832847261).epsilon(1e-8));
    CHECK(awards[1].approx == doctest::Approx(0.833541589).epsilon(1e-8));
    CHECK(awards[2].approx == doctest::Approx(0.333611150).epsilon(1e-8));
    CHECK(!awards[0].pending);

    auto ext = s.awards(make_history({2, 1}).extend_round(1));
    REQUIRE(ext.size() == 4);
    CHECK(ext[0].approx == doctest::Approx(0.582867575).epsilon(1e-8));
    CHECK(ext[1].approx == doctest::Approx(0.583353500).epsilon(1e-8));

    // a huge decay constant flattens the scores to uniform weights
    auto flat = Scheme::slush(1e9).awards(make_history({2, 1}));
    CHECK(flat[0].approx == doctest::Approx(5.0 / 6.0).epsilon(1e-6));
    CHECK(flat[1].approx == doctest::Approx(5.0 / 6.0).epsilon(1e-6));
    CHECK(flat[2].approx == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

    CHECK_THROWS_AS(Scheme::slush(0.0), ValidationError);
    CHECK_THROWS_AS(Scheme::slush(-1.0), ValidationError);
}

TEST_CASE("independence schemes 1 through 6") {
    RewardConfig r6{Rat(6), Rat(0)};
    Scheme s1 = Scheme::independence(1);
    CHECK(values(s1, make_history({3}, r6)) == std::vector<Rat>(3, Rat(2)));
    CHECK(values(s1, make_history({2}, r6)) == std::vector<Rat>(2, Rat(3, 2)));

    Scheme s2 = Scheme::independence(2);  // lambda defaults to R/2
    CHECK(values(s2, make_history({2})) == std::vector<Rat>{Rat(3, 4), Rat(1, 4)});
    CHECK(values(s2, make_history({3})) == std::vector<Rat>{Rat(2, 3), Rat(1, 6), Rat(1, 6)});
    CHECK(values(s2, make_history({1})) == std::vector<Rat>{Rat(1)});
    CHECK_THROWS_AS(Scheme::independence2(Rat(2)).awards(make_history({2})), ValidationError);
    CHECK_THROWS_AS(Scheme::independence2(Rat(1)).awards(make_history({2})), ValidationError);

    RewardConfig r4{Rat(4), Rat(0)};
    Scheme s3 = Scheme::independence(3);
    CHECK(values(s3, make_history({3}, r4)) == std::vector<Rat>{Rat(1), Rat(1), Rat(2)});
    CHECK(values(s3, make_history({4})) ==
          std::vector<Rat>{Rat(1, 8), Rat(1, 8), Rat(1, 4), Rat(1, 2)});

    // scheme 4 keys every round off the first round's parity
    Scheme s4 = Scheme::independence(4);
    CHECK(values(s4, make_history({1, 2})) == std::vector<Rat>{Rat(1), Rat(1, 2), Rat(1, 2)});
    CHECK(values(s4, make_history({2, 1})) == std::vector<Rat>{Rat(1, 4), Rat(1, 4), Rat(1, 2)});

    Scheme s5 = Scheme::independence(5);
    CHECK(values(s5, make_history({2})) == std::vector<Rat>{Rat(1), Rat(1)});

    CHECK_THROWS_AS(Scheme::independence(0), ValidationError);
    CHECK_THROWS_AS(Scheme::independence(7), ValidationError);
}

TEST_CASE("independence scheme 6 branches on the opening gap") {
    Scheme s6 = Scheme::independence(6);  // threshold 1/2
    CHECK(values(s6, make_history({1})) == std::vector<Rat>{Rat(1)});

    // wide gap: delta R/3
    CHECK(values(s6, make_history({2})) == std::vector<Rat>{Rat(2, 3), Rat(1, 3)});
    CHECK(values(s6, make_history({3})) == std::vector<Rat>{Rat(2, 3), Rat(1, 3), Rat(0)});

    // narrow gap: delta R/2
    History narrow({{"a", Rat(1), false}, {"b", Rat(5, 4), true}}, RewardConfig{});
    CHECK(values(s6, narrow) == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});

    CHECK_THROWS_AS(Scheme::independence6(Rat(0)), ValidationError);
}

TEST_CASE("exact awards carry a floating mirror") {
    auto awards = Scheme::constrained_geometric(Rat(2)).awards(make_history({2}));
    CHECK(awards[0].approx == doctest::Approx(awards[0].value.to_double()));
    CHECK(awards[1].approx == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("scheme strings round-trip through parse") {
    const char* specs[] = {
        "proportional",
        "pps",
        "pps:c=1/5",
        "kpseudo:k=3,delta=1/10",
        "kpseudo:k=inf,delta=0",
        "pplns:n=3",
        "geometric:r=2",
        "cgeometric:r=3/2",
        "ic:d=3",
        "slush:lambda=1200",
        "slush:lambda=2.5",
        "absfair:eps=[1;2/5;1/5]",
        "relfair:eps=[1;1/3;3/7]",
        "indep1",
        "indep2",
        "indep2:lambda=1/4",
        "indep5",
        "indep6",
        "indep6:t=1/4",
    };
    for (const char* spec : specs) {
        CAPTURE(spec);
        CHECK(Scheme::parse(spec).spec_string() == spec);
    }

    // parameters are canonicalized, not echoed
    CHECK(Scheme::parse("geometric:r=4/2").spec_string() == "geometric:r=2");
}

TEST_CASE("scheme string errors") {
    const char* bad[] = {
        "nope",
        "pplns",             // misses n
        "pplns:n=abc",
        "pplns:n=0",
        "geometric:r=1",
        "geometric",
        "kpseudo:k=3",       // misses delta
        "kpseudo:k=1,delta=0",
        "kpseudo:delta=0",
        "pps:c=0",
        "pps:c",             // not key=value
        "proportional:x=1",  // unknown parameter
        "slush:lambda=abc",
        "absfair:eps=oops",
        "indep0",
        "indep7",
    };
    for (const char* spec : bad) {
        CAPTURE(spec);
        try {
            Scheme::parse(spec);
            FAIL_CHECK("expected a ValidationError for " << spec);
        } catch (const ValidationError& e) {
            CHECK(e.code == ValidationCode::bad_scheme_param);
        }
    }
}

TEST_CASE("epsilon tables load from JSON files") {
    std::string dir = "/tmp/fairpool_eps_" + std::to_string(getpid());
    REQUIRE(std::system(("mkdir -p " + dir).c_str()) == 0);

    std::string good = dir + "/eps.json";
    std::ofstream(good) << R"(["1", "2/5", "1/5"])";
    Scheme s = Scheme::parse("absfair:eps=@" + good);
    CHECK(values(s, make_history({3})) == std::vector<Rat>{Rat(1, 2), Rat(3, 10), Rat(1, 5)});

    std::string ints = dir + "/ints.json";
    std::ofstream(ints) << R"([1, 0])";
    CHECK_NOTHROW(Scheme::parse("absfair:eps=@" + ints));

    CHECK_THROWS_AS(Scheme::parse("absfair:eps=@" + dir + "/missing.json"), IoError);

    std::string broken = dir + "/broken.json";
    std::ofstream(broken) << "[1, ";
    CHECK_THROWS_AS(Scheme::parse("absfair:eps=@" + broken), IoError);

    std::string object = dir + "/object.json";
    std::ofstream(object) << R"({"eps": 1})";
    CHECK_THROWS_AS(Scheme::parse("absfair:eps=@" + object), IoError);

    std::string badentry = dir + "/badentry.json";
    std::ofstream(badentry) << R"(["1", "x"])";
    try {
        Scheme::parse("absfair:eps=@" + badentry);
        FAIL("expected bad_epsilon");
    } catch (const ValidationError& e) {
        CHECK(e.code == ValidationCode::bad_epsilon);
    }

    std::system(("rm -rf " + dir).c_str());
}
