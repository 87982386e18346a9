#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairpool/core.hpp"

namespace fairpool {

// Per-rank weight table for the two parametric fairness families.
// Entry j (1-based) is the fraction of R awarded to the share of rank j when
// that share is the last of its round; eps(1) is pinned to 1 so that a
// one-share round pays the whole net reward.
struct EpsilonTable {
    static constexpr int default_size = 64;

    std::vector<Rat> values;

    static EpsilonTable from_values(std::vector<Rat> v);
    // eps(j) = 1/j, the table under which both families reduce to proportional.
    static EpsilonTable proportional(int n = default_size);
    // eps(j) = r^(j-1)(r-1)/(r^j-1): the member table of the constrained
    // geometric scheme. Note 1 - eps(j) = (r^(j-1)-1)/(r^j-1), so the decay
    // product telescopes to (r-1) r^(rank-1)/(r^n-1).
    static EpsilonTable constrained_geometric_member(const Rat& r, int n = default_size);

    int size() const { return static_cast<int>(values.size()); }
    const Rat& at(int j) const { return values[j - 1]; }  // 1-based

    // sum_{i=j+1}^{N} eps(i)/(i-1): the total later ranks claw back from rank j.
    Rat tail_weight(int j) const;

    // eps(1) == 1 and all entries in [0, 1].
    void require_relative() const;  // throws ValidationError(bad_epsilon)
    // Additionally eps(j) >= tail_weight(j) for every j, so no award in any
    // round of length <= N can go negative.
    void require_absolute() const;  // throws ValidationError(bad_epsilon)
};

enum class SchemeKind {
    proportional,
    absolute_fair,
    relative_fair,
    k_pseudo,
    pps,
    pplns,
    geometric,
    constrained_geometric,
    ic,
    slush,
    indep1,
    indep2,
    indep3,
    indep4,
    indep5,
    indep6,
};

const char* scheme_kind_name(SchemeKind kind);

// One share's award. Exact schemes fill `value` (and mirror it in `approx`);
// the floating-point scheme (slush) fills only `approx`. A pending award is
// PPLNS's open tail: the window of the next N shares runs past the end of the
// history, and `value` holds the amount accrued from the full solutions that
// do exist in the window (the final award can only grow from there).
struct Award {
    Rat value;
    double approx = 0.0;
    bool pending = false;
};

class Scheme {
public:
    Scheme() = default;  // proportional

    static Scheme proportional();
    static Scheme absolute_fair(EpsilonTable eps);
    static Scheme relative_fair(EpsilonTable eps);
    // k = nullopt means unbounded, which reduces to proportional.
    static Scheme k_pseudo(std::optional<long> k, Rat delta);
    // Pay-per-share: flat award c per share; by default c = R/3.
    static Scheme pps(std::optional<Rat> c = std::nullopt);
    static Scheme pplns(long n);
    static Scheme geometric(Rat r);
    static Scheme constrained_geometric(Rat r);
    static Scheme ic(long d);
    static Scheme slush(double lambda = 1200.0);
    // The six single-axiom-violation schemes; id in 1..6.
    static Scheme independence(int id);
    static Scheme independence2(Rat lambda);     // 0 < lambda < R, default R/2
    static Scheme independence6(Rat threshold);  // time-gap threshold, default 1/2

    SchemeKind kind() const { return kind_; }
    bool floating() const { return kind_ == SchemeKind::slush; }
    const EpsilonTable& epsilon() const { return eps_; }

    // Round-trippable textual form, e.g. "kpseudo:k=3,delta=1/10".
    std::string spec_string() const;
    // Parses the spec-string grammar: name[:key=value[,key=value]...].
    // Epsilon tables load from "eps=@file.json" (a JSON array of rationals)
    // or inline "eps=[1;2/5;1/5]".
    static Scheme parse(const std::string& text);  // throws ValidationError / IoError

    Award award(const History& h, size_t i) const;
    std::vector<Award> awards(const History& h) const;

private:
    SchemeKind kind_ = SchemeKind::proportional;
    EpsilonTable eps_;              // absolute_fair / relative_fair
    std::optional<long> k_;         // k_pseudo (nullopt = unbounded)
    Rat delta_;                     // k_pseudo
    std::optional<Rat> c_;          // pps (nullopt -> R/3)
    long window_ = 0;               // pplns
    Rat rate_;                      // geometric / constrained_geometric
    long capacity_ = 0;             // ic
    double lambda_ = 0.0;           // slush
    std::optional<Rat> share_cut_;  // indep2 (nullopt -> R/2)
    Rat gap_threshold_;             // indep6
};

struct PayoutRow {
    std::string id;
    int round = 0;
    int rank = 0;
    Award award;
};

struct PayoutReport {
    std::vector<PayoutRow> rows;
    // Per-round sums over non-pending members only; `round_has_pending`
    // marks rounds whose sum is therefore still a lower bound.
    std::vector<Award> round_sums;
    std::vector<bool> round_has_pending;
    Award total;
    int pending_shares = 0;
};

PayoutReport compute_payout_report(const Scheme& scheme, const History& h);

}  // namespace fairpool
