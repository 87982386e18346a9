#include "fairpool/axioms.hpp"

#include <algorithm>
#include <cmath>

#include "fairpool/rng.hpp"

namespace fairpool {

const char* axiom_name(Axiom a) {
    switch (a) {
        case Axiom::fixed_total_reward: return "fixed_total_reward";
        case Axiom::ordinality: return "ordinality";
        case Axiom::budget_limit: return "budget_limit";
        case Axiom::absolute_redistribution: return "absolute_redistribution";
        case Axiom::relative_redistribution: return "relative_redistribution";
        case Axiom::round_based_rewards: return "round_based_rewards";
        case Axiom::strict_positivity: return "strict_positivity";
    }
    return "?";
}

std::optional<Axiom> axiom_from_name(std::string_view name) {
    for (Axiom a : all_axioms)
        if (name == axiom_name(a)) return a;
    return std::nullopt;
}

namespace {

History history_from_composition(const std::vector<int>& comp, const std::vector<Rat>& times) {
    std::vector<Share> shares(times.size());
    size_t idx = 0;
    for (int part : comp) {
        for (int k = 0; k < part; ++k, ++idx) {
            shares[idx].id = "s" + std::to_string(idx + 1);
            shares[idx].time = times[idx];
            shares[idx].full = (k == part - 1);
        }
    }
    return History(std::move(shares), RewardConfig{});
}

void emit_compositions(int n, int parts, std::vector<int>& prefix,
                       std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        prefix.push_back(n);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int first = 1; first + parts - 1 <= n; ++first) {
        prefix.push_back(first);
        emit_compositions(n - first, parts - 1, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<History> generate_instances(const CheckBudget& budget) {
    std::vector<History> out;

    for (int n = 1; n <= budget.n_max; ++n) {
        std::vector<std::vector<int>> comps;
        std::vector<int> prefix;
        for (int p = 1; p <= std::min(n, budget.max_rounds); ++p)
            emit_compositions(n, p, prefix, comps);
        std::vector<Rat> times;
        times.reserve(n);
        for (int t = 1; t <= n; ++t) times.emplace_back(t);
        for (const auto& comp : comps) out.push_back(history_from_composition(comp, times));
    }

    for (int j = 0; j < budget.random_trials; ++j) {
        SplitMix64 rng{budget.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(j + 1)};
        int raw_n = 2 + static_cast<int>(rng.below(15));
        int raw_rounds = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(raw_n)));

        // Draw the whole shape before filtering against the caps, so raising
        // n_max or max_rounds only admits trials that were skipped before and
        // never changes the ones already generated.
        std::vector<int> comp;
        int remaining = raw_n;
        for (int p = raw_rounds; p > 1; --p) {
            int part = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(remaining - (p - 1))));
            comp.push_back(part);
            remaining -= part;
        }
        comp.push_back(remaining);

        std::vector<Rat> times;
        times.reserve(raw_n);
        Rat t(static_cast<long>(1 + rng.below(8)));
        for (int i = 0; i < raw_n; ++i) {
            times.push_back(t);
            long num = static_cast<long>(1 + rng.below(8));
            long den = 1L << rng.below(4);
            t += Rat(num, den);
        }

        if (raw_n > budget.n_max || raw_rounds > budget.max_rounds) continue;
        out.push_back(history_from_composition(comp, times));
    }
    return out;
}

namespace {

// Violation predicates shared by the search and the reverifier. Exact schemes
// compare rationals; the floating scheme compares doubles against a tolerance
// already scaled to the award size.
struct Comparer {
    bool exact;
    double tol;

    bool ne(const Rat& a, const Rat& b, double fa, double fb) const {
        return exact ? a != b : std::fabs(fa - fb) > tol;
    }
    bool gt(const Rat& a, const Rat& b, double fa, double fb) const {
        return exact ? a > b : fa - fb > tol;
    }
    bool nonpositive(const Rat& a, double fa) const {
        return exact ? !a.is_positive() : fa <= 0.0;
    }
};

void add_note(std::vector<std::string>* notes, const char* text) {
    if (!notes) return;
    if (std::find(notes->begin(), notes->end(), text) == notes->end())
        notes->emplace_back(text);
}

struct RoundSums {
    std::vector<Rat> sums;
    std::vector<double> fsums;
    std::vector<bool> usable;  // false when the round has a pending member
    bool any_skipped = false;
};

RoundSums sum_rounds(const History& h, const std::vector<Award>& awards) {
    RoundSums rs;
    rs.sums.assign(h.round_count(), Rat(0));
    rs.fsums.assign(h.round_count(), 0.0);
    rs.usable.assign(h.round_count(), true);
    for (size_t i = 0; i < h.size(); ++i) {
        int r = h.omega(i) - 1;
        if (awards[i].pending) {
            rs.usable[r] = false;
            rs.any_skipped = true;
            continue;
        }
        rs.sums[r] += awards[i].value;
        rs.fsums[r] += awards[i].approx;
    }
    return rs;
}

Witness start_witness(Axiom axiom, bool exact, const History& h) {
    Witness w;
    w.axiom = axiom;
    w.exact = exact;
    w.histories.push_back(h);
    return w;
}

void set_values(Witness& w, const Rat& lhs, const Rat& rhs, double flhs, double frhs) {
    w.lhs = lhs;
    w.rhs = rhs;
    w.flhs = flhs;
    w.frhs = frhs;
}

}  // namespace

std::optional<Witness> find_violation(const Scheme& scheme, Axiom axiom, const History& h,
                                      double tolerance, std::vector<std::string>* notes) {
    const bool exact = !scheme.floating();
    const Comparer cmp{exact, tolerance * h.reward().net().to_double()};
    const auto base = scheme.awards(h);

    switch (axiom) {
        case Axiom::fixed_total_reward: {
            RoundSums rs = sum_rounds(h, base);
            if (rs.any_skipped)
                add_note(notes, "rounds with pending awards were skipped when comparing round totals");
            for (int r1 = 0; r1 < h.round_count(); ++r1) {
                if (!rs.usable[r1]) continue;
                for (int r2 = r1 + 1; r2 < h.round_count(); ++r2) {
                    if (!rs.usable[r2]) continue;
                    if (!cmp.ne(rs.sums[r1], rs.sums[r2], rs.fsums[r1], rs.fsums[r2])) continue;
                    Witness w = start_witness(axiom, exact, h);
                    w.round_indices = {r1 + 1, r2 + 1};
                    set_values(w, rs.sums[r1], rs.sums[r2], rs.fsums[r1], rs.fsums[r2]);
                    w.relation = "ne";
                    w.note = "two rounds pay different totals";
                    return w;
                }
            }
            return std::nullopt;
        }

        case Axiom::ordinality: {
            static const Rat fracs[] = {Rat(1, 4), Rat(1, 2), Rat(3, 4)};
            for (size_t i = 0; i < h.size(); ++i) {
                const Rat& cur = h.shares()[i].time;
                Rat lo = i > 0 ? h.shares()[i - 1].time : cur - Rat(1);
                Rat hi = i + 1 < h.size() ? h.shares()[i + 1].time : cur + Rat(1);
                for (const Rat& f : fracs) {
                    Rat t = lo + f * (hi - lo);
                    if (t == cur) continue;
                    History shifted_h = h.with_share_time(i, t);
                    auto shifted = scheme.awards(shifted_h);
                    for (size_t j = 0; j < h.size(); ++j) {
                        if (j == i) continue;
                        bool status_change = base[j].pending != shifted[j].pending;
                        if (!status_change && !cmp.ne(base[j].value, shifted[j].value,
                                                      base[j].approx, shifted[j].approx))
                            continue;
                        Witness w = start_witness(axiom, exact, h);
                        w.histories.push_back(std::move(shifted_h));
                        w.share_indices = {i, j};
                        set_values(w, base[j].value, shifted[j].value, base[j].approx,
                                   shifted[j].approx);
                        w.relation = "ne";
                        w.note = status_change
                                     ? "moving one share's time flipped another share's award "
                                       "between pending and final"
                                     : "moving one share's time changed another share's award";
                        return w;
                    }
                }
            }
            return std::nullopt;
        }

        case Axiom::budget_limit: {
            RoundSums rs = sum_rounds(h, base);
            if (rs.any_skipped)
                add_note(notes, "rounds with pending awards were skipped when checking the budget");
            const Rat& B = h.reward().block_reward;
            const double fB = B.to_double();
            for (int r = 0; r < h.round_count(); ++r) {
                if (!rs.usable[r]) continue;
                if (!cmp.gt(rs.sums[r], B, rs.fsums[r], fB)) continue;
                Witness w = start_witness(axiom, exact, h);
                w.round_indices = {r + 1};
                set_values(w, rs.sums[r], B, rs.fsums[r], fB);
                w.relation = "gt";
                w.note = "a round pays more than the block reward";
                return w;
            }
            return std::nullopt;
        }

        case Axiom::absolute_redistribution:
        case Axiom::relative_redistribution: {
            const bool relative = axiom == Axiom::relative_redistribution;
            for (int r = 1; r <= h.round_count(); ++r) {
                if (h.round_length(r) < 2) continue;
                History extended = h.extend_round(r);
                auto ext = scheme.awards(extended);
                auto [begin, end] = h.round_span(r);
                std::vector<size_t> usable;
                for (size_t i = begin; i < end; ++i) {
                    if (base[i].pending || ext[i].pending) {
                        add_note(notes,
                                 "shares with pending awards were excluded from redistribution "
                                 "comparisons");
                        continue;
                    }
                    if (relative) {
                        bool zero_base = exact ? base[i].value.is_zero()
                                               : std::fabs(base[i].approx) <= cmp.tol;
                        if (zero_base) {
                            add_note(notes,
                                     "shares with zero awards were excluded from ratio "
                                     "comparisons");
                            continue;
                        }
                    }
                    usable.push_back(i);
                }
                for (size_t k = 1; k < usable.size(); ++k) {
                    size_t a = usable[0], b = usable[k];
                    Rat lhs, rhs;
                    double flhs, frhs;
                    bool violated;
                    if (relative) {
                        if (exact) {
                            lhs = ext[a].value / base[a].value;
                            rhs = ext[b].value / base[b].value;
                        }
                        flhs = ext[a].approx / base[a].approx;
                        frhs = ext[b].approx / base[b].approx;
                        violated = exact ? lhs != rhs : std::fabs(flhs - frhs) > tolerance;
                    } else {
                        lhs = base[a].value - ext[a].value;
                        rhs = base[b].value - ext[b].value;
                        flhs = base[a].approx - ext[a].approx;
                        frhs = base[b].approx - ext[b].approx;
                        violated = cmp.ne(lhs, rhs, flhs, frhs);
                    }
                    if (!violated) continue;
                    Witness w = start_witness(axiom, exact, h);
                    w.histories.push_back(std::move(extended));
                    w.share_indices = {a, b};
                    w.round_indices = {r};
                    set_values(w, lhs, rhs, flhs, frhs);
                    w.relation = "ne";
                    w.note = relative ? "extending the round scaled two members' awards by "
                                        "different ratios"
                                      : "extending the round changed two members' awards by "
                                        "different amounts";
                    return w;
                }
            }
            return std::nullopt;
        }

        case Axiom::round_based_rewards: {
            for (int r = 1; r <= h.round_count(); ++r) {
                History restricted = h.restrict_to(r);
                auto sub = scheme.awards(restricted);
                auto [begin, end] = h.round_span(r);
                for (size_t gi = begin; gi < end; ++gi) {
                    size_t li = gi - begin;
                    if (!cmp.ne(base[gi].value, sub[li].value, base[gi].approx, sub[li].approx))
                        continue;
                    Witness w = start_witness(axiom, exact, h);
                    w.histories.push_back(std::move(restricted));
                    w.share_indices = {gi, li};
                    w.round_indices = {r};
                    set_values(w, base[gi].value, sub[li].value, base[gi].approx, sub[li].approx);
                    w.relation = "ne";
                    w.note = "award in the whole history differs from the award in the round "
                             "alone (accrued amounts compared while pending)";
                    return w;
                }
            }
            return std::nullopt;
        }

        case Axiom::strict_positivity: {
            for (size_t i = 0; i < h.size(); ++i) {
                if (base[i].pending) {
                    add_note(notes, "pending awards were not checked for positivity");
                    continue;
                }
                if (!cmp.nonpositive(base[i].value, base[i].approx)) continue;
                Witness w = start_witness(axiom, exact, h);
                w.share_indices = {i};
                set_values(w, base[i].value, Rat(0), base[i].approx, 0.0);
                w.relation = "le";
                w.note = "a share's award is not strictly positive";
                return w;
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::vector<History> shrink_candidates(const History& h) {
    std::vector<History> out;
    if (h.round_count() >= 2) {
        auto [begin, end] = h.round_span(h.round_count());
        (void)end;
        std::vector<Share> kept(h.shares().begin(), h.shares().begin() + begin);
        out.emplace_back(std::move(kept), h.reward());
    }
    for (size_t i = 0; i < h.size(); ++i) {
        if (h.shares()[i].full) continue;
        std::vector<Share> kept;
        kept.reserve(h.size() - 1);
        for (size_t p = 0; p < h.size(); ++p)
            if (p != i) kept.push_back(h.shares()[p]);
        out.emplace_back(std::move(kept), h.reward());
    }
    return out;
}

Verdict check_axiom(const Scheme& scheme, Axiom axiom, const CheckBudget& budget) {
    Verdict v;
    v.axiom = axiom;
    for (const History& h : generate_instances(budget)) {
        ++v.instances_checked;
        auto found = find_violation(scheme, axiom, h, budget.tolerance, &v.notes);
        if (!found) continue;

        v.failed = true;
        History minimal = h;
        for (bool progressed = true; progressed;) {
            progressed = false;
            for (History& cand : shrink_candidates(minimal)) {
                if (find_violation(scheme, axiom, cand, budget.tolerance, nullptr)) {
                    minimal = std::move(cand);
                    progressed = true;
                    break;
                }
            }
        }
        v.witness = find_violation(scheme, axiom, minimal, budget.tolerance, &v.notes);
        if (!v.witness) v.witness = std::move(found);  // cannot happen: minimal still violates
        break;
    }
    return v;
}

std::array<Verdict, axiom_count> check_all(const Scheme& scheme, const CheckBudget& budget) {
    std::array<Verdict, axiom_count> out;
    for (int i = 0; i < axiom_count; ++i) out[i] = check_axiom(scheme, all_axioms[i], budget);
    return out;
}

namespace {

bool same_share(const Share& a, const Share& b) {
    return a.id == b.id && a.time == b.time && a.full == b.full;
}

bool same_reward(const RewardConfig& a, const RewardConfig& b) {
    return a.block_reward == b.block_reward && a.fee == b.fee;
}

bool same_history(const History& a, const History& b) {
    if (a.size() != b.size() || !same_reward(a.reward(), b.reward())) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!same_share(a.shares()[i], b.shares()[i])) return false;
    return true;
}

bool values_match(bool exact, const Rat& got, const Rat& stored, double fgot, double fstored) {
    return exact ? got == stored : std::fabs(fgot - fstored) <= 1e-12;
}

}  // namespace

bool reverify(const Scheme& scheme, const Witness& w, double tolerance) {
    const bool exact = !scheme.floating();
    if (w.exact != exact || w.histories.empty()) return false;
    const History& h = w.histories[0];
    const Comparer cmp{exact, tolerance * h.reward().net().to_double()};

    switch (w.axiom) {
        case Axiom::fixed_total_reward: {
            if (w.histories.size() != 1 || w.round_indices.size() != 2) return false;
            int r1 = w.round_indices[0], r2 = w.round_indices[1];
            if (r1 < 1 || r2 < 1 || r1 > h.round_count() || r2 > h.round_count() || r1 == r2)
                return false;
            auto awards = scheme.awards(h);
            Rat s1, s2;
            double f1 = 0.0, f2 = 0.0;
            for (int pick = 0; pick < 2; ++pick) {
                auto [begin, end] = h.round_span(pick == 0 ? r1 : r2);
                for (size_t i = begin; i < end; ++i) {
                    if (awards[i].pending) return false;
                    if (pick == 0) {
                        s1 += awards[i].value;
                        f1 += awards[i].approx;
                    } else {
                        s2 += awards[i].value;
                        f2 += awards[i].approx;
                    }
                }
            }
            if (!cmp.ne(s1, s2, f1, f2)) return false;
            return values_match(exact, s1, w.lhs, f1, w.flhs) &&
                   values_match(exact, s2, w.rhs, f2, w.frhs);
        }

        case Axiom::ordinality: {
            if (w.histories.size() != 2 || w.share_indices.size() != 2) return false;
            const History& hs = w.histories[1];
            size_t i = w.share_indices[0], j = w.share_indices[1];
            if (i >= h.size() || j >= h.size() || i == j) return false;
            if (h.size() != hs.size() || !same_reward(h.reward(), hs.reward())) return false;
            for (size_t p = 0; p < h.size(); ++p) {
                const Share& a = h.shares()[p];
                const Share& b = hs.shares()[p];
                if (a.id != b.id || a.full != b.full) return false;
                if (p == i ? a.time == b.time : a.time != b.time) return false;
                if (h.omega(p) != hs.omega(p)) return false;
            }
            auto before = scheme.awards(h);
            auto after = scheme.awards(hs);
            bool status_change = before[j].pending != after[j].pending;
            if (!status_change && !cmp.ne(before[j].value, after[j].value, before[j].approx,
                                          after[j].approx))
                return false;
            return values_match(exact, before[j].value, w.lhs, before[j].approx, w.flhs) &&
                   values_match(exact, after[j].value, w.rhs, after[j].approx, w.frhs);
        }

        case Axiom::budget_limit: {
            if (w.histories.size() != 1 || w.round_indices.size() != 1) return false;
            int r = w.round_indices[0];
            if (r < 1 || r > h.round_count()) return false;
            auto awards = scheme.awards(h);
            auto [begin, end] = h.round_span(r);
            Rat sum;
            double fsum = 0.0;
            for (size_t i = begin; i < end; ++i) {
                if (awards[i].pending) return false;
                sum += awards[i].value;
                fsum += awards[i].approx;
            }
            const Rat& B = h.reward().block_reward;
            if (!cmp.gt(sum, B, fsum, B.to_double())) return false;
            return values_match(exact, sum, w.lhs, fsum, w.flhs) &&
                   values_match(exact, B, w.rhs, B.to_double(), w.frhs);
        }

        case Axiom::absolute_redistribution:
        case Axiom::relative_redistribution: {
            const bool relative = w.axiom == Axiom::relative_redistribution;
            if (w.histories.size() != 2 || w.share_indices.size() != 2 ||
                w.round_indices.size() != 1)
                return false;
            int r = w.round_indices[0];
            if (r < 1 || r > h.round_count() || h.round_length(r) < 2) return false;
            if (!same_history(h.extend_round(r), w.histories[1])) return false;
            size_t a = w.share_indices[0], b = w.share_indices[1];
            auto [begin, end] = h.round_span(r);
            if (a == b || a < begin || a >= end || b < begin || b >= end) return false;
            auto base = scheme.awards(h);
            auto ext = scheme.awards(w.histories[1]);
            if (base[a].pending || base[b].pending || ext[a].pending || ext[b].pending)
                return false;
            if (relative) {
                bool zero = exact ? (base[a].value.is_zero() || base[b].value.is_zero())
                                  : (std::fabs(base[a].approx) <= cmp.tol ||
                                     std::fabs(base[b].approx) <= cmp.tol);
                if (zero) return false;
                Rat ra, rb;
                if (exact) {
                    ra = ext[a].value / base[a].value;
                    rb = ext[b].value / base[b].value;
                    if (ra == rb) return false;
                }
                double fra = ext[a].approx / base[a].approx;
                double frb = ext[b].approx / base[b].approx;
                if (!exact && std::fabs(fra - frb) <= tolerance) return false;
                return values_match(exact, ra, w.lhs, fra, w.flhs) &&
                       values_match(exact, rb, w.rhs, frb, w.frhs);
            }
            Rat da = base[a].value - ext[a].value;
            Rat db = base[b].value - ext[b].value;
            double fda = base[a].approx - ext[a].approx;
            double fdb = base[b].approx - ext[b].approx;
            if (!cmp.ne(da, db, fda, fdb)) return false;
            return values_match(exact, da, w.lhs, fda, w.flhs) &&
                   values_match(exact, db, w.rhs, fdb, w.frhs);
        }

        case Axiom::round_based_rewards: {
            if (w.histories.size() != 2 || w.share_indices.size() != 2 ||
                w.round_indices.size() != 1)
                return false;
            int r = w.round_indices[0];
            if (r < 1 || r > h.round_count()) return false;
            if (!same_history(h.restrict_to(r), w.histories[1])) return false;
            size_t gi = w.share_indices[0], li = w.share_indices[1];
            auto [begin, end] = h.round_span(r);
            if (gi < begin || gi >= end || li != gi - begin) return false;
            auto base = scheme.awards(h);
            auto sub = scheme.awards(w.histories[1]);
            if (!cmp.ne(base[gi].value, sub[li].value, base[gi].approx, sub[li].approx))
                return false;
            return values_match(exact, base[gi].value, w.lhs, base[gi].approx, w.flhs) &&
                   values_match(exact, sub[li].value, w.rhs, sub[li].approx, w.frhs);
        }

        case Axiom::strict_positivity: {
            if (w.histories.size() != 1 || w.share_indices.size() != 1) return false;
            size_t i = w.share_indices[0];
            if (i >= h.size()) return false;
            auto awards = scheme.awards(h);
            if (awards[i].pending) return false;
            if (!cmp.nonpositive(awards[i].value, awards[i].approx)) return false;
            return values_match(exact, awards[i].value, w.lhs, awards[i].approx, w.flhs) &&
                   w.rhs == Rat(0);
        }
    }
    return false;
}

}  // namespace fairpool
