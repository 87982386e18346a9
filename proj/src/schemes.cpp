#include "fairpool/schemes.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fairpool {

namespace {

[[noreturn]] void bad_param(const std::string& what) {
    throw ValidationError(ValidationCode::bad_scheme_param, what);
}

std::string double_str(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    if (std::strtod(buf, nullptr) == x) return buf;
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

EpsilonTable EpsilonTable::from_values(std::vector<Rat> v) {
    EpsilonTable t;
    t.values = std::move(v);
    return t;
}

EpsilonTable EpsilonTable::proportional(int n) {
    EpsilonTable t;
    t.values.reserve(n);
    for (int j = 1; j <= n; ++j) t.values.emplace_back(1, j);
    return t;
}

EpsilonTable EpsilonTable::constrained_geometric_member(const Rat& r, int n) {
    EpsilonTable t;
    t.values.reserve(n);
    for (int j = 1; j <= n; ++j)
        t.values.push_back(r.pow(j - 1) * (r - Rat(1)) / (r.pow(j) - Rat(1)));
    return t;
}

Rat EpsilonTable::tail_weight(int j) const {
    Rat sum;
    for (int i = j + 1; i <= size(); ++i) sum += at(i) / Rat(i - 1);
    return sum;
}

void EpsilonTable::require_relative() const {
    if (values.empty())
        throw ValidationError(ValidationCode::bad_epsilon, "epsilon table is empty");
    if (at(1) != Rat(1))
        throw ValidationError(ValidationCode::bad_epsilon,
                              "epsilon(1) must be 1, got " + at(1).str());
    for (int j = 1; j <= size(); ++j) {
        if (at(j).is_negative() || at(j) > Rat(1))
            throw ValidationError(ValidationCode::bad_epsilon,
                                  "epsilon(" + std::to_string(j) + ") = " + at(j).str() +
                                      " is outside [0, 1]");
    }
}

void EpsilonTable::require_absolute() const {
    require_relative();
    for (int j = 1; j <= size(); ++j) {
        Rat tail = tail_weight(j);
        if (at(j) < tail)
            throw ValidationError(ValidationCode::bad_epsilon,
                                  "epsilon(" + std::to_string(j) + ") = " + at(j).str() +
                                      " is below its tail weight " + tail.str() +
                                      ", so some award would be negative");
    }
}

const char* scheme_kind_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::proportional: return "proportional";
        case SchemeKind::absolute_fair: return "absfair";
        case SchemeKind::relative_fair: return "relfair";
        case SchemeKind::k_pseudo: return "kpseudo";
        case SchemeKind::pps: return "pps";
        case SchemeKind::pplns: return "pplns";
        case SchemeKind::geometric: return "geometric";
        case SchemeKind::constrained_geometric: return "cgeometric";
        case SchemeKind::ic: return "ic";
        case SchemeKind::slush: return "slush";
        case SchemeKind::indep1: return "indep1";
        case SchemeKind::indep2: return "indep2";
        case SchemeKind::indep3: return "indep3";
        case SchemeKind::indep4: return "indep4";
        case SchemeKind::indep5: return "indep5";
        case SchemeKind::indep6: return "indep6";
    }
    return "?";
}

Scheme Scheme::proportional() {
    Scheme s;
    s.kind_ = SchemeKind::proportional;
    return s;
}

Scheme Scheme::absolute_fair(EpsilonTable eps) {
    eps.require_absolute();
    Scheme s;
    s.kind_ = SchemeKind::absolute_fair;
    s.eps_ = std::move(eps);
    return s;
}

Scheme Scheme::relative_fair(EpsilonTable eps) {
    eps.require_relative();
    Scheme s;
    s.kind_ = SchemeKind::relative_fair;
    s.eps_ = std::move(eps);
    return s;
}

Scheme Scheme::k_pseudo(std::optional<long> k, Rat delta) {
    if (k && *k < 2) bad_param("kpseudo needs k >= 2 (or k=inf)");
    if (delta.is_negative()) bad_param("kpseudo needs delta >= 0");
    Scheme s;
    s.kind_ = SchemeKind::k_pseudo;
    s.k_ = k;
    s.delta_ = std::move(delta);
    return s;
}

Scheme Scheme::pps(std::optional<Rat> c) {
    if (c && !c->is_positive()) bad_param("pps needs c > 0");
    Scheme s;
    s.kind_ = SchemeKind::pps;
    s.c_ = std::move(c);
    return s;
}

Scheme Scheme::pplns(long n) {
    if (n < 1) bad_param("pplns needs n >= 1");
    Scheme s;
    s.kind_ = SchemeKind::pplns;
    s.window_ = n;
    return s;
}

Scheme Scheme::geometric(Rat r) {
    if (r <= Rat(1)) bad_param("geometric needs r > 1");
    Scheme s;
    s.kind_ = SchemeKind::geometric;
    s.rate_ = std::move(r);
    return s;
}

Scheme Scheme::constrained_geometric(Rat r) {
    if (r <= Rat(1)) bad_param("cgeometric needs r > 1");
    Scheme s;
    s.kind_ = SchemeKind::constrained_geometric;
    s.rate_ = std::move(r);
    return s;
}

Scheme Scheme::ic(long d) {
    if (d < 1) bad_param("ic needs d >= 1");
    Scheme s;
    s.kind_ = SchemeKind::ic;
    s.capacity_ = d;
    return s;
}

Scheme Scheme::slush(double lambda) {
    if (!(lambda > 0.0)) bad_param("slush needs lambda > 0");
    Scheme s;
    s.kind_ = SchemeKind::slush;
    s.lambda_ = lambda;
    return s;
}

Scheme Scheme::independence(int id) {
    if (id < 1 || id > 6) bad_param("independence scheme id must be in 1..6");
    Scheme s;
    switch (id) {
        case 1: s.kind_ = SchemeKind::indep1; break;
        case 2: s.kind_ = SchemeKind::indep2; break;
        case 3: s.kind_ = SchemeKind::indep3; break;
        case 4: s.kind_ = SchemeKind::indep4; break;
        case 5: s.kind_ = SchemeKind::indep5; break;
        case 6:
            s.kind_ = SchemeKind::indep6;
            s.gap_threshold_ = Rat(1, 2);
            break;
    }
    return s;
}

Scheme Scheme::independence2(Rat lambda) {
    Scheme s = independence(2);
    s.share_cut_ = std::move(lambda);
    return s;
}

Scheme Scheme::independence6(Rat threshold) {
    if (!threshold.is_positive()) bad_param("indep6 needs a positive time threshold");
    Scheme s = independence(6);
    s.gap_threshold_ = std::move(threshold);
    return s;
}

namespace {

Award exact(Rat v) {
    Award a;
    a.approx = v.to_double();
    a.value = std::move(v);
    return a;
}

// Awards for the k-limited split: the first k-1 members share R - delta
// equally, the k-th gets delta, later members get nothing. Rounds shorter
// than k fall back to an even split.
Rat k_pseudo_value(const std::optional<long>& k, const Rat& delta, const Rat& reward,
                   int rank, int n) {
    if (!k || n < *k) return reward / Rat(n);
    if (rank < *k) return (reward - delta) / Rat(*k - 1);
    if (rank == *k) return delta;
    return Rat(0);
}

}  // namespace

Award Scheme::award(const History& h, size_t i) const {
    const Rat reward = h.reward().net();
    const int rank = h.rank(i);
    const int round = h.omega(i);
    const int n = h.round_length(round);

    switch (kind_) {
        case SchemeKind::proportional:
            return exact(reward / Rat(n));

        case SchemeKind::absolute_fair: {
            if (n > eps_.size())
                throw ValidationError(ValidationCode::round_too_long,
                                      "round " + std::to_string(round) + " has " +
                                          std::to_string(n) + " shares but the epsilon table covers " +
                                          std::to_string(eps_.size()));
            Rat v = eps_.at(rank);
            for (int j = rank + 1; j <= n; ++j) v -= eps_.at(j) / Rat(j - 1);
            return exact(reward * v);
        }

        case SchemeKind::relative_fair: {
            if (n > eps_.size())
                throw ValidationError(ValidationCode::round_too_long,
                                      "round " + std::to_string(round) + " has " +
                                          std::to_string(n) + " shares but the epsilon table covers " +
                                          std::to_string(eps_.size()));
            Rat v = eps_.at(rank);
            for (int j = rank + 1; j <= n; ++j) v *= Rat(1) - eps_.at(j);
            return exact(reward * v);
        }

        case SchemeKind::k_pseudo:
            if (delta_ > reward)
                bad_param("kpseudo delta " + delta_.str() + " exceeds the net reward " +
                          reward.str());
            return exact(k_pseudo_value(k_, delta_, reward, rank, n));

        case SchemeKind::pps: {
            Rat c = c_ ? *c_ : reward / Rat(3);
            if (!c.is_positive()) bad_param("pps rate c resolves to " + c.str() + ", needs c > 0");
            return exact(c);
        }

        case SchemeKind::pplns: {
            const long N = window_;
            const Rat per_solution = reward / Rat(N);
            if (i + static_cast<size_t>(N) < h.size()) {
                long solutions = h.omega(i + static_cast<size_t>(N)) - round;
                return exact(Rat(solutions) * per_solution);
            }
            Award a = exact(Rat(h.round_count() - round + 1) * per_solution);
            a.pending = true;
            return a;
        }

        case SchemeKind::geometric:
            return exact((rate_ - Rat(1)) / rate_.pow(n - rank + 1) * h.reward().block_reward);

        case SchemeKind::constrained_geometric: {
            Rat rn = rate_.pow(n);
            return exact((rate_ - Rat(1)) / rate_.pow(n - rank + 1) * rn / (rn - Rat(1)) *
                         h.reward().block_reward);
        }

        case SchemeKind::ic: {
            const long D = capacity_;
            if (n <= D) {
                Rat base = reward / Rat(D);
                if (rank < n) return exact(base);
                return exact(base + (Rat(1) - Rat(n) / Rat(D)) * reward);
            }
            return exact(reward / Rat(n));
        }

        case SchemeKind::slush:
            return awards(h)[i];

        case SchemeKind::indep1:
            return exact(n % 2 == 1 ? reward / Rat(n) : reward / Rat(2 * n));

        case SchemeKind::indep2: {
            Rat lam = share_cut_ ? *share_cut_ : reward / Rat(2);
            if (!lam.is_positive() || lam >= reward)
                bad_param("indep2 lambda " + lam.str() + " must lie strictly between 0 and " +
                          reward.str());
            if (n == 1) return exact(reward);
            if (rank == 1) return exact(reward - lam + lam / Rat(n));
            return exact(lam / Rat(n));
        }

        case SchemeKind::indep3: {
            Rat denom = Rat(2).pow(n - 1);
            if (rank == 1) return exact(reward / denom);
            return exact(Rat(2).pow(rank - 2) * reward / denom);
        }

        case SchemeKind::indep4: {
            int first = h.round_length(1);
            return exact(first % 2 == 1 ? reward / Rat(n) : reward / Rat(2 * n));
        }

        case SchemeKind::indep5:
            return exact(Rat(2) * reward / Rat(n));

        case SchemeKind::indep6: {
            if (n == 1) return exact(reward);
            auto [begin, end] = h.round_span(round);
            (void)end;
            Rat gap = h.shares()[begin + 1].time - h.shares()[begin].time;
            Rat delta = gap < gap_threshold_ ? reward / Rat(2) : reward / Rat(3);
            return exact(k_pseudo_value(2, delta, reward, rank, n));
        }
    }
    bad_param("unhandled scheme kind");
}

std::vector<Award> Scheme::awards(const History& h) const {
    std::vector<Award> out;
    out.reserve(h.size());

    if (kind_ != SchemeKind::slush) {
        for (size_t i = 0; i < h.size(); ++i) out.push_back(award(h, i));
        return out;
    }

    // Score round by round: when round j closes, every share in the history
    // so far earns exp((t - t_last)/lambda) normalized over all those shares,
    // and a share's award is R times the sum of its scores from its own round
    // onward. Everything here is floating point by design.
    const double R = h.reward().net().to_double();
    const int rounds = h.round_count();
    std::vector<double> t(h.size());
    for (size_t i = 0; i < h.size(); ++i) t[i] = h.shares()[i].time.to_double();

    std::vector<size_t> close(rounds);  // index one past each round's last share
    std::vector<double> denom(rounds, 0.0);
    for (int r = 1; r <= rounds; ++r) {
        auto [begin, end] = h.round_span(r);
        (void)begin;
        close[r - 1] = end;
        double t_last = t[end - 1];
        for (size_t p = 0; p < end; ++p) denom[r - 1] += std::exp((t[p] - t_last) / lambda_);
    }

    for (size_t i = 0; i < h.size(); ++i) {
        double sum = 0.0;
        for (int r = h.omega(i); r <= rounds; ++r) {
            double t_last = t[close[r - 1] - 1];
            sum += std::exp((t[i] - t_last) / lambda_) / denom[r - 1];
        }
        Award a;
        a.approx = R * sum;
        out.push_back(a);
    }
    return out;
}

std::string Scheme::spec_string() const {
    std::string name = scheme_kind_name(kind_);
    auto join_eps = [this]() {
        std::string s = "[";
        for (int j = 1; j <= eps_.size(); ++j) {
            if (j > 1) s += ';';
            s += eps_.at(j).str();
        }
        return s + "]";
    };
    switch (kind_) {
        case SchemeKind::absolute_fair:
        case SchemeKind::relative_fair:
            return name + ":eps=" + join_eps();
        case SchemeKind::k_pseudo:
            return name + ":k=" + (k_ ? std::to_string(*k_) : std::string("inf")) +
                   ",delta=" + delta_.str();
        case SchemeKind::pps:
            return c_ ? name + ":c=" + c_->str() : name;
        case SchemeKind::pplns:
            return name + ":n=" + std::to_string(window_);
        case SchemeKind::geometric:
        case SchemeKind::constrained_geometric:
            return name + ":r=" + rate_.str();
        case SchemeKind::ic:
            return name + ":d=" + std::to_string(capacity_);
        case SchemeKind::slush:
            return name + ":lambda=" + double_str(lambda_);
        case SchemeKind::indep2:
            return share_cut_ ? name + ":lambda=" + share_cut_->str() : name;
        case SchemeKind::indep6:
            return gap_threshold_ == Rat(1, 2) ? name : name + ":t=" + gap_threshold_.str();
        default:
            return name;
    }
}

namespace {

Rat parse_rat_param(const std::string& key, const std::string& value) {
    auto r = Rat::parse(value);
    if (!r) bad_param("parameter " + key + "=" + value + " is not a rational");
    return *r;
}

long parse_long_param(const std::string& key, const std::string& value) {
    char* end = nullptr;
    long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        bad_param("parameter " + key + "=" + value + " is not an integer");
    return v;
}

EpsilonTable parse_eps_param(const std::string& value) {
    std::vector<Rat> vals;
    if (!value.empty() && value.front() == '@') {
        std::string path = value.substr(1);
        std::ifstream in(path);
        if (!in) throw IoError("cannot open epsilon table file: " + path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw IoError("malformed JSON in " + path + ": " + e.what());
        }
        if (!doc.is_array()) throw IoError("epsilon table file must hold a JSON array: " + path);
        for (const auto& item : doc) {
            std::string text;
            if (item.is_string())
                text = item.get<std::string>();
            else if (item.is_number_integer())
                text = std::to_string(item.get<long long>());
            else
                throw ValidationError(ValidationCode::bad_epsilon,
                                      "epsilon entries must be rational strings or integers");
            auto r = Rat::parse(text);
            if (!r)
                throw ValidationError(ValidationCode::bad_epsilon,
                                      "bad rational in epsilon table: " + text);
            vals.push_back(*r);
        }
    } else if (!value.empty() && value.front() == '[' && value.back() == ']') {
        std::string body = value.substr(1, value.size() - 2);
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            auto r = Rat::parse(tok);
            if (!r) bad_param("bad rational in epsilon list: " + tok);
            vals.push_back(*r);
        }
    } else {
        bad_param("eps expects @file.json or [a;b;c], got: " + value);
    }
    return EpsilonTable::from_values(std::move(vals));
}

}  // namespace

Scheme Scheme::parse(const std::string& text) {
    std::string name = text;
    std::string params;
    if (auto colon = text.find(':'); colon != std::string::npos) {
        name = text.substr(0, colon);
        params = text.substr(colon + 1);
    }

    std::vector<std::pair<std::string, std::string>> kv;
    {
        std::stringstream ss(params);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) bad_param("expected key=value, got: " + tok);
            kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
    }
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        for (auto it = kv.begin(); it != kv.end(); ++it) {
            if (it->first == key) {
                std::string v = it->second;
                kv.erase(it);
                return v;
            }
        }
        return std::nullopt;
    };
    auto require = [&](const std::string& key) {
        auto v = take(key);
        if (!v) bad_param(name + " requires parameter " + key);
        return *v;
    };
    auto finish = [&](Scheme s) {
        if (!kv.empty()) bad_param("unknown parameter '" + kv.front().first + "' for " + name);
        return s;
    };

    if (name == "proportional") return finish(proportional());
    if (name == "absfair") return finish(absolute_fair(parse_eps_param(require("eps"))));
    if (name == "relfair") return finish(relative_fair(parse_eps_param(require("eps"))));
    if (name == "kpseudo") {
        std::string ks = require("k");
        std::optional<long> k;
        if (ks != "inf") k = parse_long_param("k", ks);
        return finish(k_pseudo(k, parse_rat_param("delta", require("delta"))));
    }
    if (name == "pps") {
        if (auto c = take("c")) return finish(pps(parse_rat_param("c", *c)));
        return finish(pps());
    }
    if (name == "pplns") return finish(pplns(parse_long_param("n", require("n"))));
    if (name == "geometric") return finish(geometric(parse_rat_param("r", require("r"))));
    if (name == "cgeometric")
        return finish(constrained_geometric(parse_rat_param("r", require("r"))));
    if (name == "ic") return finish(ic(parse_long_param("d", require("d"))));
    if (name == "slush") {
        double lambda = 1200.0;
        if (auto ls = take("lambda")) {
            char* end = nullptr;
            lambda = std::strtod(ls->c_str(), &end);
            if (end == ls->c_str() || *end != '\0')
                bad_param("parameter lambda=" + *ls + " is not a number");
        }
        return finish(slush(lambda));
    }
    if (name.size() == 6 && name.compare(0, 5, "indep") == 0 && name[5] >= '1' && name[5] <= '6') {
        int id = name[5] - '0';
        if (id == 2) {
            if (auto ls = take("lambda")) return finish(independence2(parse_rat_param("lambda", *ls)));
        }
        if (id == 6) {
            if (auto ts = take("t")) return finish(independence6(parse_rat_param("t", *ts)));
        }
        return finish(independence(id));
    }
    bad_param("unknown scheme: " + name);
}

PayoutReport compute_payout_report(const Scheme& scheme, const History& h) {
    PayoutReport report;
    auto all = scheme.awards(h);

    report.round_sums.resize(h.round_count());
    report.round_has_pending.assign(h.round_count(), false);

    for (size_t i = 0; i < h.size(); ++i) {
        PayoutRow row;
        row.id = h.shares()[i].id;
        row.round = h.omega(i);
        row.rank = h.rank(i);
        row.award = all[i];
        report.rows.push_back(std::move(row));

        Award& sum = report.round_sums[h.omega(i) - 1];
        if (all[i].pending) {
            report.round_has_pending[h.omega(i) - 1] = true;
            ++report.pending_shares;
        } else {
            sum.value += all[i].value;
            sum.approx += all[i].approx;
            report.total.value += all[i].value;
            report.total.approx += all[i].approx;
        }
    }
    return report;
}

}  // namespace fairpool
