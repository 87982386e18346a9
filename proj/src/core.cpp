#include "fairpool/core.hpp"

#include <algorithm>

namespace fairpool {

const char* validation_code_name(ValidationCode code) {
    switch (code) {
        case ValidationCode::empty_history: return "empty_history";
        case ValidationCode::non_monotone_time: return "non_monotone_time";
        case ValidationCode::open_trailing_round: return "open_trailing_round";
        case ValidationCode::bad_reward_config: return "bad_reward_config";
        case ValidationCode::unknown_round: return "unknown_round";
        case ValidationCode::unknown_share: return "unknown_share";
        case ValidationCode::order_violated: return "order_violated";
        case ValidationCode::round_too_long: return "round_too_long";
        case ValidationCode::bad_epsilon: return "bad_epsilon";
        case ValidationCode::bad_scheme_param: return "bad_scheme_param";
    }
    return "unknown";
}

History::History(std::vector<Share> shares, RewardConfig reward)
    : shares_(std::move(shares)), reward_(std::move(reward)) {
    if (shares_.empty())
        throw ValidationError(ValidationCode::empty_history, "history has no shares");
    if (!reward_.block_reward.is_positive())
        throw ValidationError(ValidationCode::bad_reward_config, "block reward must be positive");
    if (reward_.fee.is_negative() || reward_.fee > reward_.block_reward)
        throw ValidationError(ValidationCode::bad_reward_config, "fee must lie in [0, block reward]");
    for (size_t i = 1; i < shares_.size(); ++i)
        if (!(shares_[i - 1].time < shares_[i].time))
            throw ValidationError(ValidationCode::non_monotone_time,
                                  "share times must strictly increase (shares " +
                                      shares_[i - 1].id + ", " + shares_[i].id + ")");
    if (!shares_.back().full)
        throw ValidationError(ValidationCode::open_trailing_round,
                              "last share must be a full solution");

    omega_.resize(shares_.size());
    int round = 1;
    round_begin_.push_back(0);
    for (size_t i = 0; i < shares_.size(); ++i) {
        omega_[i] = round;
        if (shares_[i].full && i + 1 < shares_.size()) {
            ++round;
            round_begin_.push_back(i + 1);
        }
    }
}

int History::rank(size_t i) const {
    return static_cast<int>(i - round_begin_[omega_[i] - 1]) + 1;
}

std::pair<size_t, size_t> History::round_span(int r) const {
    if (r < 1 || r > round_count())
        throw ValidationError(ValidationCode::unknown_round,
                              "round " + std::to_string(r) + " out of range");
    size_t begin = round_begin_[r - 1];
    size_t end = (r == round_count()) ? shares_.size() : round_begin_[r];
    return {begin, end};
}

RoundView History::round(int r) const {
    auto [begin, end] = round_span(r);
    return RoundView{r, std::span<const Share>(shares_.data() + begin, end - begin)};
}

History History::restrict_to(int r) const {
    auto [begin, end] = round_span(r);
    std::vector<Share> sub(shares_.begin() + begin, shares_.begin() + end);
    return History(std::move(sub), reward_);
}

History History::extend_round(int r, const std::string& new_id) const {
    auto [begin, end] = round_span(r);
    Rat new_time = (r == round_count())
                       ? shares_.back().time + Rat(1)
                       : (shares_[end - 1].time + shares_[end].time) / Rat(2);
    std::string id = new_id;
    auto taken = [&](const std::string& candidate) {
        return std::any_of(shares_.begin(), shares_.end(),
                           [&](const Share& s) { return s.id == candidate; });
    };
    while (taken(id)) id += "*";

    std::vector<Share> out;
    out.reserve(shares_.size() + 1);
    out.insert(out.end(), shares_.begin(), shares_.begin() + end);
    out.back().full = false;  // the appended share takes over as the round's full solution
    out.push_back(Share{id, new_time, true});
    out.insert(out.end(), shares_.begin() + end, shares_.end());
    return History(std::move(out), reward_);
}

History History::with_share_time(size_t i, const Rat& new_time) const {
    if (i >= shares_.size())
        throw ValidationError(ValidationCode::unknown_share,
                              "share index " + std::to_string(i) + " out of range");
    if (i > 0 && !(shares_[i - 1].time < new_time))
        throw ValidationError(ValidationCode::order_violated,
                              "new time does not stay after the previous share");
    if (i + 1 < shares_.size() && !(new_time < shares_[i + 1].time))
        throw ValidationError(ValidationCode::order_violated,
                              "new time does not stay before the next share");
    std::vector<Share> out = shares_;
    out[i].time = new_time;
    return History(std::move(out), reward_);
}

std::optional<size_t> find_share(const History& h, std::string_view id) {
    const auto& shares = h.shares();
    for (size_t i = 0; i < shares.size(); ++i)
        if (shares[i].id == id) return i;
    return std::nullopt;
}

}  // namespace fairpool
