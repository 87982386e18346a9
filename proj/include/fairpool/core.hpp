#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairpool/rational.hpp"

namespace fairpool {

// One submitted share. A share marked `full` is a full solution: it ends the
// round it belongs to.
struct Share {
    std::string id;
    Rat time;
    bool full = false;
};

// Reward terms of the pool: every round pays out against the block reward B,
// of which the operator keeps `fee`; the net reward is R = B - fee.
struct RewardConfig {
    Rat block_reward = Rat(1);
    Rat fee = Rat(0);
    Rat net() const { return block_reward - fee; }
};

enum class ValidationCode {
    empty_history,
    non_monotone_time,
    open_trailing_round,
    bad_reward_config,
    unknown_round,
    unknown_share,
    order_violated,
    round_too_long,
    bad_epsilon,
    bad_scheme_param,
};

const char* validation_code_name(ValidationCode code);

struct ValidationError : std::runtime_error {
    ValidationError(ValidationCode c, const std::string& what)
        : std::runtime_error(what), code(c) {}
    ValidationCode code;
};

// File / JSON syntax problems, kept distinct from domain validation so the
// CLI can report them with a different exit code.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class History;

// A view of one round: the maximal run of shares ending at a full solution.
struct RoundView {
    int index = 0;  // 1-based
    std::span<const Share> shares;
    int length() const { return static_cast<int>(shares.size()); }
};

// A complete share history: strictly increasing times, partitioned into
// rounds by the full solutions, with the last share a full solution (a
// trailing unfinished round has no payout and is rejected up front).
// Instances are immutable after construction; the derived constructions
// below return new histories.
class History {
public:
    History(std::vector<Share> shares, RewardConfig reward);  // throws ValidationError

    const std::vector<Share>& shares() const { return shares_; }
    const RewardConfig& reward() const { return reward_; }
    size_t size() const { return shares_.size(); }
    int round_count() const { return static_cast<int>(round_begin_.size()); }

    // 1-based round index of share i.
    int omega(size_t i) const { return omega_[i]; }
    // 1-based position of share i within its round.
    int rank(size_t i) const;
    RoundView round(int r) const;  // throws ValidationError(unknown_round)
    int round_length(int r) const { return round(r).length(); }
    // Index range [begin, end) of round r's shares.
    std::pair<size_t, size_t> round_span(int r) const;

    // The single-round history made of round r alone (same times, same reward).
    History restrict_to(int r) const;

    // Appends one share at the end of round r: its time is the midpoint
    // between the round's last share and the next round's first share (one
    // past the end for the last round), it becomes the round's full solution,
    // and the displaced share's flag is cleared.
    History extend_round(int r, const std::string& new_id = "s*") const;

    // Moves share i to a new time that must preserve the ordering against its
    // neighbors (throws ValidationError(order_violated) otherwise). The first
    // and last share may move to any time that keeps them first/last.
    History with_share_time(size_t i, const Rat& new_time) const;

private:
    std::vector<Share> shares_;
    RewardConfig reward_;
    std::vector<int> omega_;          // per share
    std::vector<size_t> round_begin_;  // index of each round's first share
};

std::optional<size_t> find_share(const History& h, std::string_view id);

}  // namespace fairpool
