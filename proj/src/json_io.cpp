#include "fairpool/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fairpool {

namespace {

Rat rat_from_json(const ordered_json& v, const char* what) {
    std::string text;
    if (v.is_string())
        text = v.get<std::string>();
    else if (v.is_number_integer())
        text = std::to_string(v.get<long long>());
    else
        throw IoError(std::string(what) + " must be a rational string or an integer");
    auto r = Rat::parse(text);
    if (!r)
        throw ValidationError(ValidationCode::bad_reward_config,
                              std::string(what) + " is not a rational: " + text);
    return *r;
}

}  // namespace

ordered_json history_to_json(const History& h) {
    ordered_json doc;
    doc["block_reward"] = h.reward().block_reward.str();
    doc["fee"] = h.reward().fee.str();
    ordered_json shares = ordered_json::array();
    for (const Share& s : h.shares()) {
        ordered_json e;
        e["id"] = s.id;
        e["time"] = s.time.str();
        e["full"] = s.full;
        shares.push_back(std::move(e));
    }
    doc["shares"] = std::move(shares);
    return doc;
}

History history_from_json(const ordered_json& doc) {
    if (!doc.is_object()) throw IoError("history JSON must be an object");
    if (!doc.contains("shares") || !doc["shares"].is_array())
        throw IoError("history JSON needs a 'shares' array");

    RewardConfig reward;
    if (doc.contains("block_reward")) reward.block_reward = rat_from_json(doc["block_reward"], "block_reward");
    if (doc.contains("fee")) reward.fee = rat_from_json(doc["fee"], "fee");

    std::vector<Share> shares;
    for (const auto& e : doc["shares"]) {
        if (!e.is_object()) throw IoError("each share must be an object");
        Share s;
        if (!e.contains("id") || !e["id"].is_string())
            throw IoError("each share needs a string 'id'");
        s.id = e["id"].get<std::string>();
        if (!e.contains("time")) throw IoError("share " + s.id + " has no 'time'");
        s.time = rat_from_json(e["time"], "time");
        if (e.contains("full")) {
            if (!e["full"].is_boolean()) throw IoError("share " + s.id + ": 'full' must be a bool");
            s.full = e["full"].get<bool>();
        }
        shares.push_back(std::move(s));
    }
    return History(std::move(shares), std::move(reward));
}

History load_history_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open history file: " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("malformed JSON in " + path + ": " + e.what());
    }
    return history_from_json(doc);
}

std::string format_double(double x, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, x);
    return buf;
}

std::string award_value_str(const Scheme& scheme, const Award& a, bool decimal) {
    if (scheme.floating()) return format_double(a.approx);
    return decimal ? a.value.decimal_str() : a.value.str();
}

namespace {

std::string history_oneline(const History& h) {
    std::ostringstream out;
    for (size_t i = 0; i < h.size(); ++i) {
        if (i) out << ' ';
        const Share& s = h.shares()[i];
        out << s.id << (s.full ? "*" : "") << '@' << s.time;
    }
    out << "  (block_reward=" << h.reward().block_reward << ", fee=" << h.reward().fee << ')';
    return out.str();
}

}  // namespace

ordered_json payout_to_json(const Scheme& scheme, const History& h, const PayoutReport& report,
                            bool decimal) {
    ordered_json doc;
    doc["scheme"] = scheme.spec_string();
    ordered_json rows = ordered_json::array();
    for (const PayoutRow& row : report.rows) {
        ordered_json e;
        e["id"] = row.id;
        e["round"] = row.round;
        e["rank"] = row.rank;
        e["status"] = row.award.pending ? "pending" : "final";
        e["award"] = award_value_str(scheme, row.award, decimal);
        rows.push_back(std::move(e));
    }
    doc["rows"] = std::move(rows);
    ordered_json totals = ordered_json::array();
    for (int r = 0; r < h.round_count(); ++r) {
        ordered_json e;
        e["round"] = r + 1;
        e["total"] = award_value_str(scheme, report.round_sums[r], decimal);
        e["has_pending"] = static_cast<bool>(report.round_has_pending[r]);
        totals.push_back(std::move(e));
    }
    doc["round_totals"] = std::move(totals);
    doc["total"] = award_value_str(scheme, report.total, decimal);
    doc["pending_shares"] = report.pending_shares;
    return doc;
}

std::string render_payout_text(const Scheme& scheme, const History& h, const PayoutReport& report,
                               bool decimal) {
    std::ostringstream out;
    out << "scheme: " << scheme.spec_string() << "\n";
    out << "history: " << history_oneline(h) << "\n\n";
    size_t id_width = 5;
    for (const PayoutRow& row : report.rows) id_width = std::max(id_width, row.id.size());
    out << "share";
    for (size_t p = 5; p < id_width; ++p) out << ' ';
    out << "  round  rank  status   award\n";
    for (const PayoutRow& row : report.rows) {
        out << row.id;
        for (size_t p = row.id.size(); p < id_width; ++p) out << ' ';
        char line[32];
        std::snprintf(line, sizeof line, "  %-5d  %-4d  %-7s  ", row.round, row.rank,
                      row.award.pending ? "pending" : "final");
        out << line << award_value_str(scheme, row.award, decimal) << "\n";
    }
    out << "\nround totals:";
    for (int r = 0; r < h.round_count(); ++r) {
        out << "  " << (r + 1) << ": " << award_value_str(scheme, report.round_sums[r], decimal);
        if (report.round_has_pending[r]) out << " (+pending)";
    }
    out << "\ntotal paid: " << award_value_str(scheme, report.total, decimal);
    if (report.pending_shares)
        out << "   pending shares: " << report.pending_shares;
    out << "\n";
    return out.str();
}

ordered_json witness_to_json(const Witness& w) {
    ordered_json doc;
    doc["axiom"] = axiom_name(w.axiom);
    doc["relation"] = w.relation;
    doc["note"] = w.note;
    doc["exact"] = w.exact;
    if (w.exact) {
        doc["lhs"] = w.lhs.str();
        doc["rhs"] = w.rhs.str();
    } else {
        doc["lhs"] = w.flhs;
        doc["rhs"] = w.frhs;
    }
    doc["shares"] = w.share_indices;
    doc["rounds"] = w.round_indices;
    ordered_json histories = ordered_json::array();
    for (const History& h : w.histories) histories.push_back(history_to_json(h));
    doc["histories"] = std::move(histories);
    return doc;
}

ordered_json verdict_to_json(const Scheme& scheme, const Verdict& v) {
    ordered_json doc;
    doc["scheme"] = scheme.spec_string();
    doc["axiom"] = axiom_name(v.axiom);
    doc["result"] = v.failed ? "fail" : "no_counterexample";
    doc["instances"] = v.instances_checked;
    if (v.witness) doc["witness"] = witness_to_json(*v.witness);
    if (!v.notes.empty()) doc["notes"] = v.notes;
    return doc;
}

std::string render_verdict_text(const Scheme& scheme, const Verdict& v) {
    std::ostringstream out;
    out << axiom_name(v.axiom) << ": "
        << (v.failed ? "FAIL" : "no counterexample") << " (" << v.instances_checked
        << " instances)";
    if (v.witness) {
        const Witness& w = *v.witness;
        out << "\n  " << w.note;
        out << "\n  lhs = " << (w.exact ? w.lhs.str() : format_double(w.flhs))
            << ", rhs = " << (w.exact ? w.rhs.str() : format_double(w.frhs))
            << "  [" << w.relation << "]";
        if (!w.share_indices.empty()) {
            out << "\n  share indices:";
            for (size_t i : w.share_indices) out << ' ' << i;
        }
        if (!w.round_indices.empty()) {
            out << "\n  rounds:";
            for (int r : w.round_indices) out << ' ' << r;
        }
        for (size_t k = 0; k < w.histories.size(); ++k)
            out << "\n  history " << (k + 1) << ": " << history_oneline(w.histories[k]);
    }
    for (const std::string& note : v.notes) out << "\n  note: " << note;
    out << "\n";
    return out.str();
}

}  // namespace fairpool
