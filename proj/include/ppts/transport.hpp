#ifndef PPTS_TRANSPORT_HPP
#define PPTS_TRANSPORT_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppts/graph.hpp"
#include "ppts/wire.hpp"

namespace ppts {

using json = nlohmann::json;

enum class MsgType { ScalarReq, ScalarResp, CmpShare, CmpResult, SyncInvite, SyncDone, PassToken };

inline const char* msg_type_name(MsgType t) {
    switch (t) {
        case MsgType::ScalarReq: return "SCALAR_REQ";
        case MsgType::ScalarResp: return "SCALAR_RESP";
        case MsgType::CmpShare: return "CMP_SHARE";
        case MsgType::CmpResult: return "CMP_RESULT";
        case MsgType::SyncInvite: return "SYNC_INVITE";
        case MsgType::SyncDone: return "SYNC_DONE";
        case MsgType::PassToken: return "PASS_TOKEN";
    }
    return "?";
}

// Pseudo party-id of the sealed secure-comparison evaluator.
inline constexpr PartyId kEvaluator = -1;

struct Message {
    std::uint64_t seq = 0;
    int round = 0;
    PartyId from = 0;
    PartyId to = 0;
    MsgType type{};
    std::vector<std::uint8_t> payload;
};

// Ordered record of everything each party observes. Events are tagged with
// the observing party; a party's view is the filtered subsequence.
class Transcript {
public:
    void log(PartyId observer, json ev) {
        ev["seq"] = seq_++;
        ev["party"] = observer;
        events_.push_back(std::move(ev));
    }

    const std::vector<json>& events() const { return events_; }

    std::vector<json> view(PartyId p) const {
        std::vector<json> out;
        for (const auto& e : events_)
            if (e.at("party").get<PartyId>() == p) out.push_back(e);
        return out;
    }

    // JSON-lines, one event per line. Key order is alphabetical, so the
    // export is byte-stable for identical event sequences.
    void export_jsonl(std::ostream& out) const {
        for (const auto& e : events_) out << e.dump() << '\n';
    }
    void export_jsonl_file(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ParameterError("cannot open " + path + " for writing");
        export_jsonl(out);
    }

    static Transcript import_jsonl(std::istream& in) {
        Transcript t;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            t.events_.push_back(json::parse(line));
        }
        t.seq_ = t.events_.size();
        return t;
    }
    static Transcript import_jsonl_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParameterError("cannot open " + path);
        return import_jsonl(in);
    }

private:
    std::uint64_t seq_ = 0;
    std::vector<json> events_;
};

// Deterministic in-process message bus. Delivery is immediate and ordered;
// every message is mirrored into the transcript as a send/recv event pair
// and counted for the cost-model checks.
class Bus {
public:
    explicit Bus(Transcript* transcript = nullptr, bool keep_messages = true)
        : transcript_(transcript), keep_messages_(keep_messages) {}

    void set_round(int r) { round_ = r; }
    int round() const { return round_; }

    const Message& send(PartyId from, PartyId to, MsgType type,
                        std::vector<std::uint8_t> payload) {
        Message msg{next_seq_++, round_, from, to, type, std::move(payload)};
        if (type == MsgType::ScalarReq || type == MsgType::ScalarResp) ++scalar_messages_;
        ++total_messages_;
        if (transcript_) {
            json base{{"kind", "send"},
                      {"type", msg_type_name(type)},
                      {"from", from},
                      {"to", to},
                      {"round", round_},
                      {"bytes", msg.payload.size()}};
            transcript_->log(from, base);
            base["kind"] = "recv";
            transcript_->log(to, base);
        }
        if (!keep_messages_ && log_.size() > 0) log_.clear();
        log_.push_back(std::move(msg));
        if (!keep_messages_) {
            last_ = log_.back();
            log_.clear();
            return last_;
        }
        return log_.back();
    }

    const std::vector<Message>& messages() const { return log_; }
    Transcript* transcript() { return transcript_; }

    std::uint64_t scalar_messages() const { return scalar_messages_; }
    std::uint64_t total_messages() const { return total_messages_; }

private:
    Transcript* transcript_;
    bool keep_messages_;
    int round_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t scalar_messages_ = 0;
    std::uint64_t total_messages_ = 0;
    std::vector<Message> log_;
    Message last_;
};

}  // namespace ppts

#endif
