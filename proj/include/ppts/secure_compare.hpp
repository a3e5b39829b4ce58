#ifndef PPTS_SECURE_COMPARE_HPP
#define PPTS_SECURE_COMPARE_HPP

#include <cstdint>
#include <map>
#include <set>

#include "ppts/transport.hpp"

namespace ppts {

struct ComparisonRequest {
    std::uint64_t round_id = 0;
    std::map<PartyId, std::int64_t> left_shares;   // shares of mu(x')
    std::map<PartyId, std::int64_t> right_shares;  // shares of mu(x), or a constant
    std::set<PartyId> recipients;
};

struct ComparisonBit {
    bool value = false;  // true iff sum(left) < sum(right)
    std::set<PartyId> visible_to;
};

// Ideal-functionality comparison oracle. Parties submit signed shares of both
// sides; only the designated recipients observe the output bit. Sums are
// never materialized in any party's view. Stands in for a circuit-based
// comparison backend with the same input/output/leakage contract.
class SecureCompareOracle {
public:
    explicit SecureCompareOracle(Bus& bus) : bus_(&bus) {}

    ComparisonBit compare(const ComparisonRequest& req) {
        if (req.left_shares.empty()) throw ParameterError("no shares submitted");
        if (req.left_shares.size() != req.right_shares.size())
            throw ParameterError("mismatched party sets");
        __int128 left = 0, right = 0;
        for (const auto& [p, v] : req.left_shares) {
            if (!req.right_shares.contains(p)) throw ParameterError("mismatched party sets");
            submit(p, req.round_id, 0, v);
            left += v;
        }
        for (const auto& [p, v] : req.right_shares) {
            submit(p, req.round_id, 1, v);
            right += v;
        }
        constexpr __int128 guard = static_cast<__int128>(1) << 62;
        if (left >= guard || left <= -guard || right >= guard || right <= -guard)
            throw ParameterError("share sum exceeds comparison range");
        ComparisonBit bit{left < right, req.recipients};
        ++invocations_;
        for (PartyId p : req.recipients) {
            ByteWriter w;
            w.u64(req.round_id);
            w.u8(bit.value ? 1 : 0);
            bus_->send(kEvaluator, p, MsgType::CmpResult, w.take());
            if (bus_->transcript())
                bus_->transcript()->log(
                    p, json{{"kind", "cmp_bit"}, {"round_id", req.round_id}, {"bit", bit.value}});
        }
        return bit;
    }

    std::uint64_t invocations() const { return invocations_; }

private:
    void submit(PartyId p, std::uint64_t round_id, int side, std::int64_t value) {
        ByteWriter w;
        w.u64(round_id);
        w.u8(static_cast<std::uint8_t>(side));
        w.i64(value);
        bus_->send(p, kEvaluator, MsgType::CmpShare, w.take());
    }

    Bus* bus_;
    std::uint64_t invocations_ = 0;
};

inline ComparisonBit sec_compare(SecureCompareOracle& oracle, std::uint64_t round_id,
                                 const std::map<PartyId, std::int64_t>& left,
                                 const std::map<PartyId, std::int64_t>& right,
                                 const std::set<PartyId>& recipients) {
    return oracle.compare({round_id, left, right, recipients});
}

// Right side fixed to a constant, contributed as the lowest party's share
// with zeros elsewhere. Used for the mu(x) < 1 termination check.
inline ComparisonBit sec_compare_with_constant(SecureCompareOracle& oracle,
                                               std::uint64_t round_id,
                                               const std::map<PartyId, std::int64_t>& shares,
                                               std::int64_t constant,
                                               const std::set<PartyId>& recipients) {
    std::map<PartyId, std::int64_t> right;
    bool first = true;
    for (const auto& [p, _] : shares) {
        right[p] = first ? constant : 0;
        first = false;
    }
    return oracle.compare({round_id, shares, right, recipients});
}

}  // namespace ppts

#endif
