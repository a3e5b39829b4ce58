#ifndef PPTS_SECURE_CONFLICT_HPP
#define PPTS_SECURE_CONFLICT_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "ppts/paillier.hpp"
#include "ppts/secure_compare.hpp"
#include "ppts/transport.hpp"

namespace ppts {

inline constexpr std::int64_t kDefaultMaskRange = std::int64_t{1} << 40;

struct ScalarOutcome {
    std::int64_t s = 0;  // x_i . x_j + r, learnt by the initiator only
    std::int64_t r = 0;  // mask, retained by the responder only
};

// Two-party secure scalar product over an external edge. Exactly two
// messages: the initiator's encrypted one-hot vector with its public key,
// and the responder's single masked ciphertext.
inline ScalarOutcome secure_scalar_product(Bus& bus, const Edge& edge, PartyId initiator,
                                           PartyId responder, const ColorVector& xi,
                                           const ColorVector& xj,
                                           const PaillierKeypair& initiator_keys,
                                           Entropy& initiator_rng, Entropy& responder_rng,
                                           std::int64_t mask_range,
                                           std::optional<std::int64_t> fixed_mask = {}) {
    if (xi.k != xj.k) throw ParameterError("color vectors with mismatched k");
    const PaillierPublicKey& pk = initiator_keys.pk;

    ByteWriter req;
    req.u32(static_cast<std::uint32_t>(edge.first));
    req.u32(static_cast<std::uint32_t>(edge.second));
    req.u32(static_cast<std::uint32_t>(xi.k));
    req.bigint(pk.n);
    for (int c = 0; c < xi.k; ++c)
        req.bigint(paillier_encrypt(pk, c == xi.hot ? 1 : 0, initiator_rng).value);
    const Message& req_msg =
        bus.send(initiator, responder, MsgType::ScalarReq, req.take());

    // responder side: parse the request off the wire, never touch xi
    ByteReader rd(req_msg.payload);
    rd.u32();
    rd.u32();
    std::uint32_t k = rd.u32();
    PaillierPublicKey wire_pk;
    wire_pk.n = rd.bigint();
    wire_pk.n2 = wire_pk.n * wire_pk.n;
    std::vector<Ciphertext> cts(k);
    for (std::uint32_t c = 0; c < k; ++c) cts[c].value = rd.bigint();

    std::int64_t r = fixed_mask ? *fixed_mask
                                : static_cast<std::int64_t>(
                                      responder_rng.below(mpz_class(mask_range)).get_si());
    // x_i . x_j picks out the component at the responder's hot index
    Ciphertext masked = paillier_add(
        wire_pk, cts.at(xj.hot), paillier_encrypt(wire_pk, mpz_class(r), responder_rng));
    ByteWriter resp;
    resp.u32(static_cast<std::uint32_t>(edge.first));
    resp.u32(static_cast<std::uint32_t>(edge.second));
    resp.bigint(masked.value);
    const Message& resp_msg = bus.send(responder, initiator, MsgType::ScalarResp, resp.take());

    ByteReader rr(resp_msg.payload);
    rr.u32();
    rr.u32();
    Ciphertext back{rr.bigint()};
    mpz_class s = paillier_decrypt_signed(pk, initiator_keys.sk, back);
    if (!s.fits_slong_p()) throw CryptoError("scalar product result out of range");
    return ScalarOutcome{s.get_si(), r};
}

struct ConflictShares {
    std::map<PartyId, std::int64_t> shares;

    std::int64_t sum() const {  // test harness only; never computed in protocol runs
        std::int64_t t = 0;
        for (auto& [_, v] : shares) t += v;
        return t;
    }
};

// Multi-party secure conflict computation with incremental re-evaluation.
//
// Holds the per-party keypairs (one long-lived pair per party per run), the
// per-edge exchange state (s at the initiator, r at the responder) and each
// party's additive share of mu(x). The initiator of an external edge is the
// owner of the endpoint with the lower party id.
class ConflictEngine {
public:
    struct Proposal {
        std::map<VertexId, int> changes;  // vertex -> new color index
        std::map<PartyId, std::int64_t> cand_shares;
        std::map<Edge, ScalarOutcome> new_exchanges;
        std::vector<Edge> touched;
    };

    ConflictEngine(const PartitionedGraph& g, Bus& bus, unsigned key_bits,
                   std::int64_t mask_range, std::uint64_t seed)
        : g_(&g), bus_(&bus), mask_range_(mask_range) {
        for (PartyId p = 0; p < g.m_parties(); ++p) {
            entropy_.push_back(std::make_unique<Entropy>(seed * 0x9e3779b97f4a7c15ULL + p + 1));
            keys_.push_back(paillier_keygen(key_bits, *entropy_.back()));
        }
    }

    const PartitionedGraph& graph() const { return *g_; }
    const Coloring& coloring() const { return x_; }
    const std::map<PartyId, std::int64_t>& shares() const { return shares_; }
    ConflictShares conflict_shares() const { return ConflictShares{shares_}; }
    Entropy& party_entropy(PartyId p) { return *entropy_.at(p); }
    const PaillierKeypair& party_keys(PartyId p) const { return keys_.at(p); }

    std::uint64_t touched_edges_total() const { return touched_total_; }
    std::uint64_t computations() const { return computations_; }

    // Full exchange pass over the current coloring.
    void set_coloring(const Coloring& x) {
        if (static_cast<int>(x.hot.size()) != g_->n_vertices())
            throw ParameterError("coloring does not cover the graph");
        x_ = x;
        full_recompute();
    }

    void full_recompute() {
        shares_.clear();
        for (PartyId p = 0; p < g_->m_parties(); ++p)
            shares_[p] = internal_conflicts(p);
        for (const Edge& e : g_->external_edges()) {
            ScalarOutcome out = run_exchange(e, x_.hot[e.first], x_.hot[e.second]);
            exchanges_[e] = out;
            shares_[initiator_of(e)] += out.s;
            shares_[responder_of(e)] -= out.r;
        }
        touched_total_ += g_->external_edges().size();
        ++computations_;
    }

    // Incremental re-evaluation: only external edges incident to a changed
    // vertex are exchanged again, and shares are delta-updated. Nothing is
    // committed until commit() is called with the returned proposal.
    Proposal propose(const std::map<VertexId, int>& changes) {
        Proposal prop;
        prop.changes = changes;
        prop.cand_shares = shares_;
        std::set<Edge> affected;
        for (const auto& [v, _] : changes)
            for (VertexId u : g_->neighbors(v)) {
                Edge e = make_edge(u, v);
                if (g_->is_external(e)) affected.insert(e);
            }
        for (PartyId p = 0; p < g_->m_parties(); ++p) {
            std::int64_t d = internal_delta(p, changes);
            if (d != 0) prop.cand_shares[p] += d;
        }
        for (const Edge& e : affected) {
            int cu = color_after(e.first, changes);
            int cv = color_after(e.second, changes);
            ScalarOutcome out = run_exchange(e, cu, cv);
            prop.new_exchanges[e] = out;
            prop.touched.push_back(e);
            const ScalarOutcome& old = exchanges_.at(e);
            prop.cand_shares[initiator_of(e)] += out.s - old.s;
            prop.cand_shares[responder_of(e)] -= out.r - old.r;
        }
        touched_total_ += affected.size();
        ++computations_;
        return prop;
    }

    void commit(const Proposal& prop) {
        for (const auto& [v, c] : prop.changes) x_.hot[v] = c;
        shares_ = prop.cand_shares;
        for (const auto& [e, out] : prop.new_exchanges) exchanges_[e] = out;
    }

    PartyId initiator_of(const Edge& e) const {
        PartyId a = g_->owner(e.first), b = g_->owner(e.second);
        return a < b ? a : b;
    }
    PartyId responder_of(const Edge& e) const {
        PartyId a = g_->owner(e.first), b = g_->owner(e.second);
        return a < b ? b : a;
    }

    std::int64_t internal_conflicts(PartyId p) const {
        std::int64_t c = 0;
        for (const Edge& e : g_->edges())
            if (!g_->is_external(e) && g_->owner(e.first) == p)
                c += x_.hot[e.first] == x_.hot[e.second] ? 1 : 0;
        return c;
    }

    // Change in party p's internal conflict count if `changes` were applied.
    std::int64_t internal_delta(PartyId p, const std::map<VertexId, int>& changes) const {
        std::set<Edge> seen;
        std::int64_t d = 0;
        for (const auto& [v, _] : changes) {
            if (g_->owner(v) != p) continue;
            for (VertexId u : g_->neighbors(v)) {
                if (g_->owner(u) != p) continue;
                Edge e = make_edge(u, v);
                if (!seen.insert(e).second) continue;
                int before = x_.hot[e.first] == x_.hot[e.second] ? 1 : 0;
                int after = color_after(e.first, changes) == color_after(e.second, changes)
                                ? 1
                                : 0;
                d += after - before;
            }
        }
        return d;
    }

private:
    int color_after(VertexId v, const std::map<VertexId, int>& changes) const {
        auto it = changes.find(v);
        return it != changes.end() ? it->second : x_.hot[v];
    }

    ScalarOutcome run_exchange(const Edge& e, int cu, int cv) {
        PartyId init = initiator_of(e);
        VertexId vi = g_->owner(e.first) == init ? e.first : e.second;
        VertexId vj = vi == e.first ? e.second : e.first;
        int ci = vi == e.first ? cu : cv;
        int cj = vi == e.first ? cv : cu;
        PartyId resp = responder_of(e);
        return secure_scalar_product(*bus_, e, init, resp, ColorVector{x_.k, ci},
                                     ColorVector{x_.k, cj}, keys_[init], *entropy_[init],
                                     *entropy_[resp], mask_range_);
    }

    const PartitionedGraph* g_;
    Bus* bus_;
    std::int64_t mask_range_;
    Coloring x_;
    std::map<PartyId, std::int64_t> shares_;
    std::map<Edge, ScalarOutcome> exchanges_;
    std::vector<std::unique_ptr<Entropy>> entropy_;
    std::vector<PaillierKeypair> keys_;
    std::uint64_t touched_total_ = 0;
    std::uint64_t computations_ = 0;
};

// One-shot full conflict computation: every party ends with an additive share of mu(x).
inline ConflictShares secure_conflict_computation(const PartitionedGraph& g, const Coloring& x,
                                                  Bus& bus, unsigned key_bits = 256,
                                                  std::int64_t mask_range = kDefaultMaskRange,
                                                  std::uint64_t seed = 1) {
    ConflictEngine engine(g, bus, key_bits, mask_range, seed);
    engine.set_coloring(x);
    return engine.conflict_shares();
}

}  // namespace ppts

#endif
