#ifndef PPTS_PROTOCOL_HPP
#define PPTS_PROTOCOL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "ppts/secure_compare.hpp"
#include "ppts/secure_conflict.hpp"
#include "ppts/tabu.hpp"
#include "ppts/transport.hpp"

namespace ppts {

struct ProtocolConfig {
    int k = 3;
    long long max_local_iter = 20000;     // local-tabucol budget for un-k-colorability detection
    long long max_global_iters = 100000;  // cumulative move budget across all parties
    int rep = 100;
    std::size_t tabu_len = 0;  // 0 -> n/10, floor 1
    double skip_probability = 0.5;
    std::int64_t mask_range = kDefaultMaskRange;
    unsigned key_bits = 256;
    std::uint64_t seed = 1;
    bool defense = true;               // synchronous-move companion on border moves
    int accept_threshold = 1;          // accept border move iff mu' < mu + threshold;
                                       // 1 admits plateau moves, 0 is strict improvement
    int border_moves_per_turn = 10;    // border exploration for locally colored parties
    long long local_phase_cap = 200;   // attempts per turn before passing
    std::optional<Coloring> initial_coloring;  // test hook; default random per party
};

struct RunMetrics {
    long long iterations = 0;
    long long rounds = 0;      // party turns (c)
    long long sync_moves = 0;  // synchronous-move comparisons (feeds ell)
    std::uint64_t scalar_messages = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t touched_edges_total = 0;
    std::uint64_t conflict_computations = 0;
    std::size_t n_external_edges = 0;
    double wall_ms = 0.0;
    double keygen_ms = 0.0;
};

struct PptsResult {
    SolveOutcome outcome;
    RunMetrics metrics;
};

// Turn-based engine for the m-party protocol: round-robin party scheduling,
// inner-vertex local moves decided on local shares, border-vertex synchronous
// moves decided through secure conflict computation plus the comparison
// oracle, distributed tabu lists, and a per-round termination check.
class PptsEngine {
public:
    PptsEngine(const PartitionedGraph& g, const ProtocolConfig& cfg, Bus& bus)
        : g_(&g),
          cfg_(cfg),
          bus_(&bus),
          oracle_(bus),
          conflict_(g, bus, cfg.key_bits, cfg.mask_range, cfg.seed) {
        if (g.m_parties() < 2) throw ParameterError("protocol requires at least 2 parties");
        if (cfg.k < 1 || cfg.skip_probability < 0.0 || cfg.skip_probability > 1.0)
            throw ParameterError("bad protocol config");
        std::size_t tlen = cfg.tabu_len ? cfg.tabu_len
                                        : std::max<std::size_t>(1, g.n_vertices() / 10);
        for (PartyId p = 0; p < g.m_parties(); ++p) {
            tabu_.emplace_back(tlen);
            rng_.emplace_back(cfg.seed * 0x2545f4914f6cdd1dULL + 0x100 + p);
            own_internal_.push_back({});
            border_pool_.push_back({});
        }
        for (const Edge& e : g.edges())
            if (!g.is_external(e)) own_internal_[g.owner(e.first)].push_back(e);
    }

    void init() {
        Coloring x;
        if (cfg_.initial_coloring) {
            x = *cfg_.initial_coloring;
            if (x.k != cfg_.k) throw ParameterError("initial coloring has wrong k");
        } else {
            std::vector<int> hot(g_->n_vertices());
            // each party colors its own vertices from its own stream
            for (PartyId p = 0; p < g_->m_parties(); ++p)
                for (VertexId v : g_->vertices_of(p))
                    hot[v] = static_cast<int>(rng_[p]() % cfg_.k);
            x = Coloring(cfg_.k, std::move(hot));
        }
        conflict_.set_coloring(x);
        initialized_ = true;
    }

    const Coloring& coloring() const { return conflict_.coloring(); }
    const std::map<PartyId, std::int64_t>& shares() const { return conflict_.shares(); }
    ConflictEngine& conflict_engine() { return conflict_; }
    SecureCompareOracle& oracle() { return oracle_; }
    TabuList& tabu(PartyId p) { return tabu_.at(p); }
    long long iterations() const { return iterations_; }
    long long rounds() const { return rounds_; }
    long long sync_moves() const { return sync_moves_; }

    // Colors of foreign neighbors at the time of each synchronous move,
    // keyed by comparison round id. Test-harness instrumentation only.
    const std::map<std::uint64_t, std::map<VertexId, int>>& ground_truth() const {
        return ground_truth_;
    }

    std::int64_t internal_conflicts(PartyId p) const { return conflict_.internal_conflicts(p); }

    // Inner-vertex move: the global delta is entirely internal to the party,
    // so comparing local shares equals comparing global mu. Zero messages.
    bool inner_move(PartyId a, VertexId v, int to) {
        require_init();
        if (g_->owner(v) != a || !g_->is_inner(v)) throw ParameterError("not an inner vertex of this party");
        int from = conflict_.coloring().hot[v];
        std::int64_t delta = conflict_.internal_delta(a, {{v, to}});
        bool accepted = delta < 0;  // strict; aspiration admits tabu moves on the same condition
        log(a, {{"kind", "inner_move"},
                {"vertex", v},
                {"from", from},
                {"to", to},
                {"delta", delta},
                {"accepted", accepted}});
        if (accepted) apply_local(a, v, from, to);
        return accepted;
    }

    // Synchronous move: primary border move by P_a, hidden companion move (or
    // skip) by a random other party, incremental secure conflict computation,
    // comparison bit delivered to the two involved parties only.
    bool synchronous_move(PartyId a, VertexId vi, int to) {
        return synchronous_move(a, vi, to, cfg_.accept_threshold);
    }

    bool synchronous_move(PartyId a, VertexId vi, int to, int threshold) {
        require_init();
        if (g_->owner(vi) != a) throw ParameterError("vertex not owned by party");
        std::uint64_t rid = ++cmp_id_;
        int from = conflict_.coloring().hot[vi];
        std::map<VertexId, int> changes{{vi, to}};
        std::set<PartyId> recipients{a};
        std::optional<Move> companion;
        PartyId b = -1;

        if (cfg_.defense) {
            b = pick_other_party(a);
            ByteWriter w;
            w.u64(rid);
            bus_->send(a, b, MsgType::SyncInvite, w.take());
            recipients.insert(b);
            companion = companion_choice(b);
            if (companion) changes[companion->vertex] = companion->to_color;
            log(b, {{"kind", "companion"},
                    {"round_id", rid},
                    {"skipped", !companion.has_value()},
                    {"vertex", companion ? json(companion->vertex) : json()},
                    {"to", companion ? json(companion->to_color) : json()}});
        }

        auto prop = conflict_.propose(changes);
        // accepted iff mu(x') < mu(x) + threshold; the shift rides on P_a's share
        std::map<PartyId, std::int64_t> right = conflict_.shares();
        right[a] += threshold;
        bool bit = sec_compare(oracle_, rid, prop.cand_shares, right, recipients).value;

        std::vector<VertexId> foreign;
        for (VertexId u : g_->neighbors(vi))
            if (g_->owner(u) != a) foreign.push_back(u);
        for (VertexId u : foreign)  // harness-side ground truth, not in any view
            ground_truth_[rid][u] = conflict_.coloring().hot[u];
        log(a, {{"kind", "border_move"},
                {"round_id", rid},
                {"vertex", vi},
                {"from", from},
                {"to", to},
                {"delta_a", conflict_.internal_delta(a, {{vi, to}})},
                {"n_ext", g_->external_degree(vi)},
                {"neighbors", foreign},
                {"bit", bit},
                {"accepted", bit},
                {"threshold", threshold},
                {"defense", cfg_.defense}});

        // exchange-state commit/rollback notice to other parties on touched
        // edges (scheduling metadata; their shares must stay reconciled)
        std::set<PartyId> affected;
        for (const Edge& e : prop.touched) {
            affected.insert(g_->owner(e.first));
            affected.insert(g_->owner(e.second));
        }
        affected.erase(a);
        if (b >= 0) affected.erase(b);
        for (PartyId p : affected) {
            ByteWriter w;
            w.u64(rid);
            w.u8(bit ? 1 : 0);
            bus_->send(a, p, MsgType::SyncDone, w.take());
        }

        if (bit) {
            conflict_.commit(prop);
            push_tabu(tabu_[a], vi, from);
            if (companion)
                push_tabu(tabu_[b], companion->vertex, companion->from_color);
        }
        ++sync_moves_;
        return bit;
    }

    // Full protocol run.
    SolveOutcome run() {
        if (!initialized_) init();
        SolveOutcome out;
        if (!locally_colorable_precheck()) {
            out.status = SolveStatus::NotColorable;
            out.iterations = iterations_;
            out.conflict_trace = trace_;
            return out;
        }
        std::set<PartyId> all;
        for (PartyId p = 0; p < g_->m_parties(); ++p) all.insert(p);

        PartyId a = 0;
        while (true) {
            ++rounds_;
            bus_->set_round(static_cast<int>(rounds_));
            bool done = sec_compare_with_constant(oracle_, ++cmp_id_, conflict_.shares(), 1, all)
                            .value;
            if (done) {
                out.status = SolveStatus::Colorable;
                out.coloring = conflict_.coloring();
                break;
            }
            if (iterations_ >= cfg_.max_global_iters) {
                out.status = SolveStatus::NotColorable;
                break;
            }
            local_phase(a);
            if (internal_conflicts(a) == 0) border_exploration(a);

            PartyId next = (a + 1) % g_->m_parties();
            ByteWriter w;
            w.u32(static_cast<std::uint32_t>(next));
            bus_->send(a, next, MsgType::PassToken, w.take());
            a = next;
        }
        out.iterations = iterations_;
        out.conflict_trace = trace_;
        return out;
    }

    RunMetrics metrics() const {
        RunMetrics m;
        m.iterations = iterations_;
        m.rounds = rounds_;
        m.sync_moves = sync_moves_;
        m.scalar_messages = bus_->scalar_messages();
        m.comparisons = oracle_.invocations();
        m.touched_edges_total = conflict_.touched_edges_total();
        m.conflict_computations = conflict_.computations();
        m.n_external_edges = g_->external_edges().size();
        return m;
    }

private:
    void require_init() {
        if (!initialized_) throw ParameterError("engine not initialized");
    }

    void log(PartyId observer, json ev) {
        if (bus_->transcript()) bus_->transcript()->log(observer, std::move(ev));
    }

    void apply_local(PartyId a, VertexId v, int from, int to) {
        auto prop = conflict_.propose({{v, to}});
        conflict_.commit(prop);
        push_tabu(tabu_[a], v, from);
    }

    PartyId pick_other_party(PartyId a) {
        PartyId b = static_cast<PartyId>(rng_[a]() % (g_->m_parties() - 1));
        if (b >= a) ++b;
        return b;
    }

    // P_b's hidden choice: skip with the configured probability, otherwise
    // recolor a vertex, preferring endpoints of its conflicting internal edges.
    std::optional<Move> companion_choice(PartyId b) {
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        if (coin(rng_[b]) < cfg_.skip_probability) return std::nullopt;
        std::vector<VertexId> pool;
        for (const Edge& e : own_internal_[b])
            if (conflict_.coloring().hot[e.first] == conflict_.coloring().hot[e.second]) {
                pool.push_back(e.first);
                pool.push_back(e.second);
            }
        if (pool.empty()) {
            // prefer inner vertices: the move is just as hidden from P_a but
            // touches no external edges, so the joint computation stays cheap
            for (VertexId v : g_->vertices_of(b))
                if (g_->is_inner(v)) pool.push_back(v);
        }
        if (pool.empty()) pool = g_->vertices_of(b);
        VertexId vj = pool[rng_[b]() % pool.size()];
        int from = conflict_.coloring().hot[vj];
        int cj = pick_color(b, vj, from);
        return Move{vj, from, cj};
    }

    int pick_color(PartyId p, VertexId v, int from) {
        if (cfg_.k == 1) return from;
        std::vector<int> options;
        for (int c = 0; c < cfg_.k; ++c)
            if (c != from && !tabu_[p].contains(v, c)) options.push_back(c);
        if (!options.empty()) return options[rng_[p]() % options.size()];
        int c = static_cast<int>(rng_[p]() % (cfg_.k - 1));
        return c >= from ? c + 1 : c;
    }

    // Each party checks in isolation that its own partition is k-colorable;
    // a local tabucol failure terminates the whole protocol.
    bool locally_colorable_precheck() {
        for (PartyId p = 0; p < g_->m_parties(); ++p) {
            auto verts = g_->vertices_of(p);
            std::map<VertexId, int> index;
            for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = static_cast<int>(i);
            std::vector<Edge> edges;
            for (const Edge& e : own_internal_[p]) edges.push_back({index[e.first], index[e.second]});
            PartitionedGraph local(static_cast<int>(verts.size()), 1,
                                   std::vector<PartyId>(verts.size(), 0), std::move(edges));
            auto res = tabucol_solve(local, cfg_.k, cfg_.max_local_iter,
                                     std::max<std::size_t>(1, verts.size() / 10), cfg_.rep,
                                     cfg_.seed + 0x5151 + p);
            if (res.status != SolveStatus::Colorable) {
                log(p, {{"kind", "local_uncolorable"}, {"party", p}});
                return false;
            }
        }
        return true;
    }

    std::optional<Edge> pick_conflicting_internal_edge(PartyId a) {
        std::vector<Edge> conf;
        for (const Edge& e : own_internal_[a])
            if (conflict_.coloring().hot[e.first] == conflict_.coloring().hot[e.second])
                conf.push_back(e);
        if (conf.empty()) return std::nullopt;
        return conf[rng_[a]() % conf.size()];
    }

    void local_phase(PartyId a) {
        std::vector<ScoredMove> pool;
        long long attempts = 0;
        while (internal_conflicts(a) > 0) {
            if (iterations_ >= cfg_.max_global_iters) return;
            if (attempts >= cfg_.local_phase_cap) return;  // pass; resume next turn
            auto e = pick_conflicting_internal_edge(a);
            if (!e) break;
            VertexId v = rng_[a]() % 2 == 0 ? e->first : e->second;
            int from = conflict_.coloring().hot[v];
            int to = pick_color(a, v, from);
            ++iterations_;
            ++attempts;
            if (g_->is_inner(v)) {
                if (inner_move(a, v, to)) {
                    pool.clear();
                } else {
                    pool.push_back({Move{v, from, to}, conflict_.internal_delta(a, {{v, to}})});
                    if (static_cast<int>(pool.size()) >= cfg_.rep) {
                        if (auto m = best_non_tabu(pool, tabu_[a])) {
                            log(a, {{"kind", "forced_move"},
                                    {"vertex", m->vertex},
                                    {"from", m->from_color},
                                    {"to", m->to_color}});
                            apply_local(a, m->vertex, m->from_color, m->to_color);
                        }
                        pool.clear();
                    }
                }
            } else {
                synchronous_move(a, v, to);
            }
            record_trace();
        }
    }

    void border_exploration(PartyId a) {
        std::vector<VertexId> border;
        for (VertexId v : g_->vertices_of(a))
            if (g_->is_border(v)) border.push_back(v);
        if (border.empty()) return;
        for (int i = 0; i < cfg_.border_moves_per_turn; ++i) {
            if (iterations_ >= cfg_.max_global_iters) return;
            VertexId v = border[rng_[a]() % border.size()];
            int from = conflict_.coloring().hot[v];
            if (cfg_.k == 1) return;
            int to = pick_color(a, v, from);
            ++iterations_;
            if (synchronous_move(a, v, to)) {
                border_pool_[a].clear();
            } else {
                // escape hatch mirroring the rejected-neighbor pool of the
                // centralized search; scored on the party's own share change,
                // the only delta it can see for a border vertex
                border_pool_[a].push_back(
                    {Move{v, from, to}, conflict_.internal_delta(a, {{v, to}})});
                if (static_cast<int>(border_pool_[a].size()) >= cfg_.rep) {
                    if (auto m = best_non_tabu(border_pool_[a], tabu_[a])) {
                        log(a, {{"kind", "forced_move"},
                                {"vertex", m->vertex},
                                {"from", m->from_color},
                                {"to", m->to_color}});
                        apply_local(a, m->vertex, m->from_color, m->to_color);
                    }
                    border_pool_[a].clear();
                }
            }
            record_trace();
        }
    }

    // harness instrumentation: global conflict trace for CSV export
    void record_trace() {
        long long mu = 0;
        const auto& hot = conflict_.coloring().hot;
        for (const Edge& e : g_->edges()) mu += hot[e.first] == hot[e.second] ? 1 : 0;
        trace_.push_back(mu);
    }

    const PartitionedGraph* g_;
    ProtocolConfig cfg_;
    Bus* bus_;
    SecureCompareOracle oracle_;
    ConflictEngine conflict_;
    std::vector<TabuList> tabu_;
    std::vector<std::mt19937_64> rng_;
    std::vector<std::vector<Edge>> own_internal_;
    std::vector<std::vector<ScoredMove>> border_pool_;
    bool initialized_ = false;
    long long iterations_ = 0;
    long long rounds_ = 0;
    long long sync_moves_ = 0;
    std::uint64_t cmp_id_ = 0;
    std::vector<long long> trace_;
    std::map<std::uint64_t, std::map<VertexId, int>> ground_truth_;
};

inline PptsResult run_ppts(const PartitionedGraph& g, const ProtocolConfig& cfg, Bus& bus) {
    PptsEngine engine(g, cfg, bus);
    PptsResult res;
    res.outcome = engine.run();
    res.metrics = engine.metrics();
    return res;
}

}  // namespace ppts

#endif
