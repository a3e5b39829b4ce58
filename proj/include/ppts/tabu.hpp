#ifndef PPTS_TABU_HPP
#define PPTS_TABU_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "ppts/graph.hpp"

namespace ppts {

struct Move {
    VertexId vertex = 0;
    int from_color = 0;
    int to_color = 0;
};

// Bounded FIFO of (vertex, color) pairs; eviction is strictly oldest-first.
class TabuList {
public:
    explicit TabuList(std::size_t capacity) : capacity_(capacity) {}

    bool contains(VertexId v, int color) const {
        for (const auto& e : entries_)
            if (e.first == v && e.second == color) return true;
        return false;
    }
    void push(VertexId v, int color) {
        if (capacity_ == 0) return;
        if (entries_.size() == capacity_) entries_.pop_front();
        entries_.push_back({v, color});
    }
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::deque<std::pair<VertexId, int>> entries_;
};

inline bool check_tabu(const TabuList& list, const Move& move) {
    return list.contains(move.vertex, move.to_color);
}
inline void push_tabu(TabuList& list, VertexId vertex, int old_color) {
    list.push(vertex, old_color);
}

struct ScoredMove {
    Move move;
    long long delta = 0;  // change in mu if applied
};

// Best candidate not barred by the tabu list; ties broken by lowest
// (vertex, color). Falls back to the overall best when everything is tabu.
inline std::optional<Move> best_non_tabu(const std::vector<ScoredMove>& neighbors,
                                         const TabuList& tabu) {
    auto better = [](const ScoredMove& a, const ScoredMove& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        if (a.move.vertex != b.move.vertex) return a.move.vertex < b.move.vertex;
        return a.move.to_color < b.move.to_color;
    };
    const ScoredMove* best = nullptr;
    const ScoredMove* best_any = nullptr;
    for (const auto& n : neighbors) {
        if (!best_any || better(n, *best_any)) best_any = &n;
        if (check_tabu(tabu, n.move)) continue;
        if (!best || better(n, *best)) best = &n;
    }
    if (best) return best->move;
    if (best_any) return best_any->move;
    return std::nullopt;
}

enum class SolveStatus { Colorable, NotColorable, IterationLimit };

struct SolveOutcome {
    SolveStatus status = SolveStatus::IterationLimit;
    std::optional<Coloring> coloring;  // present iff Colorable
    long long iterations = 0;
    std::vector<long long> conflict_trace;  // mu after each iteration
};

// Incremental conflict bookkeeping shared by Tabucol and the per-party local
// search in the protocol engine.
class ColorState {
public:
    ColorState(const PartitionedGraph& g, int k, const std::vector<int>& hot)
        : g_(&g), k_(k), hot_(hot), ncount_(g.n_vertices(), std::vector<int>(k, 0)) {
        for (const Edge& e : g.edges()) {
            ++ncount_[e.first][hot_[e.second]];
            ++ncount_[e.second][hot_[e.first]];
            if (hot_[e.first] == hot_[e.second]) ++mu_;
        }
    }

    long long mu() const { return mu_; }
    int color(VertexId v) const { return hot_[v]; }
    const std::vector<int>& hot() const { return hot_; }

    long long delta(VertexId v, int to) const {
        return ncount_[v][to] - ncount_[v][hot_[v]];
    }

    void apply(VertexId v, int to) {
        int from = hot_[v];
        if (from == to) return;
        mu_ += delta(v, to);
        for (VertexId u : g_->neighbors(v)) {
            --ncount_[u][from];
            ++ncount_[u][to];
        }
        hot_[v] = to;
    }

    std::vector<Edge> conflicting_edges() const {
        std::vector<Edge> out;
        for (const Edge& e : g_->edges())
            if (hot_[e.first] == hot_[e.second]) out.push_back(e);
        return out;
    }

private:
    const PartitionedGraph* g_;
    int k_;
    std::vector<int> hot_;
    std::vector<std::vector<int>> ncount_;  // ncount_[v][c] = neighbors of v colored c
    long long mu_ = 0;
};

// Centralized Tabucol: random start, neighbors generated by recoloring an
// endpoint of a conflicting edge, strict-improvement acceptance with
// aspiration, forced best non-tabu move after `rep` rejected neighbors.
inline SolveOutcome tabucol_solve(const PartitionedGraph& g, int k, long long max_iter,
                                  std::size_t tabu_len, int rep, std::uint64_t seed) {
    if (k < 1 || max_iter < 0 || rep < 1) throw ParameterError("bad tabucol parameters");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> color_pick(0, k - 1);
    std::vector<int> hot(g.n_vertices());
    for (auto& h : hot) h = color_pick(rng);

    ColorState state(g, k, hot);
    TabuList tabu(tabu_len);
    SolveOutcome out;
    std::vector<ScoredMove> pool;

    while (out.iterations < max_iter) {
        if (state.mu() == 0) break;
        auto conflicts = state.conflicting_edges();
        const Edge& e = conflicts[rng() % conflicts.size()];
        VertexId v = rng() % 2 == 0 ? e.first : e.second;
        int from = state.color(v);
        int to = color_pick(rng);
        while (to == from) to = color_pick(rng);
        ++out.iterations;

        long long d = state.delta(v, to);
        if (d < 0) {
            // improving; aspiration admits it even when tabu
            state.apply(v, to);
            push_tabu(tabu, v, from);
            pool.clear();
        } else {
            pool.push_back({Move{v, from, to}, d});
            if (static_cast<int>(pool.size()) >= rep) {
                if (auto m = best_non_tabu(pool, tabu)) {
                    state.apply(m->vertex, m->to_color);
                    push_tabu(tabu, m->vertex, m->from_color);
                }
                pool.clear();
            }
        }
        out.conflict_trace.push_back(state.mu());
    }

    if (state.mu() == 0) {
        out.status = SolveStatus::Colorable;
        out.coloring = Coloring(k, state.hot());
    } else {
        out.status = SolveStatus::IterationLimit;
    }
    return out;
}

}  // namespace ppts

#endif
