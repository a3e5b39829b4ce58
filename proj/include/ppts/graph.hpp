#ifndef PPTS_GRAPH_HPP
#define PPTS_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppts {

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

using VertexId = int;
using PartyId = int;
using Edge = std::pair<VertexId, VertexId>;  // normalized u < v

inline Edge make_edge(VertexId u, VertexId v) {
    if (u == v) throw ParameterError("self-loop edge");
    return u < v ? Edge{u, v} : Edge{v, u};
}

// One-hot color vector over k colors; only the hot index is stored.
struct ColorVector {
    int k = 0;
    int hot = 0;

    ColorVector() = default;
    ColorVector(int k_, int hot_) : k(k_), hot(hot_) {
        if (k < 1 || hot < 0 || hot >= k) throw ParameterError("bad color vector");
    }
    bool operator==(const ColorVector&) const = default;
};

// conflict(xi, xj) = xi . xj for one-hot vectors: 1 iff the hot indices match.
inline int conflict(const ColorVector& xi, const ColorVector& xj) {
    if (xi.k != xj.k) throw ParameterError("color vectors with mismatched k");
    return xi.hot == xj.hot ? 1 : 0;
}

// Vertex-partitioned undirected graph. Immutable after construction.
class PartitionedGraph {
public:
    PartitionedGraph(int n_vertices, int m_parties, std::vector<PartyId> owner,
                     std::vector<Edge> edges)
        : n_(n_vertices), m_(m_parties), owner_(std::move(owner)) {
        if (n_ < 1 || m_ < 1) throw ParameterError("graph needs n >= 1, m >= 1");
        if (static_cast<int>(owner_.size()) != n_)
            throw ParameterError("owner map must cover every vertex");
        for (PartyId p : owner_)
            if (p < 0 || p >= m_) throw ParameterError("owner out of range");
        std::set<Edge> dedup;
        for (auto& e : edges) {
            Edge ne = make_edge(e.first, e.second);
            if (ne.first < 0 || ne.second >= n_) throw ParameterError("edge endpoint out of range");
            dedup.insert(ne);
        }
        edges_.assign(dedup.begin(), dedup.end());
        adj_.assign(n_, {});
        border_.assign(n_, false);
        for (auto& [u, v] : edges_) {
            adj_[u].push_back(v);
            adj_[v].push_back(u);
            if (owner_[u] != owner_[v]) {
                external_edges_.push_back({u, v});
                border_[u] = border_[v] = true;
            }
        }
    }

    int n_vertices() const { return n_; }
    int m_parties() const { return m_; }
    PartyId owner(VertexId v) const { return owner_.at(v); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Edge>& external_edges() const { return external_edges_; }
    const std::vector<VertexId>& neighbors(VertexId v) const { return adj_.at(v); }

    bool is_external(const Edge& e) const { return owner_[e.first] != owner_[e.second]; }
    bool is_border(VertexId v) const { return border_.at(v); }
    bool is_inner(VertexId v) const { return !border_.at(v); }

    std::vector<VertexId> vertices_of(PartyId p) const {
        std::vector<VertexId> out;
        for (VertexId v = 0; v < n_; ++v)
            if (owner_[v] == p) out.push_back(v);
        return out;
    }

    // Number of external edges incident to v.
    int external_degree(VertexId v) const {
        int d = 0;
        for (VertexId u : adj_.at(v))
            if (owner_[u] != owner_[v]) ++d;
        return d;
    }

    bool operator==(const PartitionedGraph& o) const {
        return n_ == o.n_ && m_ == o.m_ && owner_ == o.owner_ && edges_ == o.edges_;
    }

private:
    int n_;
    int m_;
    std::vector<PartyId> owner_;
    std::vector<Edge> edges_;
    std::vector<Edge> external_edges_;
    std::vector<std::vector<VertexId>> adj_;
    std::vector<bool> border_;
};

// Full color assignment; hot[v] is vertex v's color index.
struct Coloring {
    int k = 0;
    std::vector<int> hot;

    Coloring() = default;
    Coloring(int k_, std::vector<int> hot_) : k(k_), hot(std::move(hot_)) {
        for (int h : hot)
            if (h < 0 || h >= k) throw ParameterError("color index out of range");
    }
    ColorVector vec(VertexId v) const { return ColorVector{k, hot.at(v)}; }
};

struct ConflictReport {
    long long total = 0;
    std::map<Edge, int> per_edge;
};

// Plaintext conflict oracle: mu(x) = sum over edges of the endpoint scalar product.
inline ConflictReport total_conflicts(const PartitionedGraph& g, const Coloring& x) {
    if (static_cast<int>(x.hot.size()) != g.n_vertices())
        throw ParameterError("coloring does not cover the graph");
    ConflictReport rep;
    for (const Edge& e : g.edges()) {
        int c = conflict(x.vec(e.first), x.vec(e.second));
        rep.per_edge[e] = c;
        rep.total += c;
    }
    return rep;
}

inline bool is_proper_k_coloring(const PartitionedGraph& g, const Coloring& x, int k) {
    if (x.k != k) return false;
    return total_conflicts(g, x).total == 0;
}

// Seeded G(n, density) generator with contiguous block partition: the first
// n % m parties own ceil(n/m) vertices, the rest floor(n/m).
inline PartitionedGraph generate_partitioned_graph(int n, double density, int m,
                                                  std::uint64_t seed) {
    if (n < 1 || m < 1 || m > n) throw ParameterError("need n >= m >= 1");
    if (density < 0.0 || density > 1.0) throw ParameterError("density must be in [0,1]");
    std::vector<PartyId> owner(n);
    int base = n / m, extra = n % m;
    int v = 0;
    for (PartyId p = 0; p < m; ++p) {
        int take = base + (p < extra ? 1 : 0);
        for (int i = 0; i < take; ++i) owner[v++] = p;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng) < density) edges.push_back({i, j});
    return PartitionedGraph(n, m, std::move(owner), std::move(edges));
}

// --- graph file format -------------------------------------------------------
//
// Line oriented, DIMACS-inspired, 1-based vertex labels on disk:
//   c <comment>
//   p dgc <n_vertices> <m_parties> <n_edges>
//   o <vertex> <party>          (party is 0-based)
//   e <u> <v>
// Vertices without an `o` line default to party 0.

inline void write_graph(std::ostream& out, const PartitionedGraph& g) {
    out << "p dgc " << g.n_vertices() << ' ' << g.m_parties() << ' ' << g.edges().size()
        << '\n';
    for (VertexId v = 0; v < g.n_vertices(); ++v)
        out << "o " << v + 1 << ' ' << g.owner(v) << '\n';
    for (const Edge& e : g.edges()) out << "e " << e.first + 1 << ' ' << e.second + 1 << '\n';
}

inline void write_graph_file(const std::string& path, const PartitionedGraph& g) {
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot open " + path + " for writing");
    write_graph(out, g);
}

inline PartitionedGraph read_graph(std::istream& in) {
    int n = -1, m = -1, ne = 0;
    std::vector<PartyId> owner;
    std::vector<Edge> edges;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "c") continue;
        if (tag == "p") {
            std::string fmt;
            if (!(ls >> fmt >> n >> m >> ne) || fmt != "dgc")
                throw ParameterError("bad problem line: " + line);
            owner.assign(n, 0);
        } else if (tag == "o") {
            int v, p;
            if (!(ls >> v >> p) || n < 0 || v < 1 || v > n)
                throw ParameterError("bad ownership line: " + line);
            owner[v - 1] = p;
        } else if (tag == "e") {
            int u, v;
            if (!(ls >> u >> v) || n < 0 || u < 1 || v < 1 || u > n || v > n)
                throw ParameterError("bad edge line: " + line);
            edges.push_back({u - 1, v - 1});
        } else {
            throw ParameterError("unknown line tag: " + tag);
        }
    }
    if (n < 0) throw ParameterError("missing problem line");
    if (static_cast<int>(edges.size()) != ne)
        throw ParameterError("edge count does not match header");
    return PartitionedGraph(n, m, std::move(owner), std::move(edges));
}

inline PartitionedGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path);
    return read_graph(in);
}

// The seven-vertex worked example: parties {1,2,3}, {4,5}, {6,7} (1-based
// labels), internal triangle 1-2-3 plus 4-5 and 6-7, external edges
// e24, e36, e47, e56.
inline PartitionedGraph example7_graph() {
    std::vector<PartyId> owner = {0, 0, 0, 1, 1, 2, 2};
    std::vector<Edge> edges = {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {5, 6},
                               {1, 3}, {2, 5}, {3, 6}, {4, 5}};
    return PartitionedGraph(7, 3, std::move(owner), std::move(edges));
}

// A coloring of the example graph with exactly three conflicts, all external.
inline Coloring example7_conflicted_coloring() {
    return Coloring(3, {0, 1, 2, 1, 0, 2, 1});  // conflicts on e24, e36, e47
}

}  // namespace ppts

#endif
