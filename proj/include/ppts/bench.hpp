#ifndef PPTS_BENCH_HPP
#define PPTS_BENCH_HPP

#include <chrono>
#include <cstdint>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "ppts/protocol.hpp"

namespace ppts {

enum class SolverKind { Tabucol, Ppts };

inline const char* solver_name(SolverKind s) {
    return s == SolverKind::Tabucol ? "tabucol" : "ppts";
}

struct ExperimentSpec {
    std::vector<int> vertex_counts{30, 50, 100};
    std::vector<double> densities{0.1};
    int parties = 3;
    unsigned key_bits = 256;
    std::vector<int> k_values;  // empty -> chromatic search
    int seeds_per_cell = 3;
    long long budget = 100000;

    // simple key=value text config, comma-separated lists
    static ExperimentSpec from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParameterError("cannot open " + path);
        ExperimentSpec spec;
        std::string line;
        auto ints = [](const std::string& s) {
            std::vector<int> out;
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
            return out;
        };
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(0, eq), val = line.substr(eq + 1);
            auto strip = [](std::string& s) {
                while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
                while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
            };
            strip(key);
            strip(val);
            if (key == "vertices") spec.vertex_counts = ints(val);
            else if (key == "densities") {
                spec.densities.clear();
                std::stringstream ss(val);
                std::string tok;
                while (std::getline(ss, tok, ',')) spec.densities.push_back(std::stod(tok));
            } else if (key == "parties") spec.parties = std::stoi(val);
            else if (key == "key_bits") spec.key_bits = static_cast<unsigned>(std::stoul(val));
            else if (key == "k") spec.k_values = val == "search" ? std::vector<int>{} : ints(val);
            else if (key == "seeds") spec.seeds_per_cell = std::stoi(val);
            else if (key == "budget") spec.budget = std::stoll(val);
            else throw ParameterError("unknown config key: " + key);
        }
        if (spec.vertex_counts.empty() || spec.densities.empty() || spec.parties < 1 ||
            spec.seeds_per_cell < 1 || spec.budget < 1)
            throw ParameterError("invalid experiment spec");
        return spec;
    }
};

inline SolveOutcome solve_with(SolverKind solver, const PartitionedGraph& g, int k,
                               long long budget, std::uint64_t seed,
                               const ProtocolConfig& base = {}) {
    if (solver == SolverKind::Tabucol) {
        std::size_t tlen = std::max<std::size_t>(1, g.n_vertices() / 10);
        return tabucol_solve(g, k, budget, tlen, 50, seed);
    }
    ProtocolConfig cfg = base;
    cfg.k = k;
    cfg.max_global_iters = budget;
    cfg.seed = seed;
    Bus bus(nullptr, /*keep_messages=*/false);  // no transcript: long runs stay O(1) memory
    return run_ppts(g, cfg, bus).outcome;
}

struct ChromaticResult {
    int min_k = -1;  // smallest k found colorable; -1 if none in range
    std::map<int, bool> colorable;
};

// Descending scan from k_max: stop at the first k that fails, return the
// smallest k that succeeded.
inline ChromaticResult chromatic_search(const PartitionedGraph& g, SolverKind solver,
                                        int k_max, long long budget, std::uint64_t seed,
                                        const ProtocolConfig& base = {}) {
    if (k_max < 1) throw ParameterError("k_max must be positive");
    ChromaticResult res;
    for (int k = k_max; k >= 1; --k) {
        bool ok = solve_with(solver, g, k, budget, seed, base).status == SolveStatus::Colorable;
        res.colorable[k] = ok;
        if (!ok) break;
        res.min_k = k;
    }
    return res;
}

// Max-degree + 1: a k the greedy bound guarantees colorable, used as the
// default top of the chromatic scan.
inline int greedy_k_bound(const PartitionedGraph& g) {
    int maxdeg = 0;
    for (VertexId v = 0; v < g.n_vertices(); ++v)
        maxdeg = std::max(maxdeg, static_cast<int>(g.neighbors(v).size()));
    return maxdeg + 1;
}

struct CostModelCheck {
    bool messages_ok = false;
    bool comparisons_ok = false;
    std::uint64_t expected_scalar_messages = 0;
    std::uint64_t expected_comparisons = 0;

    bool pass() const { return messages_ok && comparisons_ok; }
};

// Reconciles the transport counters with the cost accounting: scalar-product
// messages are 2 per external edge touched by a conflict computation, and
// comparisons are one per synchronous move plus one per round.
inline CostModelCheck verify_cost_model(const RunMetrics& m) {
    CostModelCheck c;
    c.expected_scalar_messages = 2 * m.touched_edges_total;
    c.expected_comparisons = static_cast<std::uint64_t>(m.sync_moves + m.rounds);
    c.messages_ok = m.scalar_messages == c.expected_scalar_messages;
    c.comparisons_ok = m.comparisons == c.expected_comparisons;
    return c;
}

struct SweepRow {
    int n = 0;
    double density = 0.0;
    int m = 0;
    std::uint64_t seed = 0;
    std::string solver;
    int k = 0;  // k solved, or min_k for chromatic rows
    std::string status;
    long long iterations = 0;
    double wall_ms = 0.0;
    double keygen_ms = 0.0;
    RunMetrics metrics;
};

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Colorable: return "colorable";
        case SolveStatus::NotColorable: return "not-colorable";
        case SolveStatus::IterationLimit: return "iteration-limit";
    }
    return "?";
}

inline void write_sweep_csv_header(std::ostream& out) {
    out << "n,density,m,seed,solver,k,status,iterations,wall_ms,keygen_ms,"
           "scalar_messages,comparisons,rounds,sync_moves,n_external_edges\n";
}

inline void write_sweep_csv_row(std::ostream& out, const SweepRow& r) {
    out << r.n << ',' << r.density << ',' << r.m << ',' << r.seed << ',' << r.solver << ','
        << r.k << ',' << r.status << ',' << r.iterations << ',' << r.wall_ms << ','
        << r.keygen_ms << ',' << r.metrics.scalar_messages << ',' << r.metrics.comparisons
        << ',' << r.metrics.rounds << ',' << r.metrics.sync_moves << ','
        << r.metrics.n_external_edges << '\n';
}

inline json sweep_row_json(const SweepRow& r) {
    return json{{"n", r.n},
                {"density", r.density},
                {"m", r.m},
                {"seed", r.seed},
                {"solver", r.solver},
                {"k", r.k},
                {"status", r.status},
                {"iterations", r.iterations},
                {"wall_ms", r.wall_ms},
                {"keygen_ms", r.keygen_ms},
                {"scalar_messages", r.metrics.scalar_messages},
                {"comparisons", r.metrics.comparisons},
                {"rounds", r.metrics.rounds},
                {"sync_moves", r.metrics.sync_moves},
                {"n_external_edges", r.metrics.n_external_edges}};
}

namespace detail {
inline std::vector<SweepRow> run_cell(const ExperimentSpec& spec, int n, double density,
                                      std::uint64_t seed) {
    std::vector<SweepRow> rows;
    auto g = generate_partitioned_graph(n, density, spec.parties, seed);
    std::vector<int> ks = spec.k_values;
    bool chromatic = ks.empty();

    for (SolverKind solver : {SolverKind::Tabucol, SolverKind::Ppts}) {
        using clock = std::chrono::steady_clock;
        SweepRow row;
        row.n = n;
        row.density = density;
        row.m = spec.parties;
        row.seed = seed;
        row.solver = solver_name(solver);

        ProtocolConfig base;
        base.key_bits = spec.key_bits;

        if (chromatic) {
            auto t0 = clock::now();
            auto res = chromatic_search(g, solver, greedy_k_bound(g), spec.budget, seed, base);
            row.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
            row.k = res.min_k;
            row.status = res.min_k > 0 ? "colorable" : "not-colorable";
            rows.push_back(row);
        } else {
            for (int k : ks) {
                SweepRow r = row;
                r.k = k;
                if (solver == SolverKind::Tabucol) {
                    auto t0 = clock::now();
                    auto out = tabucol_solve(g, k, spec.budget,
                                             std::max<std::size_t>(1, n / 10), 50, seed);
                    r.wall_ms =
                        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
                    r.status = status_name(out.status);
                    r.iterations = out.iterations;
                } else {
                    ProtocolConfig cfg = base;
                    cfg.k = k;
                    cfg.max_global_iters = spec.budget;
                    cfg.seed = seed;
                    Bus bus(nullptr, false);
                    auto tk0 = clock::now();
                    PptsEngine engine(g, cfg, bus);  // keygen happens here
                    r.keygen_ms =
                        std::chrono::duration<double, std::milli>(clock::now() - tk0).count();
                    auto t0 = clock::now();
                    auto out = engine.run();
                    r.wall_ms =
                        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
                    r.status = status_name(out.status);
                    r.iterations = out.iterations;
                    r.metrics = engine.metrics();
                }
                rows.push_back(r);
            }
        }
    }
    return rows;
}
}  // namespace detail

// Runs every (n, density, seed) cell, in parallel across cells; each cell is
// internally deterministic and reproducible from its recorded seed.
inline std::vector<SweepRow> run_sweep(const ExperimentSpec& spec) {
    std::vector<std::future<std::vector<SweepRow>>> futs;
    for (int n : spec.vertex_counts)
        for (double d : spec.densities)
            for (int s = 0; s < spec.seeds_per_cell; ++s)
                futs.push_back(std::async(std::launch::async, detail::run_cell, spec, n, d,
                                          static_cast<std::uint64_t>(s + 1)));
    std::vector<SweepRow> rows;
    for (auto& f : futs) {
        auto cell = f.get();
        rows.insert(rows.end(), cell.begin(), cell.end());
    }
    return rows;
}

}  // namespace ppts

#endif
