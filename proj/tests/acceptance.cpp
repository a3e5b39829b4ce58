// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria ordering follows the project requirements; tolerances are
// pinned in the assertions below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "ppts/attack.hpp"
#include "ppts/bench.hpp"

using namespace ppts;
using clk = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

// shared across criteria: every transcripted engine run in the suite is
// scanned for view minimality and reconciled against the cost model
long long scans_run = 0, scan_violations = 0;
long long cost_checks = 0, cost_mismatches = 0;

void audit_run(const Transcript& t, const PartitionedGraph& g, const RunMetrics& m) {
    ++scans_run;
    if (!scan_view_minimality(t, g).empty()) ++scan_violations;
    ++cost_checks;
    if (!verify_cost_model(m).pass()) ++cost_mismatches;
}

// criterion 1: secure share sums equal the plaintext conflict count on 100
// seeded random instances, within two minutes at 256-bit keys
void criterion1() {
    auto t0 = clk::now();
    int ok = 0;
    const int total = 100;
    std::mt19937_64 rng(1001);
    for (int i = 0; i < total; ++i) {
        int m = std::vector<int>{3, 5, 10}[i % 3];
        int n = m + static_cast<int>(rng() % (51 - m));
        auto g = generate_partitioned_graph(n, 0.2, m, rng());
        int k = 2 + static_cast<int>(rng() % 5);
        std::vector<int> hot(n);
        for (auto& h : hot) h = static_cast<int>(rng() % k);
        Coloring x(k, hot);
        Bus bus(nullptr, false);
        auto shares = secure_conflict_computation(g, x, bus, 256, kDefaultMaskRange, rng());
        if (shares.sum() == total_conflicts(g, x).total) ++ok;
    }
    double secs = seconds_since(t0);
    char detail[128];
    std::snprintf(detail, sizeof detail, "%d/%d exact share sums in %.1fs", ok, total, secs);
    report(1, "conflict-computation oracle equivalence", ok == total && secs < 120.0, detail);
}

// criterion 2: homomorphic identities, probabilistic encryption, signed decode
void criterion2() {
    Entropy rng(2002);
    auto kp = paillier_keygen(256, rng);
    bool pass = true;
    for (int i = 0; i < 200 && pass; ++i) {
        mpz_class a = rng.below(kp.pk.n), b = rng.below(kp.pk.n), s = rng.below(1 << 16);
        auto ea = paillier_encrypt(kp.pk, a, rng);
        auto eb = paillier_encrypt(kp.pk, b, rng);
        pass &= paillier_decrypt(kp.pk, kp.sk, paillier_add(kp.pk, ea, eb)) ==
                (a + b) % kp.pk.n;
        pass &= paillier_decrypt(kp.pk, kp.sk, paillier_scalar_mul(kp.pk, ea, s)) ==
                (a * s) % kp.pk.n;
    }
    for (int i = 0; i < 100 && pass; ++i) {
        mpz_class m = rng.below(kp.pk.n);
        pass &= !(paillier_encrypt(kp.pk, m, rng) == paillier_encrypt(kp.pk, m, rng));
    }
    for (long v = -1000; v < 0 && pass; v += 37) {
        auto ct = paillier_encrypt(kp.pk, to_ring(kp.pk, mpz_class(v)), rng);
        pass &= paillier_decrypt_signed(kp.pk, kp.sk, ct) == v;
    }
    report(2, "paillier property suite", pass,
           "200 homomorphic pairs, 100 non-collisions, signed round-trips");
}

// criterion 3: the seven-vertex worked example, secure pipeline end to end
void criterion3() {
    auto g = example7_graph();
    Transcript t1;
    Bus bus1(&t1, false);
    ConflictEngine eng(g, bus1, 256, kDefaultMaskRange, 303);
    eng.set_coloring(example7_conflicted_coloring());
    bool mu3 = ConflictShares{eng.shares()}.sum() == 3;

    ProtocolConfig cfg;
    cfg.k = 3;
    cfg.seed = 303;
    Transcript t2;
    Bus bus2(&t2, false);
    PptsEngine solver(g, cfg, bus2);
    auto out = solver.run();
    bool colored = out.status == SolveStatus::Colorable && out.coloring &&
                   is_proper_k_coloring(g, *out.coloring, 3);
    audit_run(t2, g, solver.metrics());
    report(3, "worked example", mu3 && colored,
           std::string("secure mu = 3: ") + (mu3 ? "yes" : "no") +
               ", 3-coloring found and verified: " + (colored ? "yes" : "no"));
}

// criterion 4: closed-form guessing probabilities and monte-carlo agreement
void criterion4() {
    bool exact = std::abs(guessing_probs(5, 3).p_new - 0.7) < 1e-15 &&
                 std::abs(guessing_probs(5, 3).p_old - 0.1) < 1e-15;
    bool bounds = true;
    for (int n = 1; n <= 6; ++n) {
        bounds &= guessing_probs(n, n).p_new == 1.0 && guessing_probs(n, n).p_old == 0.0;
        bounds &= guessing_probs(n, -n).p_new == 0.0 && guessing_probs(n, -n).p_old == 1.0;
    }
    bool mc = true;
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n)
        for (int d = -n; d <= n; ++d) {
            auto closed = guessing_probs(n, d);
            auto [pn, po] = monte_carlo_guessing(n, d, 100000, 4004 + 100 * n + d);
            worst = std::max({worst, std::abs(pn - closed.p_new), std::abs(po - closed.p_old)});
            mc &= std::abs(pn - closed.p_new) <= 0.01 && std::abs(po - closed.p_old) <= 0.01;
        }
    char detail[128];
    std::snprintf(detail, sizeof detail,
                  "(5,3) exact, boundaries exact, max MC deviation %.4f (tol 0.01)", worst);
    report(4, "guessing-probability closed form", exact && bounds && mc, detail);
}

// boundary instance: border vertex 0 with two external edges, one internal
// neighbor already wearing the target color
PartitionedGraph boundary_graph() {
    return PartitionedGraph(4, 2, {0, 0, 1, 1}, {{0, 1}, {0, 2}, {0, 3}, {2, 3}});
}

// criterion 5: certainty with the defense off, none with it on
void criterion5() {
    // defense OFF, strict acceptance: accepted move with delta_a = n_ext - 1
    // pins every external neighbor to the old color
    auto g = boundary_graph();
    ProtocolConfig cfg;
    cfg.k = 3;
    cfg.seed = 505;
    cfg.defense = false;
    cfg.accept_threshold = 0;
    cfg.initial_coloring = Coloring(3, {0, 1, 0, 0});
    Transcript t;
    Bus bus(&t, false);
    PptsEngine eng(g, cfg, bus);
    eng.init();
    bool accepted = eng.synchronous_move(0, 0, 1);
    auto truth = eng.ground_truth();
    auto rep = empirical_adversary(t.view(0), &truth);
    bool off_certain = accepted && rep.certain_correct_count() == 2;

    // defense ON: across 200 seeded full runs no certainty-1 correct guess
    // survives for any observer
    int certain_on = 0;
    long long guesses_on = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto gr = generate_partitioned_graph(10 + static_cast<int>(seed % 5), 0.35,
                                             2 + static_cast<int>(seed % 2), seed);
        ProtocolConfig rcfg;
        rcfg.k = 3;
        rcfg.seed = seed;
        rcfg.defense = true;
        rcfg.max_global_iters = 3000;
        Transcript rt;
        Bus rbus(&rt, false);
        PptsEngine reng(gr, rcfg, rbus);
        reng.run();
        audit_run(rt, gr, reng.metrics());
        auto gt = reng.ground_truth();
        for (PartyId p = 0; p < gr.m_parties(); ++p) {
            auto r = empirical_adversary(rt.view(p), &gt);
            guesses_on += static_cast<long long>(r.guesses.size());
            certain_on += r.certain_correct_count();
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "defense off: %d certain correct (want 2); defense on: %d certain correct "
                  "over %lld guesses in 200 runs (want 0)",
                  rep.certain_correct_count(), certain_on, guesses_on);
    report(5, "worst-case inference and defense", off_certain && certain_on == 0, detail);
}

// criterion 8: quality at n=100, 10% density, 10 parties
void criterion8() {
    auto t0 = clk::now();
    int k10_ok = 0, agree = 0;
    std::string per_graph;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = generate_partitioned_graph(100, 0.1, 10, seed);
        auto tres = chromatic_search(g, SolverKind::Tabucol, greedy_k_bound(g), 50000, seed);

        ProtocolConfig base;
        auto pres = chromatic_search(g, SolverKind::Ppts, 10, 20000, seed, base);
        bool k10 = pres.colorable.count(10) && pres.colorable.at(10);
        k10_ok += k10;
        bool within = pres.min_k > 0 && tres.min_k > 0 && std::abs(pres.min_k - tres.min_k) <= 1;
        agree += within;
        per_graph += " g" + std::to_string(seed) + ":" + std::to_string(pres.min_k) + "/" +
                     std::to_string(tres.min_k);
    }
    double secs = seconds_since(t0);
    char detail[256];
    std::snprintf(detail, sizeof detail,
                  "10-colorings %d/10 (need 8), min_k within 1 on %d/10 (need 8), %.0fs "
                  "(limit 1800);%s",
                  k10_ok, agree, secs, per_graph.c_str());
    report(8, "solution quality at desk scale", k10_ok >= 8 && agree >= 8 && secs < 1800.0,
           detail);
}

// criterion 9: byte-identical transcripts for identical seeds
void criterion9() {
    auto g = generate_partitioned_graph(30, 0.15, 3, 909);
    auto run_once = [&](std::string& outstr, RunMetrics& m) {
        ProtocolConfig cfg;
        cfg.k = 4;
        cfg.seed = 909;
        Transcript t;
        Bus bus(&t, false);
        PptsEngine eng(g, cfg, bus);
        eng.run();
        m = eng.metrics();
        std::stringstream s;
        t.export_jsonl(s);
        outstr = s.str();
        audit_run(t, g, m);
    };
    std::string a, b;
    RunMetrics ma, mb;
    run_once(a, ma);
    run_once(b, mb);
    char detail[128];
    std::snprintf(detail, sizeof detail, "two %zu-byte transcripts, identical: %s", a.size(),
                  a == b ? "yes" : "no");
    report(9, "determinism", !a.empty() && a == b, detail);
}

// criteria 6 and 7 aggregate over every audited run; the no-move case pins
// the 2 * n_external lower bound of the message accounting
void criteria67() {
    auto g = example7_graph();
    ProtocolConfig cfg;
    cfg.k = 3;
    cfg.seed = 606;
    cfg.initial_coloring = Coloring(3, {0, 1, 2, 0, 1, 0, 1});  // already proper
    Transcript t;
    Bus bus(&t, false);
    PptsEngine eng(g, cfg, bus);
    eng.run();
    auto m = eng.metrics();
    audit_run(t, g, m);
    bool base_case = m.sync_moves == 0 && m.scalar_messages == 2 * g.external_edges().size();

    char d6[96], d7[128];
    std::snprintf(d6, sizeof d6, "%lld views scanned, %lld violations", scans_run,
                  scan_violations);
    report(6, "view minimality", scans_run > 200 && scan_violations == 0, d6);
    std::snprintf(d7, sizeof d7,
                  "%lld runs reconciled, %lld mismatches; no-move run costs 2 x %zu messages: %s",
                  cost_checks, cost_mismatches, g.external_edges().size(),
                  base_case ? "yes" : "no");
    report(7, "cost model", cost_checks > 200 && cost_mismatches == 0 && base_case, d7);
}

}  // namespace

int main() {
    auto t0 = clk::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion8();
    criterion9();
    criteria67();
    std::printf("%s: %d criterion(s) failed, total %.0fs\n", failures ? "FAIL" : "ALL PASS",
                failures, seconds_since(t0));
    return failures ? 1 : 0;
}
