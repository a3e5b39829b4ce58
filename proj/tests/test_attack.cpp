#include <doctest.h>

#include <sstream>

#include "ppts/attack.hpp"
#include "ppts/protocol.hpp"

using namespace ppts;

namespace {

// exhaustive counting oracle: enumerate all admissible (d1, d0) pairs with
// d1 - d0 = delta, each pair weighted equally, each of the n edges uniform
std::pair<double, double> enumerate_probs(int n, int delta) {
    bool flip = delta < 0;
    int d = flip ? -delta : delta;
    long long pairs = 0, sum_d1 = 0, sum_d0 = 0;
    for (int d0 = 0; d + 2 * d0 <= n; ++d0) {
        ++pairs;
        sum_d1 += d + d0;
        sum_d0 += d0;
    }
    double p_new = static_cast<double>(sum_d1) / (pairs * n);
    double p_old = static_cast<double>(sum_d0) / (pairs * n);
    if (flip) std::swap(p_new, p_old);
    return {p_new, p_old};
}

json border_event(PartyId party, int n_ext, int delta_a, bool bit, bool defense,
                  int threshold, std::vector<VertexId> neighbors, std::uint64_t rid) {
    return json{{"kind", "border_move"}, {"party", party},        {"round_id", rid},
                {"vertex", 0},           {"from", 1},             {"to", 2},
                {"delta_a", delta_a},    {"n_ext", n_ext},        {"neighbors", neighbors},
                {"bit", bit},            {"accepted", bit},       {"threshold", threshold},
                {"defense", defense}};
}

}  // namespace

TEST_CASE("closed-form guessing probabilities match the reference values") {
    auto g = guessing_probs(5, 3);
    CHECK(g.p_new == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(g.p_old == doctest::Approx(0.1).epsilon(1e-12));

    // boundaries: delta = +n pins every edge to the new color, -n to the old
    for (int n = 1; n <= 6; ++n) {
        auto hi = guessing_probs(n, n);
        CHECK(hi.p_new == doctest::Approx(1.0));
        CHECK(hi.p_old == doctest::Approx(0.0));
        auto lo = guessing_probs(n, -n);
        CHECK(lo.p_new == doctest::Approx(0.0));
        CHECK(lo.p_old == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(guessing_probs(5, 6), ParameterError);
    CHECK_THROWS_AS(guessing_probs(5, -6), ParameterError);
    CHECK_THROWS_AS(guessing_probs(0, 0), ParameterError);
}

TEST_CASE("closed form equals the exhaustive pair enumeration") {
    for (int n = 1; n <= 6; ++n)
        for (int delta = -n; delta <= n; ++delta) {
            auto closed = guessing_probs(n, delta);
            auto [p_new, p_old] = enumerate_probs(n, delta);
            CHECK(closed.p_new == doctest::Approx(p_new).epsilon(1e-12));
            CHECK(closed.p_old == doctest::Approx(p_old).epsilon(1e-12));
        }
}

TEST_CASE("negative delta mirrors positive delta") {
    for (int n = 1; n <= 6; ++n)
        for (int delta = 0; delta <= n; ++delta) {
            auto pos = guessing_probs(n, delta);
            auto neg = guessing_probs(n, -delta);
            CHECK(pos.p_new == doctest::Approx(neg.p_old));
            CHECK(pos.p_old == doctest::Approx(neg.p_new));
        }
}

TEST_CASE("monte carlo estimates agree with the closed form") {
    for (int n = 1; n <= 4; ++n)
        for (int delta = -n; delta <= n; ++delta) {
            auto closed = guessing_probs(n, delta);
            auto [p_new, p_old] = monte_carlo_guessing(n, delta, 20000, 123 + n * 10 + delta);
            CHECK(p_new == doctest::Approx(closed.p_new).epsilon(0.03));
            CHECK(p_old == doctest::Approx(closed.p_old).epsilon(0.03));
        }
    CHECK_THROWS_AS(monte_carlo_guessing(3, 4, 100, 1), ParameterError);
    CHECK_THROWS_AS(monte_carlo_guessing(3, 1, 0, 1), ParameterError);
}

TEST_CASE("worst-case detectors fire only at the extremes") {
    CHECK(boundary_inference(4, 5, true) == CertainInference::AllEqualOld);
    CHECK(boundary_inference(-5, 5, false) == CertainInference::AllEqualNew);
    CHECK_FALSE(boundary_inference(4, 5, false));
    CHECK_FALSE(boundary_inference(-5, 5, true));
    CHECK_FALSE(boundary_inference(3, 5, true));
    CHECK_FALSE(boundary_inference(-4, 5, false));
    CHECK_THROWS_AS(boundary_inference(0, 0, true), ParameterError);
}

TEST_CASE("adversary reaches certainty on boundary views without the defense") {
    int n = 3;
    // accepted strict move with delta_a = n-1 forces every external edge to
    // have carried the old color
    std::vector<json> view{border_event(0, n, n - 1, true, false, 0, {10, 11, 12}, 1)};
    GroundTruthColors truth{{1, {{10, 1}, {11, 1}, {12, 1}}}};
    auto rep = empirical_adversary(view, &truth);
    REQUIRE(rep.guesses.size() == 3);
    CHECK(rep.certain_count() == 3);
    CHECK(rep.certain_correct_count() == 3);
    for (const auto& g : rep.guesses) {
        CHECK(g.confidence == 1.0);
        CHECK(g.guessed_color == 1);  // the old color
        CHECK(g.correct == true);
    }

    // rejected move with delta_a = -n forces every neighbor onto the new color
    std::vector<json> view2{border_event(0, n, -n, false, false, 0, {10}, 2)};
    GroundTruthColors truth2{{2, {{10, 2}}}};
    auto rep2 = empirical_adversary(view2, &truth2);
    REQUIRE(rep2.guesses.size() == 1);
    CHECK(rep2.guesses[0].confidence == 1.0);
    CHECK(rep2.guesses[0].guessed_color == 2);  // the new color
    CHECK(rep2.certain_correct_count() == 1);
}

TEST_CASE("the synchronous-move defense removes certainty from the same view") {
    int n = 3;
    std::vector<json> view{border_event(0, n, n - 1, true, true, 0, {10, 11, 12}, 1),
                           border_event(0, n, -n, false, true, 0, {10}, 2)};
    auto rep = empirical_adversary(view);
    REQUIRE(rep.guesses.size() == 4);
    CHECK(rep.certain_count() == 0);
    for (const auto& g : rep.guesses) {
        CHECK(g.confidence < 1.0);
        CHECK_FALSE(g.correct.has_value());  // no ground truth supplied
    }
}

TEST_CASE("non-boundary observations stay uncertain even without the defense") {
    std::vector<json> view{border_event(0, 5, 1, true, false, 0, {20}, 1),
                           border_event(0, 5, 0, false, false, 0, {21}, 2),
                           border_event(0, 4, 2, true, false, 1, {22}, 3)};
    auto rep = empirical_adversary(view);
    CHECK(rep.guesses.size() == 3);
    CHECK(rep.certain_count() == 0);
}

TEST_CASE("attack report serializes to json and csv") {
    std::vector<json> view{border_event(0, 2, 1, true, false, 0, {30, 31}, 9)};
    GroundTruthColors truth{{9, {{30, 1}}}};
    auto rep = empirical_adversary(view, &truth);
    auto j = rep.to_json();
    CHECK(j.at("guesses").size() == rep.guesses.size());
    CHECK(j.at("certain") == rep.certain_count());

    std::stringstream csv;
    rep.write_csv(csv);
    CHECK(csv.str().find("round_id,vertex,guess,confidence,correct") == 0);
}

TEST_CASE("scanners pass a genuine protocol run and flag planted violations") {
    auto g = generate_partitioned_graph(12, 0.3, 3, 23);
    ProtocolConfig cfg;
    cfg.k = 3;
    cfg.seed = 23;
    cfg.max_global_iters = 5000;
    Transcript t;
    Bus bus(&t, true);
    PptsEngine eng(g, cfg, bus);
    auto out = eng.run();
    CHECK(out.status == SolveStatus::Colorable);
    CHECK(scan_view_minimality(t, g).empty());
    CHECK(scan_message_payloads(bus.messages(), g).empty());

    // planted: a move event observed by a party that does not own the vertex
    Transcript bad;
    VertexId foreign = g.vertices_of(1).front();
    bad.log(0, {{"kind", "inner_move"}, {"vertex", foreign}, {"from", 0}, {"to", 1},
                {"delta", -1}, {"accepted", true}});
    CHECK_FALSE(scan_view_minimality(bad, g).empty());

    // planted: scalar traffic carrying a small plaintext-sized value
    Edge ext = g.external_edges().front();
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(ext.first));
    w.u32(static_cast<std::uint32_t>(ext.second));
    w.bigint(mpz_class(2));  // a bare color index, not a ciphertext
    std::vector<Message> planted{{0, 0, g.owner(ext.first), g.owner(ext.second),
                                  MsgType::ScalarResp, w.take()}};
    CHECK_FALSE(scan_message_payloads(planted, g).empty());
}
