#ifndef PPTS_ATTACK_HPP
#define PPTS_ATTACK_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ppts/transport.hpp"

namespace ppts {

struct GuessProbabilities {
    double p_new = 0.0;  // Prob[x_j = x_i']
    double p_old = 0.0;  // Prob[x_j = x_i]
};

// Closed-form guessing probabilities for a border-vertex move over n external
// edges with observed aggregate conflict change delta.
inline GuessProbabilities guessing_probs(int n, int delta) {
    if (n < 1 || delta < -n || delta > n) throw ParameterError("need n >= 1, |delta| <= n");
    GuessProbabilities g;
    if (delta >= 0) {
        g.p_new = static_cast<double>(delta + (n + delta) / 2) / (2.0 * n);
        g.p_old = static_cast<double>((n - delta) / 2) / (2.0 * n);
    } else {
        g.p_old = static_cast<double>(-delta + (n - delta) / 2) / (2.0 * n);
        g.p_new = static_cast<double>((n + delta) / 2) / (2.0 * n);
    }
    return g;
}

enum class CertainInference { AllEqualOld, AllEqualNew };

// Worst-case detectors under secure comparison: the output bit plus the
// mover's own internal-conflict change pins delta to an extreme.
inline std::optional<CertainInference> boundary_inference(int delta_a, int n,
                                                         bool comparison_bit) {
    if (n < 1) throw ParameterError("need n >= 1");
    if (delta_a == n - 1 && comparison_bit) return CertainInference::AllEqualOld;
    if (delta_a == -n && !comparison_bit) return CertainInference::AllEqualNew;
    return std::nullopt;
}

// Monte-Carlo estimate of the guessing probabilities under the uniform-pairs
// counting model: (d1, d0) uniform over the admissible pairs with
// d1 - d0 = delta, then one of the n edges uniformly.
inline std::pair<double, double> monte_carlo_guessing(int n, int delta, long long trials,
                                                    std::uint64_t seed) {
    if (n < 1 || delta < -n || delta > n || trials < 1)
        throw ParameterError("bad monte carlo parameters");
    bool flip = delta < 0;
    int d = flip ? -delta : delta;
    std::mt19937_64 rng(seed);
    int pairs = (n - d) / 2 + 1;
    long long hits_new = 0, hits_old = 0;
    for (long long t = 0; t < trials; ++t) {
        int idx = static_cast<int>(rng() % pairs);
        int d1 = d + idx, d0 = idx;
        int edge = static_cast<int>(rng() % n);
        if (edge < d1)
            ++hits_new;
        else if (edge < d1 + d0)
            ++hits_old;
    }
    double p_new = static_cast<double>(hits_new) / trials;
    double p_old = static_cast<double>(hits_old) / trials;
    if (flip) std::swap(p_new, p_old);
    return {p_new, p_old};
}

struct VertexGuess {
    std::uint64_t round_id = 0;
    VertexId vertex = 0;
    int guessed_color = 0;
    double confidence = 0.0;
    std::optional<bool> correct;
};

struct AttackReport {
    std::vector<VertexGuess> guesses;

    int certain_count() const {
        int c = 0;
        for (const auto& g : guesses)
            if (g.confidence == 1.0) ++c;
        return c;
    }
    int certain_correct_count() const {
        int c = 0;
        for (const auto& g : guesses)
            if (g.confidence == 1.0 && g.correct && *g.correct) ++c;
        return c;
    }

    json to_json() const {
        json arr = json::array();
        for (const auto& g : guesses) {
            json e{{"round_id", g.round_id},
                   {"vertex", g.vertex},
                   {"guess", g.guessed_color},
                   {"confidence", g.confidence}};
            e["correct"] = g.correct ? json(*g.correct) : json();
            arr.push_back(e);
        }
        return json{{"guesses", arr},
                    {"certain", certain_count()},
                    {"certain_correct", certain_correct_count()}};
    }
    void write_csv(std::ostream& out) const {
        out << "round_id,vertex,guess,confidence,correct\n";
        for (const auto& g : guesses) {
            out << g.round_id << ',' << g.vertex << ',' << g.guessed_color << ','
                << g.confidence << ',';
            out << (g.correct ? (*g.correct ? "1" : "0") : "") << '\n';
        }
    }
};

// Ground truth held by the test harness only: colors of the foreign
// neighbors at the time of each synchronous move.
using GroundTruthColors = std::map<std::uint64_t, std::map<VertexId, int>>;

// Semi-honest adversary replaying its own view. For each of its border
// moves it knows delta_a, the edge count n and (when it was a recipient) the
// comparison bit. With the synchronous-move defense active the companion
// deltas are unbounded, so the feasible range of delta never collapses and no
// certain inference exists; without the defense the delta boundaries give
// certainty-1 guesses.
inline AttackReport empirical_adversary(const std::vector<json>& adversary_view,
                                        const GroundTruthColors* ground_truth = nullptr) {
    AttackReport rep;
    for (const auto& ev : adversary_view) {
        if (ev.value("kind", "") != "border_move") continue;
        int n = ev.at("n_ext").get<int>();
        if (n < 1) continue;
        int delta_a = ev.at("delta_a").get<int>();
        bool bit = ev.at("bit").get<bool>();
        bool defense = ev.at("defense").get<bool>();
        int old_color = ev.at("from").get<int>();
        int new_color = ev.at("to").get<int>();
        std::uint64_t rid = ev.at("round_id").get<std::uint64_t>();

        // feasible aggregate delta range given the view; the bit tells the
        // mover whether delta_a + delta_ext < threshold
        int t = ev.value("threshold", 0);
        int lo = -n, hi = n;
        if (!defense) {
            if (bit)
                hi = std::min(hi, t - delta_a - 1);
            else
                lo = std::max(lo, t - delta_a);
        }
        if (lo > hi) continue;  // view inconsistent with a plain border move

        double p_new = 0.0, p_old = 0.0;
        for (int d = lo; d <= hi; ++d) {
            auto g = guessing_probs(n, d);
            p_new += g.p_new;
            p_old += g.p_old;
        }
        p_new /= hi - lo + 1;
        p_old /= hi - lo + 1;

        int guess = p_new >= p_old ? new_color : old_color;
        double conf = std::max(p_new, p_old);
        if (conf <= 0.0) continue;

        for (const auto& v : ev.at("neighbors")) {
            VertexGuess g;
            g.round_id = rid;
            g.vertex = v.get<VertexId>();
            g.guessed_color = guess;
            g.confidence = conf;
            if (ground_truth) {
                auto it = ground_truth->find(rid);
                if (it != ground_truth->end()) {
                    auto cit = it->second.find(g.vertex);
                    if (cit != it->second.end()) g.correct = cit->second == guess;
                }
            }
            rep.guesses.push_back(g);
        }
    }
    return rep;
}

inline AttackReport empirical_adversary(const Transcript& transcript, PartyId adversary,
                                        const GroundTruthColors* ground_truth = nullptr) {
    return empirical_adversary(transcript.view(adversary), ground_truth);
}

// --- view-minimality scanner -------------------------------------------------
//
// Checks that every party's view contains only: its own vertices and colors,
// scalar-product values it is entitled to, comparison bits addressed to it,
// and scheduling metadata. Any foreign color or foreign internal edge in a
// view is a violation. Returns human-readable violations; empty means clean.

inline std::vector<std::string> scan_view_minimality(const Transcript& transcript,
                                                     const PartitionedGraph& g) {
    std::vector<std::string> bad;
    auto complain = [&](const json& ev, const std::string& why) {
        bad.push_back(why + ": " + ev.dump());
    };
    for (const auto& ev : transcript.events()) {
        PartyId p = ev.at("party").get<PartyId>();
        std::string kind = ev.value("kind", "");
        if (kind == "send" || kind == "recv") {
            PartyId from = ev.at("from").get<PartyId>();
            PartyId to = ev.at("to").get<PartyId>();
            if (p != from && p != to) complain(ev, "message event observed by third party");
        } else if (kind == "inner_move" || kind == "forced_move" || kind == "border_move") {
            VertexId v = ev.at("vertex").get<VertexId>();
            if (p >= 0 && g.owner(v) != p) complain(ev, "move on foreign vertex");
            if (kind == "border_move") {
                for (const auto& uj : ev.at("neighbors")) {
                    VertexId u = uj.get<VertexId>();
                    Edge e = make_edge(v, u);
                    bool adjacent = false;
                    for (VertexId w : g.neighbors(v)) adjacent |= w == u;
                    if (!adjacent || !g.is_external(e))
                        complain(ev, "neighbor not a shared external endpoint");
                }
            }
        } else if (kind == "companion") {
            if (!ev.at("skipped").get<bool>()) {
                VertexId v = ev.at("vertex").get<VertexId>();
                if (p >= 0 && g.owner(v) != p) complain(ev, "companion move on foreign vertex");
            }
        } else if (kind == "cmp_bit" || kind == "local_uncolorable") {
            // bit delivery / scheduling metadata; nothing foreign to check
        } else {
            complain(ev, "unknown event kind");
        }
        // a view must never carry a color for a vertex the observer does not own
        if (ev.contains("from") && ev.contains("vertex") && kind != "send" && kind != "recv") {
            VertexId v = ev.at("vertex").is_null() ? -1 : ev.at("vertex").get<VertexId>();
            if (v >= 0 && p >= 0 && g.owner(v) != p) complain(ev, "foreign color in view");
        }
    }
    return bad;
}

// Payload scan over the raw message log: scalar-product traffic must carry
// only ciphertexts (no small plaintext color encodings) and reference only
// edges shared by sender and receiver.
inline std::vector<std::string> scan_message_payloads(const std::vector<Message>& messages,
                                                      const PartitionedGraph& g) {
    std::vector<std::string> bad;
    const mpz_class floor_ct = mpz_class(1) << 64;
    for (const auto& m : messages) {
        if (m.type != MsgType::ScalarReq && m.type != MsgType::ScalarResp) continue;
        ByteReader rd(m.payload);
        VertexId u = static_cast<VertexId>(rd.u32());
        VertexId v = static_cast<VertexId>(rd.u32());
        Edge e = make_edge(u, v);
        if (!g.is_external(e)) bad.push_back("scalar message on internal edge");
        std::set<PartyId> owners{g.owner(u), g.owner(v)};
        if (!owners.contains(m.from) || !owners.contains(m.to))
            bad.push_back("scalar message between non-endpoint owners");
        if (m.type == MsgType::ScalarReq) {
            std::uint32_t k = rd.u32();
            rd.bigint();  // public key modulus
            for (std::uint32_t c = 0; c < k; ++c)
                if (rd.bigint() < floor_ct) bad.push_back("plaintext-sized value in SCALAR_REQ");
        } else {
            if (rd.bigint() < floor_ct) bad.push_back("plaintext-sized value in SCALAR_RESP");
        }
    }
    return bad;
}

}  // namespace ppts

#endif
