#include "digame/checks.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "digame/rng.hpp"
#include "digame/strategies.hpp"

namespace digame {
namespace checks {

namespace {

std::string fmt_edge(DirectedEdge e) {
    return "(" + std::to_string(e.from) + "," + std::to_string(e.to) + ")";
}

struct Recount {
    std::vector<std::int32_t> dM_out, dM_in, dB_out, dB_in;
};

Recount recount_degrees(const GameState& s) {
    const Vertex n = s.n();
    Recount r;
    r.dM_out.assign(static_cast<std::size_t>(n), 0);
    r.dM_in.assign(static_cast<std::size_t>(n), 0);
    r.dB_out.assign(static_cast<std::size_t>(n), 0);
    r.dB_in.assign(static_cast<std::size_t>(n), 0);
    for (Vertex i = 0; i < n; ++i) {
        for (Vertex j = 0; j < n; ++j) {
            if (i == j) continue;
            switch (s.owner(i, j)) {
                case EdgeOwner::Maker:
                    ++r.dM_out[static_cast<std::size_t>(i)];
                    ++r.dM_in[static_cast<std::size_t>(j)];
                    break;
                case EdgeOwner::Breaker:
                    ++r.dB_out[static_cast<std::size_t>(i)];
                    ++r.dB_in[static_cast<std::size_t>(j)];
                    break;
                case EdgeOwner::Unclaimed:
                    break;
            }
        }
    }
    return r;
}

// All per-position invariants; returns an empty string or a description of
// the first failure.
std::string verify_position(const GameState& s, const DangerTable& table) {
    const Vertex n = s.n();
    const Recount rc = recount_degrees(s);
    for (Vertex v = 0; v < n; ++v) {
        const auto i = static_cast<std::size_t>(v);
        if (s.dM_out(v) != rc.dM_out[i] || s.dM_in(v) != rc.dM_in[i] ||
            s.dB_out(v) != rc.dB_out[i] || s.dB_in(v) != rc.dB_in[i])
            return "cached degree mismatch at vertex " + std::to_string(v);
    }
    const BipartiteView view = s.bipartite();
    for (Vertex v = 0; v < n; ++v) {
        const auto i = static_cast<std::size_t>(v);
        if (view.deg_maker(bip_a(v)) != rc.dM_out[i] ||
            view.deg_maker(bip_b(v, n)) != rc.dM_in[i] ||
            view.deg_breaker(bip_a(v)) != rc.dB_out[i] ||
            view.deg_breaker(bip_b(v, n)) != rc.dB_in[i])
            return "bipartite degree identity failed at vertex " + std::to_string(v);
    }
    if (!s.is_exhausted()) {
        const std::int64_t m = s.maker_edge_count();
        const std::int64_t turns = s.breaker_edge_count() / s.bias();
        if (!(m - 1 <= turns && turns <= m))
            return "turn accounting violated: |E_M|=" + std::to_string(m) +
                   " |E_B|=" + std::to_string(s.breaker_edge_count());
    }
    const std::vector<std::int64_t> fresh = DangerTable::recompute(s);
    for (std::int32_t bip = 0; bip < 2 * n; ++bip) {
        if (table.value(bip) != fresh[static_cast<std::size_t>(bip)])
            return "incremental danger table diverged at bipartite vertex " +
                   std::to_string(bip);
    }
    return {};
}

}  // namespace

CheckResult engine_fuzz(std::int64_t games, std::int32_t n_min, std::int32_t n_max,
                        std::uint64_t seed) {
    CheckResult res{"engine-fuzz", false, ""};
    std::int64_t positions = 0;
    for (std::int64_t g = 0; g < games; ++g) {
        Rng rng(mix_seed(seed, 0x67616d65, static_cast<std::uint64_t>(g), 0));
        GameConfig cfg;
        cfg.n = n_min + rng.below_i(n_max - n_min + 1);
        cfg.b = 1 + rng.below_i(std::min<std::int64_t>(8, 2 * cfg.n));
        cfg.seed = seed;
        GameState state(cfg, /*record_history=*/false);
        DangerTable table(state);

        DirectedEdge last{-1, -1};
        std::int64_t claims = 0;
        while (!state.is_exhausted()) {
            const Player mover = state.to_move();
            std::vector<std::int64_t> before;
            if (mover == Player::Maker) before = DangerTable::recompute(state);

            const DirectedEdge e = state.random_unclaimed_edge(rng);
            state.claim(mover, e);
            table.on_claim(mover, e);
            last = e;
            ++claims;
            ++positions;

            const std::string err = verify_position(state, table);
            if (!err.empty()) {
                res.detail = "game " + std::to_string(g) + " claim " +
                             std::to_string(claims) + ": " + err;
                return res;
            }
            if (mover == Player::Maker) {
                const std::vector<std::int64_t> after = DangerTable::recompute(state);
                for (std::size_t i = 0; i < after.size(); ++i) {
                    if (after[i] > before[i]) {
                        res.detail = "Maker claim " + fmt_edge(e) +
                                     " increased danger at bipartite vertex " +
                                     std::to_string(i);
                        return res;
                    }
                }
            }

            // error-path probes
            if (claims % 7 == 1) {
                try {
                    state.claim(state.to_move(), last);
                    res.detail = "duplicate claim of " + fmt_edge(last) + " was accepted";
                    return res;
                } catch (const Error& err2) {
                    if (err2.code() != Errc::AlreadyClaimed) {
                        res.detail = std::string("expected AlreadyClaimed, got ") + err2.what();
                        return res;
                    }
                }
                try {
                    state.claim(state.to_move(), DirectedEdge{0, 0});
                    res.detail = "loop edge accepted";
                    return res;
                } catch (const Error& err2) {
                    if (err2.code() != Errc::LoopEdge) {
                        res.detail = std::string("expected LoopEdge, got ") + err2.what();
                        return res;
                    }
                }
                if (!state.is_exhausted()) {
                    const Player wrong = state.to_move() == Player::Maker ? Player::Breaker
                                                                          : Player::Maker;
                    try {
                        state.claim(wrong, state.random_unclaimed_edge(rng));
                        res.detail = "out-of-turn claim accepted";
                        return res;
                    } catch (const Error& err2) {
                        if (err2.code() != Errc::OutOfTurn) {
                            res.detail = std::string("expected OutOfTurn, got ") + err2.what();
                            return res;
                        }
                    }
                }
            }
        }
    }
    res.pass = true;
    res.detail = std::to_string(games) + " games, " + std::to_string(positions) +
                 " positions verified";
    return res;
}

CheckResult scc_oracle(std::int64_t cases, std::uint64_t seed) {
    CheckResult res{"scc-oracle", false, ""};
    static constexpr double probs[] = {0.1, 0.2, 0.35, 0.5, 0.8};
    for (std::int64_t c = 0; c < cases; ++c) {
        Rng rng(mix_seed(seed, 0x736363, static_cast<std::uint64_t>(c), 0));
        const std::int32_t n = 1 + rng.below_i(8);
        const double p = probs[c % 5];
        Digraph g(n);
        std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n),
                                             std::vector<bool>(static_cast<std::size_t>(n)));
        for (Vertex i = 0; i < n; ++i) {
            for (Vertex j = 0; j < n; ++j) {
                if (i != j && rng.unit() < p) {
                    g.add_edge(i, j);
                    reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
                }
            }
        }
        // Floyd-Warshall closure
        for (Vertex k = 0; k < n; ++k)
            for (Vertex i = 0; i < n; ++i)
                for (Vertex j = 0; j < n; ++j)
                    if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
                        reach[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
                        reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;

        const Condensation cond = condense(g);
        auto fail_case = [&](const std::string& msg) {
            res.detail = "case " + std::to_string(c) + " (n=" + std::to_string(n) + "): " + msg;
            return res;
        };

        for (Vertex i = 0; i < n; ++i) {
            for (Vertex j = 0; j < n; ++j) {
                const bool mutual =
                    i == j ||
                    (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
                     reach[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
                const bool same = cond.comp[static_cast<std::size_t>(i)] ==
                                  cond.comp[static_cast<std::size_t>(j)];
                if (mutual != same)
                    return fail_case("component relation disagrees with closure oracle at (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
        // the component DAG must be acyclic (Kahn)
        std::vector<std::int32_t> indeg(static_cast<std::size_t>(cond.count), 0);
        for (const auto& [a, b] : cond.dag_edges) {
            (void)a;
            ++indeg[static_cast<std::size_t>(b)];
        }
        std::vector<std::int32_t> queue;
        for (std::int32_t i = 0; i < cond.count; ++i)
            if (indeg[static_cast<std::size_t>(i)] == 0) queue.push_back(i);
        std::size_t removed = 0;
        while (!queue.empty()) {
            const std::int32_t v = queue.back();
            queue.pop_back();
            ++removed;
            for (const auto& [a, b] : cond.dag_edges) {
                if (a != v) continue;
                if (--indeg[static_cast<std::size_t>(b)] == 0) queue.push_back(b);
            }
        }
        if (removed != static_cast<std::size_t>(cond.count))
            return fail_case("condensation DAG has a cycle");

        // sources/sinks per definition
        for (std::int32_t i = 0; i < cond.count; ++i) {
            bool has_in = false, has_out = false;
            for (const auto& [a, b] : cond.dag_edges) {
                if (b == i) has_in = true;
                if (a == i) has_out = true;
            }
            const bool is_source =
                std::find(cond.sources.begin(), cond.sources.end(), i) != cond.sources.end();
            const bool is_sink =
                std::find(cond.sinks.begin(), cond.sinks.end(), i) != cond.sinks.end();
            if (is_source == has_in || is_sink == has_out)
                return fail_case("source/sink classification wrong for component " +
                                 std::to_string(i));
        }
        if (!cond.strongly_connected() && (cond.sources.empty() || cond.sinks.empty()))
            return fail_case("non-strongly-connected digraph lacks a source or sink");

        const BoundaryComponentCheck bc = check_boundary_components(g, cond, 0.3);
        if (bc.implication_failures != 0)
            return fail_case("small boundary component failed to re-verify as violation");
    }
    res.pass = true;
    res.detail = std::to_string(cases) + " digraphs matched the closure oracle";
    return res;
}

namespace {

// Oracle-side violation test, deliberately built on a bool matrix instead of
// adjacency lists or bit masks.
bool oracle_violates(const std::vector<std::vector<bool>>& adj,
                     const std::vector<Vertex>& set, std::int32_t n) {
    std::vector<bool> in_set(static_cast<std::size_t>(n), false);
    for (const Vertex v : set) in_set[static_cast<std::size_t>(v)] = true;
    bool leaving = false, entering = false;
    for (Vertex i = 0; i < n; ++i) {
        for (Vertex j = 0; j < n; ++j) {
            if (!adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
            if (in_set[static_cast<std::size_t>(i)] && !in_set[static_cast<std::size_t>(j)])
                leaving = true;
            if (!in_set[static_cast<std::size_t>(i)] && in_set[static_cast<std::size_t>(j)])
                entering = true;
        }
    }
    return !leaving || !entering;
}

// Enumerates subsets of {0..n-1} of size s in lexicographic order.
bool next_combination(std::vector<Vertex>& idx, std::int32_t n) {
    const auto s = static_cast<std::int32_t>(idx.size());
    std::int32_t i = s - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - s + i) --i;
    if (i < 0) return false;
    ++idx[static_cast<std::size_t>(i)];
    for (std::int32_t j = i + 1; j < s; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

}  // namespace

CheckResult expansion_oracle(std::int64_t cases, std::int32_t n, std::int32_t K,
                             double alpha, std::uint64_t seed) {
    CheckResult res{"expansion-oracle", false, ""};
    const std::int32_t bound = expansion_size_bound(n, alpha);
    for (std::int64_t c = 0; c < cases; ++c) {
        Rng rng(mix_seed(seed, 0x657870, static_cast<std::uint64_t>(c), 0));
        std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                           std::vector<bool>(static_cast<std::size_t>(n)));
        // K-out/K-in: K distinct random out-targets and in-sources per vertex
        for (Vertex v = 0; v < n; ++v) {
            for (const std::int32_t t : rng.k_subset(n - 1, K)) {
                const Vertex w = t >= v ? t + 1 : t;
                adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] = true;
            }
            for (const std::int32_t t : rng.k_subset(n - 1, K)) {
                const Vertex w = t >= v ? t + 1 : t;
                adj[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)] = true;
            }
        }
        Digraph g(n);
        for (Vertex i = 0; i < n; ++i)
            for (Vertex j = 0; j < n; ++j)
                if (adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                    g.add_edge(i, j);

        const ExpansionReport impl =
            expansion_check(g, alpha, K, ExpansionMode::Exhaustive);

        bool oracle_found = false;
        std::vector<Vertex> oracle_set;
        for (std::int32_t s = 1; s <= bound && !oracle_found; ++s) {
            std::vector<Vertex> idx(static_cast<std::size_t>(s));
            for (std::int32_t i = 0; i < s; ++i) idx[static_cast<std::size_t>(i)] = i;
            do {
                if (oracle_violates(adj, idx, n)) {
                    oracle_found = true;
                    oracle_set = idx;
                    break;
                }
            } while (next_combination(idx, n));
        }

        auto fail_case = [&](const std::string& msg) {
            res.detail = "case " + std::to_string(c) + ": " + msg;
            return res;
        };
        if (impl.violation_found != oracle_found)
            return fail_case(impl.violation_found
                                 ? "implementation found a violation the oracle did not"
                                 : "oracle found a violation the implementation missed");
        if (impl.violation_found) {
            if (!oracle_violates(adj, impl.violating_set, n))
                return fail_case("implementation reported a non-violating set");
            if (!verify_expansion_violation(g, oracle_set))
                return fail_case("oracle set not confirmed by verify_expansion_violation");
        }
    }
    res.pass = true;
    res.detail = std::to_string(cases) + " digraphs agreed with the enumeration oracle";
    return res;
}

std::vector<Vertex> ubar_star_bruteforce(const HamiltonInstance& inst,
                                         const std::vector<char>& in_u) {
    std::vector<char> mark(static_cast<std::size_t>(inst.n), 0);
    for (Vertex u = 0; u < inst.n; ++u) {
        if (!in_u[static_cast<std::size_t>(u)]) continue;
        for (const Vertex w : inst.in_sets[static_cast<std::size_t>(u)])
            if (!in_u[static_cast<std::size_t>(w)]) mark[static_cast<std::size_t>(w)] = 1;
    }
    std::vector<Vertex> out;
    for (Vertex v = 0; v < inst.n; ++v)
        if (mark[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

CheckResult ubar_oracle(std::int64_t snapshots, std::int32_t n_max, std::uint64_t seed) {
    CheckResult res{"ubar-oracle", false, ""};
    for (std::int64_t c = 0; c < snapshots; ++c) {
        Rng rng(mix_seed(seed, 0x75626172, static_cast<std::uint64_t>(c), 0));
        ModelConfig mc;
        mc.n = 5 + rng.below_i(n_max - 4);
        mc.alpha = 0.25;  // keeps ceil((1-alpha)n) <= n-1 for every n >= 4
        mc.K = std::min<std::int32_t>(2 + rng.below_i(5), mc.candidate_size());
        mc.seed = rng.next();
        HamiltonInstance inst = model_init(mc, rng);
        HamiltonBuilder builder(inst, rng);
        const std::int64_t steps = rng.below_i(3 * mc.n + 1);
        for (std::int64_t s = 0; s < steps && !builder.done(); ++s) {
            if (builder.advance_any().status == StepOutcome::Status::Exhausted) break;
        }
        std::vector<char> in_u(static_cast<std::size_t>(mc.n), 0);
        for (Vertex v = 0; v < mc.n; ++v)
            if (builder.in_u(v)) in_u[static_cast<std::size_t>(v)] = 1;
        const std::vector<Vertex> expected = ubar_star_bruteforce(inst, in_u);
        const std::vector<Vertex> got = builder.ubar_star();
        if (got != expected ||
            builder.ubar_size() != static_cast<std::int64_t>(expected.size())) {
            res.detail = "snapshot " + std::to_string(c) + " (n=" + std::to_string(mc.n) +
                         "): incremental Ubar* diverged from definition";
            return res;
        }
    }
    res.pass = true;
    res.detail = std::to_string(snapshots) + " snapshots matched the definitional recompute";
    return res;
}

}  // namespace checks
}  // namespace digame
