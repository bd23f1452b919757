#include "digame/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace digame {

Digraph maker_digraph(const GameState& state) {
    Digraph g(state.n());
    for (Vertex v = 0; v < state.n(); ++v) g.out[static_cast<std::size_t>(v)] = state.maker_out_adj(v);
    return g;
}

Condensation condense(const Digraph& g) {
    const std::int32_t n = g.n;
    Condensation c;
    c.comp.assign(static_cast<std::size_t>(n), -1);

    std::vector<std::int32_t> index(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> low(static_cast<std::size_t>(n), 0);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<Vertex> stack;
    stack.reserve(static_cast<std::size_t>(n));

    struct Frame {
        Vertex v;
        std::size_t child;
    };
    std::vector<Frame> frames;
    std::int32_t next_index = 0;

    for (Vertex root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        frames.push_back({root, 0});
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next_index++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;

        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto vi = static_cast<std::size_t>(f.v);
            if (f.child < g.out[vi].size()) {
                const Vertex w = g.out[vi][f.child++];
                const auto wi = static_cast<std::size_t>(w);
                if (index[wi] == -1) {
                    index[wi] = low[wi] = next_index++;
                    stack.push_back(w);
                    on_stack[wi] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[wi]) {
                    low[vi] = std::min(low[vi], index[wi]);
                }
            } else {
                if (low[vi] == index[vi]) {
                    std::vector<Vertex> comp_members;
                    while (true) {
                        const Vertex w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        c.comp[static_cast<std::size_t>(w)] = c.count;
                        comp_members.push_back(w);
                        if (w == f.v) break;
                    }
                    std::sort(comp_members.begin(), comp_members.end());
                    c.members.push_back(std::move(comp_members));
                    ++c.count;
                }
                const Vertex v = f.v;
                frames.pop_back();
                if (!frames.empty()) {
                    const auto pi = static_cast<std::size_t>(frames.back().v);
                    low[pi] = std::min(low[pi], low[static_cast<std::size_t>(v)]);
                }
            }
        }
    }

    for (Vertex v = 0; v < n; ++v) {
        const std::int32_t cv = c.comp[static_cast<std::size_t>(v)];
        for (const Vertex w : g.out[static_cast<std::size_t>(v)]) {
            const std::int32_t cw = c.comp[static_cast<std::size_t>(w)];
            if (cv != cw) c.dag_edges.emplace_back(cv, cw);
        }
    }
    std::sort(c.dag_edges.begin(), c.dag_edges.end());
    c.dag_edges.erase(std::unique(c.dag_edges.begin(), c.dag_edges.end()), c.dag_edges.end());

    std::vector<char> has_in(static_cast<std::size_t>(c.count), 0);
    std::vector<char> has_out(static_cast<std::size_t>(c.count), 0);
    for (const auto& [a, b] : c.dag_edges) {
        has_out[static_cast<std::size_t>(a)] = 1;
        has_in[static_cast<std::size_t>(b)] = 1;
    }
    for (std::int32_t i = 0; i < c.count; ++i) {
        if (!has_in[static_cast<std::size_t>(i)]) c.sources.push_back(i);
        if (!has_out[static_cast<std::size_t>(i)]) c.sinks.push_back(i);
    }
    return c;
}

std::int32_t expansion_size_bound(std::int32_t n, double alpha) {
    const double bound = (1.0 - alpha) * (1.0 - alpha) * static_cast<double>(n);
    return static_cast<std::int32_t>(std::floor(bound + 1e-9));
}

bool verify_expansion_violation(const Digraph& g, const std::vector<Vertex>& set,
                                bool* missing_out, bool* missing_in) {
    std::vector<char> in_set(static_cast<std::size_t>(g.n), 0);
    for (const Vertex v : set) in_set[static_cast<std::size_t>(v)] = 1;
    bool has_out = false, has_in = false;
    for (Vertex v = 0; v < g.n; ++v) {
        const bool v_in = in_set[static_cast<std::size_t>(v)];
        for (const Vertex w : g.out[static_cast<std::size_t>(v)]) {
            const bool w_in = in_set[static_cast<std::size_t>(w)];
            if (v_in && !w_in) has_out = true;
            if (!v_in && w_in) has_in = true;
        }
        if (has_out && has_in) break;
    }
    if (missing_out) *missing_out = !has_out;
    if (missing_in) *missing_in = !has_in;
    return !(has_out && has_in);
}

namespace {

// Mask-based violation test for n <= 22: S violates iff it has no out-edge
// leaving or no in-edge entering.
bool mask_violates(std::uint32_t set, const std::vector<std::uint32_t>& out_mask,
                   const std::vector<std::uint32_t>& in_mask) {
    std::uint32_t leaving = 0, entering = 0;
    std::uint32_t rest = set;
    while (rest) {
        const int v = __builtin_ctz(rest);
        rest &= rest - 1;
        leaving |= out_mask[static_cast<std::size_t>(v)];
        entering |= in_mask[static_cast<std::size_t>(v)];
    }
    return (leaving & ~set) == 0 || (entering & ~set) == 0;
}

std::vector<Vertex> mask_to_set(std::uint32_t set) {
    std::vector<Vertex> s;
    while (set) {
        s.push_back(static_cast<Vertex>(__builtin_ctz(set)));
        set &= set - 1;
    }
    return s;
}

}  // namespace

ExpansionReport expansion_check(const Digraph& g, double alpha, std::int32_t K,
                                ExpansionMode mode, std::int64_t samples, Rng* rng) {
    ExpansionReport rep;
    rep.n = g.n;
    rep.alpha = alpha;
    rep.max_size = expansion_size_bound(g.n, alpha);
    rep.mode = mode;
    rep.hypothesis_ok =
        static_cast<double>(K) >= (2.0 - 2.0 * std::log(1.0 - alpha)) / alpha;

    if (rep.max_size < 1) return rep;

    if (mode == ExpansionMode::Exhaustive) {
        if (g.n > 22)
            fail(Errc::SizeTooLargeForExhaustive,
                 "exhaustive expansion check supports n <= 22, got n = " + std::to_string(g.n));
        std::vector<std::uint32_t> out_mask(static_cast<std::size_t>(g.n), 0);
        std::vector<std::uint32_t> in_mask(static_cast<std::size_t>(g.n), 0);
        for (Vertex v = 0; v < g.n; ++v) {
            for (const Vertex w : g.out[static_cast<std::size_t>(v)]) {
                out_mask[static_cast<std::size_t>(v)] |= 1u << w;
                in_mask[static_cast<std::size_t>(w)] |= 1u << v;
            }
        }
        // Gosper's hack per subset size
        for (std::int32_t s = 1; s <= rep.max_size; ++s) {
            std::uint32_t set = (1u << s) - 1;
            const std::uint32_t limit = 1u << g.n;
            while (set < limit) {
                if (mask_violates(set, out_mask, in_mask)) {
                    rep.violation_found = true;
                    rep.violating_set = mask_to_set(set);
                    verify_expansion_violation(g, rep.violating_set, &rep.missing_out,
                                               &rep.missing_in);
                    return rep;
                }
                const std::uint32_t c = set & (0 - set);
                const std::uint32_t r = set + c;
                set = (((r ^ set) >> 2) / c) | r;
            }
        }
        return rep;
    }

    if (rng == nullptr || samples <= 0)
        fail(Errc::InvalidConfig, "sampled expansion check needs an rng and a sample count");
    rep.samples = samples;
    // uniform subsets drawn per size stratum
    const std::int64_t per_size =
        std::max<std::int64_t>(1, samples / std::max(1, rep.max_size));
    for (std::int32_t s = 1; s <= rep.max_size; ++s) {
        for (std::int64_t t = 0; t < per_size; ++t) {
            std::vector<Vertex> set = rng->k_subset(g.n, s);
            bool missing_out = false, missing_in = false;
            if (verify_expansion_violation(g, set, &missing_out, &missing_in)) {
                std::sort(set.begin(), set.end());
                rep.violation_found = true;
                rep.violating_set = std::move(set);
                rep.missing_out = missing_out;
                rep.missing_in = missing_in;
                return rep;
            }
        }
    }
    return rep;
}

BoundaryComponentCheck check_boundary_components(const Digraph& g, const Condensation& c,
                                                 double alpha) {
    BoundaryComponentCheck out;
    const std::int32_t bound = expansion_size_bound(g.n, alpha);
    auto probe = [&](std::int32_t comp_id, bool is_source) {
        if (c.size_of(comp_id) > bound) return;
        (is_source ? out.small_sources : out.small_sinks)++;
        bool missing_out = false, missing_in = false;
        verify_expansion_violation(g, c.members[static_cast<std::size_t>(comp_id)],
                                   &missing_out, &missing_in);
        // a small source must have no entering edge; a small sink no leaving
        if (is_source ? !missing_in : !missing_out) ++out.implication_failures;
    };
    if (c.strongly_connected()) return out;
    for (const std::int32_t s : c.sources) probe(s, true);
    for (const std::int32_t s : c.sinks) probe(s, false);
    return out;
}

PatchOutcome maker_connectivity_endgame(GameState& state,
                                        const std::function<void(GameState&)>& breaker_turn,
                                        Rng& rng, std::int64_t max_moves) {
    PatchOutcome out;
    while (static_cast<std::int64_t>(out.moves.size()) < max_moves) {
        const Digraph d = maker_digraph(state);
        const Condensation c = condense(d);
        if (c.strongly_connected()) {
            out.strongly_connected = true;
            return out;
        }
        if (state.is_exhausted()) {
            out.stuck = true;  // nothing left to claim anywhere
            return out;
        }

        // order sinks and sources by (size desc, smallest member asc)
        auto ordered = [&](const std::vector<std::int32_t>& ids) {
            std::vector<std::int32_t> v = ids;
            std::sort(v.begin(), v.end(), [&](std::int32_t a, std::int32_t b) {
                if (c.size_of(a) != c.size_of(b)) return c.size_of(a) > c.size_of(b);
                return c.members[static_cast<std::size_t>(a)].front() <
                       c.members[static_cast<std::size_t>(b)].front();
            });
            return v;
        };
        const std::vector<std::int32_t> sinks = ordered(c.sinks);
        const std::vector<std::int32_t> sources = ordered(c.sources);

        std::vector<DirectedEdge> options;
        for (const std::int32_t t : sinks) {
            for (const std::int32_t s : sources) {
                if (t == s) continue;
                options.clear();
                for (const Vertex u : c.members[static_cast<std::size_t>(t)]) {
                    for (const Vertex w : c.members[static_cast<std::size_t>(s)]) {
                        if (u != w && state.owner(u, w) == EdgeOwner::Unclaimed)
                            options.push_back({u, w});
                    }
                }
                if (!options.empty()) goto found;
            }
        }
        out.stuck = true;
        return out;

    found:
        const DirectedEdge e = options[rng.below(options.size())];
        state.claim(Player::Maker, e);
        out.moves.push_back(e);
        if (state.is_exhausted()) {
            out.strongly_connected = condense(maker_digraph(state)).strongly_connected();
            return out;
        }
        breaker_turn(state);
    }
    out.strongly_connected = condense(maker_digraph(state)).strongly_connected();
    return out;
}

void dump_digraph(const Digraph& g, std::ostream& os) {
    os << g.n << '\n';
    for (Vertex v = 0; v < g.n; ++v)
        for (const Vertex w : g.out[static_cast<std::size_t>(v)]) os << v << ' ' << w << '\n';
}

Digraph load_digraph(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) fail(Errc::Io, "missing digraph header");
    std::int32_t n = 0;
    std::istringstream hs(header);
    if (!(hs >> n) || n < 0) fail(Errc::Io, "bad digraph header");
    Digraph g(n);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        Vertex i = -1, j = -1;
        if (!(ls >> i >> j)) fail(Errc::Io, "bad edge line: " + line);
        if (i < 0 || i >= n || j < 0 || j >= n) fail(Errc::Io, "edge out of range: " + line);
        g.add_edge(i, j);
    }
    return g;
}

}  // namespace digame
