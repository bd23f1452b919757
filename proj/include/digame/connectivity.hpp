#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "digame/game.hpp"
#include "digame/rng.hpp"

namespace digame {

struct Digraph {
    std::int32_t n = 0;
    std::vector<std::vector<Vertex>> out;

    Digraph() = default;
    explicit Digraph(std::int32_t n_) : n(n_), out(static_cast<std::size_t>(n_)) {}

    void add_edge(Vertex from, Vertex to) {
        out[static_cast<std::size_t>(from)].push_back(to);
    }
    std::int64_t edge_count() const {
        std::int64_t m = 0;
        for (const auto& a : out) m += static_cast<std::int64_t>(a.size());
        return m;
    }
};

Digraph maker_digraph(const GameState& state);

// Strongly connected components plus the component DAG. A component is a
// source iff it has no incoming DAG edge, a sink iff no outgoing one; a
// strongly connected digraph has one component that is both.
struct Condensation {
    std::vector<std::int32_t> comp;                 // vertex -> component id
    std::int32_t count = 0;
    std::vector<std::vector<Vertex>> members;       // per component
    std::vector<std::pair<std::int32_t, std::int32_t>> dag_edges;  // deduplicated
    std::vector<std::int32_t> sources, sinks;       // component ids

    std::int32_t size_of(std::int32_t c) const {
        return static_cast<std::int32_t>(members[static_cast<std::size_t>(c)].size());
    }
    bool strongly_connected() const { return count == 1; }
};

// Single-pass stack-based SCC (iterative; n^2 edges at n ~ 5000 make the
// linear bound matter).
Condensation condense(const Digraph& g);

enum class ExpansionMode { Exhaustive, Sampled };

std::int32_t expansion_size_bound(std::int32_t n, double alpha);  // floor((1-a)^2 n)

// Search for S, 1 <= |S| <= (1-alpha)^2 n, with no out-edge leaving S or no
// in-edge entering S. Exhaustive mode is a complete decision (n <= 22);
// sampled mode only falsifies. K is consulted for the hypothesis
// K >= (2 - 2 log(1-alpha))/alpha, reported rather than enforced.
struct ExpansionReport {
    std::int32_t n = 0;
    double alpha = 0;
    std::int32_t max_size = 0;
    ExpansionMode mode = ExpansionMode::Exhaustive;
    std::int64_t samples = 0;
    bool hypothesis_ok = true;
    bool violation_found = false;
    std::vector<Vertex> violating_set;
    bool missing_out = false;  // which side failed for the reported set
    bool missing_in = false;
};

ExpansionReport expansion_check(const Digraph& g, double alpha, std::int32_t K,
                                ExpansionMode mode, std::int64_t samples = 0,
                                Rng* rng = nullptr);

// Re-verifies a reported violating set against the definitions.
bool verify_expansion_violation(const Digraph& g, const std::vector<Vertex>& set,
                                bool* missing_out = nullptr, bool* missing_in = nullptr);

// Finite-n consequence of the expansion lemma: a source (sink) component of
// size <= (1-alpha)^2 n is itself a violating set. `implication_failures`
// counts small boundary components that fail to re-verify as violations, a
// code bug if ever nonzero.
struct BoundaryComponentCheck {
    std::int32_t small_sources = 0;
    std::int32_t small_sinks = 0;
    std::int32_t implication_failures = 0;
};

BoundaryComponentCheck check_boundary_components(const Digraph& g, const Condensation& c,
                                                 double alpha);

// Maker's patching endgame: while D_M is not strongly connected, claim a
// uniformly random unclaimed edge from the largest sink component to the
// largest source component, letting Breaker answer in between. Stops when
// strongly connected, when no sink-source pair has an unclaimed edge left
// (stuck: a Maker loss), or after max_moves claims.
struct PatchOutcome {
    std::vector<DirectedEdge> moves;
    bool strongly_connected = false;
    bool stuck = false;
};

PatchOutcome maker_connectivity_endgame(GameState& state,
                                        const std::function<void(GameState&)>& breaker_turn,
                                        Rng& rng, std::int64_t max_moves);

// Edge-list dump: header "n", then one "i j" line per edge.
void dump_digraph(const Digraph& g, std::ostream& os);
Digraph load_digraph(std::istream& is);

}  // namespace digame
