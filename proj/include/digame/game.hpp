#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "digame/error.hpp"
#include "digame/rng.hpp"

namespace digame {

using Vertex = std::int32_t;

// Oriented edge (from, to) of the complete digraph on [n]. Loops are illegal.
struct DirectedEdge {
    Vertex from = -1;
    Vertex to = -1;
    friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

enum class EdgeOwner : std::uint8_t { Unclaimed = 0, Maker, Breaker };
enum class Player : std::uint8_t { Maker, Breaker };

const char* to_string(Player p) noexcept;

// Parameters of one biased game. The board itself only needs n and b;
// alpha/beta/theta/K parameterise the strategies and monitors.
struct GameConfig {
    Vertex n = 0;
    std::int64_t b = 1;          // Breaker bias: edges per Breaker turn
    double alpha = 0.5;
    double beta = 0.1;
    double theta = 2.0;
    std::int32_t K = 0;          // degree target; 0 derives ceil(theta * ln n)
    double epsilon = 0.1;        // threshold margin, harness-only
    std::uint64_t seed = 0;

    std::int32_t degree_target() const {
        if (K > 0) return K;
        return static_cast<std::int32_t>(std::ceil(theta * std::log(static_cast<double>(n))));
    }

    // Hypotheses of the degree guarantee: K >= 2/alpha, theta*beta < alpha,
    // theta < (alpha-beta)/beta. Soft check; exploratory runs may ignore it.
    bool degree_hypotheses_ok() const {
        const double k = degree_target();
        return k >= 2.0 / alpha && theta * beta < alpha && theta < (alpha - beta) / beta;
    }

    void validate() const;
};

// Bipartite vertex ids: a_k -> k, b_k -> n + k. The a-side carries
// out-degrees, the b-side in-degrees.
inline std::int32_t bip_a(Vertex k) noexcept { return k; }
inline std::int32_t bip_b(Vertex k, Vertex n) noexcept { return n + k; }
inline bool bip_is_a(std::int32_t bip, Vertex n) noexcept { return bip < n; }
inline Vertex bip_base(std::int32_t bip, Vertex n) noexcept {
    return bip < n ? bip : bip - n;
}

class GameState;

// Read-only bipartite view of a position: oriented edge (i, j) becomes the
// bipartite edge {a_i, b_j}, so deg(a_k) is the out-degree of k and deg(b_k)
// the in-degree.
struct BipartiteView {
    const GameState* game = nullptr;

    EdgeOwner owner(Vertex i, Vertex j) const;       // edge {a_i, b_j}
    std::int32_t deg_maker(std::int32_t bip) const;
    std::int32_t deg_breaker(std::int32_t bip) const;
    std::int32_t side_count() const;                 // 2n bipartite vertices
};

// Position of one biased Maker-Breaker game on the complete digraph.
//
// Ownership lives in a flat n*n array indexed by from*n + to (diagonal
// unused), so claims and lookups are O(1) for n up to a few thousand. A
// swap-remove pool of unclaimed edge codes supports O(1) uniform sampling.
// Turn structure: Maker claims exactly one edge, then Breaker claims up to b;
// Breaker's turn ends early only when the board runs out.
class GameState {
public:
    explicit GameState(GameConfig cfg, bool record_history = true);

    const GameConfig& config() const noexcept { return cfg_; }
    Vertex n() const noexcept { return cfg_.n; }
    std::int64_t bias() const noexcept { return cfg_.b; }

    EdgeOwner owner(Vertex from, Vertex to) const;
    EdgeOwner owner(DirectedEdge e) const { return owner(e.from, e.to); }

    // Claims an edge for `player`. Throws LoopEdge / OutOfRange /
    // AlreadyClaimed / OutOfTurn; an edge owner is never reassigned.
    void claim(Player player, DirectedEdge e);

    Player to_move() const noexcept { return to_move_; }
    std::int64_t round() const noexcept { return round_; }
    std::int64_t maker_edge_count() const noexcept { return maker_edges_; }
    std::int64_t breaker_edge_count() const noexcept { return breaker_edges_; }
    std::int64_t breaker_claims_this_turn() const noexcept { return breaker_turn_claims_; }

    bool is_exhausted() const noexcept { return pool_.empty(); }
    std::int64_t unclaimed_count() const noexcept {
        return static_cast<std::int64_t>(pool_.size());
    }

    std::int32_t dM_out(Vertex v) const { return dM_out_[check_v(v)]; }
    std::int32_t dM_in(Vertex v) const { return dM_in_[check_v(v)]; }
    std::int32_t dB_out(Vertex v) const { return dB_out_[check_v(v)]; }
    std::int32_t dB_in(Vertex v) const { return dB_in_[check_v(v)]; }

    std::int32_t deg_maker_bip(std::int32_t bip) const;
    std::int32_t deg_breaker_bip(std::int32_t bip) const;
    std::int32_t min_maker_bip_degree() const;
    std::int32_t max_breaker_bip_degree() const;
    // Max Breaker degree over bipartite vertices whose Maker degree is still
    // below `target` (the pool the degree strategy draws from).
    std::int32_t max_breaker_bip_degree_in_pool(std::int32_t target) const;

    std::int32_t unclaimed_out_count(Vertex v) const {
        return cfg_.n - 1 - dM_out(v) - dB_out(v);
    }
    std::int32_t unclaimed_in_count(Vertex v) const {
        return cfg_.n - 1 - dM_in(v) - dB_in(v);
    }
    std::vector<Vertex> unclaimed_out_neighbors(Vertex v) const;
    std::vector<Vertex> unclaimed_in_neighbors(Vertex v) const;

    DirectedEdge random_unclaimed_edge(Rng& rng) const;

    // Maker adjacency in acquisition (claim) order; always maintained.
    const std::vector<Vertex>& maker_out_adj(Vertex v) const { return maker_out_[check_v(v)]; }
    const std::vector<Vertex>& maker_in_adj(Vertex v) const { return maker_in_[check_v(v)]; }

    bool history_recording() const noexcept { return record_history_; }
    const std::vector<std::pair<Player, DirectedEdge>>& history() const noexcept {
        return history_;
    }

    BipartiteView bipartite() const noexcept { return BipartiteView{this}; }

private:
    std::size_t check_v(Vertex v) const {
        if (v < 0 || v >= cfg_.n) fail(Errc::OutOfRange, "vertex out of range");
        return static_cast<std::size_t>(v);
    }
    std::int32_t code(Vertex from, Vertex to) const noexcept {
        return from * cfg_.n + to;
    }

    GameConfig cfg_;
    bool record_history_;
    std::vector<EdgeOwner> owner_;
    std::vector<std::int32_t> dM_out_, dM_in_, dB_out_, dB_in_;
    std::vector<std::vector<Vertex>> maker_out_, maker_in_;
    std::int64_t maker_edges_ = 0;
    std::int64_t breaker_edges_ = 0;
    std::int64_t round_ = 0;
    Player to_move_ = Player::Maker;
    std::int64_t breaker_turn_claims_ = 0;
    std::vector<std::pair<Player, DirectedEdge>> history_;
    std::vector<std::int32_t> pool_;      // unclaimed edge codes
    std::vector<std::int32_t> pool_pos_;  // code -> index in pool_, or -1
};

// One completed (or trailing partial) round: Maker's claim followed by
// Breaker's answers, at most b of them.
struct RoundRecord {
    std::int64_t round = 0;
    DirectedEdge maker;
    std::vector<DirectedEdge> breaker;
};

// Groups the claim history into rounds. Requires history recording.
std::vector<RoundRecord> round_records(const GameState& state);

// Position dump: header "n b seed", then one line per claim, "M i j" or
// "B i j", in claim order. Requires history recording.
void dump_position(const GameState& state, std::ostream& os);
GameState load_position(std::istream& is);

}  // namespace digame
