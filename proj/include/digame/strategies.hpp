#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "digame/game.hpp"
#include "digame/rng.hpp"

namespace digame {

// Danger of a bipartite vertex: dang(v) = d_B(v) - 2*b*d_M(v). Maker's degree
// strategy repeatedly eases the most dangerous vertex that still needs degree.
std::int64_t danger(const GameState& state, std::int32_t bip_vertex);

// Incrementally maintained danger values for all 2n bipartite vertices.
// Kept outside GameState so sweeps that never use the degree strategy pay
// nothing for it; callers forward every claim via on_claim().
class DangerTable {
public:
    explicit DangerTable(const GameState& state);

    void on_claim(Player player, DirectedEdge e);
    std::int64_t value(std::int32_t bip) const { return dang_[static_cast<std::size_t>(bip)]; }
    std::int32_t size() const { return static_cast<std::int32_t>(dang_.size()); }

    static std::vector<std::int64_t> recompute(const GameState& state);

private:
    Vertex n_;
    std::int64_t two_b_;
    std::vector<std::int64_t> dang_;
};

struct MakerDegreeChoice {
    DirectedEdge edge;
    std::int32_t bip_vertex = -1;  // vertex that was eased
    std::int32_t candidates = 0;   // unclaimed edges incident to it
};

// One move of Maker's degree strategy: among bipartite vertices with Maker
// degree below the target, pick one of maximum danger (ties: lowest id) and
// return a uniformly random unclaimed edge incident to it. Throws
// NoUnclaimedIncidentEdge if the chosen vertex has no unclaimed edge left;
// that event means the degree guarantee failed and is never hidden.
MakerDegreeChoice maker_degree_move(const GameState& state, const DangerTable& danger,
                                    Rng& rng);

// Breaker turn generators. Each claims its edges on the state (a Breaker
// turn is inherently sequential: later picks depend on earlier ones) and
// returns the list of claimed edges, at most b, fewer only when the board
// runs out.
std::vector<DirectedEdge> breaker_box_turn(GameState& state, Rng& rng);
std::vector<DirectedEdge> breaker_random_turn(GameState& state, Rng& rng);
std::vector<DirectedEdge> breaker_maxdegree_turn(GameState& state, Rng& rng);

enum class StrategyKind {
    MakerDegree,
    MakerConnectivity,
    BreakerBox,
    BreakerRandom,
    BreakerMaxDegree,
};

StrategyKind parse_strategy(std::string_view name);  // case-insensitive
const char* to_string(StrategyKind k) noexcept;

using BreakerTurnFn = std::function<std::vector<DirectedEdge>(GameState&, Rng&)>;
BreakerTurnFn breaker_turn_fn(StrategyKind kind);

// ---------------------------------------------------------------------------
// Abstract box game. Breaker claims b elements per turn from a family of
// boxes and wins by fully claiming some box; the opponent removes one whole
// surviving box per turn. Breaker moves first.

struct BoxGameState {
    std::vector<std::int32_t> unclaimed;  // per box
    std::vector<std::int32_t> taken;      // Breaker elements per box
    std::vector<char> alive;              // not yet removed
    std::int32_t surviving = 0;

    std::int32_t box_count() const { return static_cast<std::int32_t>(unclaimed.size()); }
};

enum class BoxWinner { Breaker, Opponent };

// Breaker's turn: given the state and the element budget, returns box ids to
// claim one element each from, in order, at most `budget` entries. The
// opponent returns the box to remove.
using BoxAttackPolicy =
    std::function<std::vector<std::int32_t>(const BoxGameState&, std::int64_t budget)>;
using BoxRemovePolicy = std::function<std::int32_t(const BoxGameState&)>;

// Default attack: water-fill the surviving boxes down toward a common level,
// so a removal only ever destroys an average share of the banked work. This
// realizes the classical harmonic-sum guarantee: the last survivor has
// absorbed about b * H_k elements.
BoxAttackPolicy box_attack_balance();
// Literal smallest-box-first allocation, kept as a comparison adversary; it
// hands its deepest box to the removal each turn and needs a noticeably
// larger bias to win.
BoxAttackPolicy box_attack_smallest_spread();
// Default removal: the surviving box holding the most Breaker elements.
BoxRemovePolicy box_remove_most_taken();

struct BoxGameResult {
    BoxWinner winner = BoxWinner::Opponent;
    std::int64_t turns = 0;          // completed Breaker turns
    std::int32_t completed_box = -1; // box Breaker finished, if any
};

BoxGameResult box_game_play(std::int32_t n_boxes, std::int32_t box_size, std::int64_t b,
                            const BoxAttackPolicy& attack = box_attack_balance(),
                            const BoxRemovePolicy& remove = box_remove_most_taken());

}  // namespace digame
