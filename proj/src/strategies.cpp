#include "digame/strategies.hpp"

#include <algorithm>
#include <cctype>

namespace digame {

std::int64_t danger(const GameState& state, std::int32_t bip_vertex) {
    const std::int64_t db = state.deg_breaker_bip(bip_vertex);
    const std::int64_t dm = state.deg_maker_bip(bip_vertex);
    return db - 2 * state.bias() * dm;
}

DangerTable::DangerTable(const GameState& state)
    : n_(state.n()), two_b_(2 * state.bias()), dang_(recompute(state)) {}

void DangerTable::on_claim(Player player, DirectedEdge e) {
    const auto a = static_cast<std::size_t>(bip_a(e.from));
    const auto b = static_cast<std::size_t>(bip_b(e.to, n_));
    if (player == Player::Maker) {
        dang_[a] -= two_b_;
        dang_[b] -= two_b_;
    } else {
        dang_[a] += 1;
        dang_[b] += 1;
    }
}

std::vector<std::int64_t> DangerTable::recompute(const GameState& state) {
    const std::int32_t m = 2 * state.n();
    std::vector<std::int64_t> d(static_cast<std::size_t>(m));
    for (std::int32_t v = 0; v < m; ++v) d[static_cast<std::size_t>(v)] = danger(state, v);
    return d;
}

MakerDegreeChoice maker_degree_move(const GameState& state, const DangerTable& table,
                                    Rng& rng) {
    const Vertex n = state.n();
    const std::int32_t target = state.config().degree_target();
    std::int32_t best = -1;
    std::int64_t best_danger = 0;
    for (std::int32_t bip = 0; bip < 2 * n; ++bip) {
        if (state.deg_maker_bip(bip) >= target) continue;
        const std::int64_t d = table.value(bip);
        if (best == -1 || d > best_danger) {
            best = bip;
            best_danger = d;
        }
    }
    if (best == -1)
        fail(Errc::Precondition, "degree phase already complete; no vertex below target");

    std::vector<Vertex> cands = bip_is_a(best, n)
                                    ? state.unclaimed_out_neighbors(best)
                                    : state.unclaimed_in_neighbors(best - n);
    if (cands.empty())
        fail(Errc::NoUnclaimedIncidentEdge,
             "bipartite vertex " + std::to_string(best) + " has no unclaimed incident edge");

    const Vertex w = cands[rng.below(cands.size())];
    MakerDegreeChoice choice;
    choice.bip_vertex = best;
    choice.candidates = static_cast<std::int32_t>(cands.size());
    choice.edge = bip_is_a(best, n) ? DirectedEdge{best, w} : DirectedEdge{w, best - n};
    return choice;
}

namespace {

// Claims up to `budget` uniformly random unclaimed edges.
void claim_random(GameState& state, Rng& rng, std::int64_t budget,
                  std::vector<DirectedEdge>& claimed) {
    while (budget-- > 0 && !state.is_exhausted()) {
        const DirectedEdge e = state.random_unclaimed_edge(rng);
        state.claim(Player::Breaker, e);
        claimed.push_back(e);
    }
}

}  // namespace

std::vector<DirectedEdge> breaker_box_turn(GameState& state, Rng& rng) {
    const Vertex n = state.n();
    std::vector<DirectedEdge> claimed;
    std::int64_t budget = std::min<std::int64_t>(state.bias(), state.unclaimed_count());
    claimed.reserve(static_cast<std::size_t>(budget));

    while (budget > 0) {
        // smallest alive box: Maker owns no out-edge there and something is
        // left to claim
        Vertex box = -1;
        std::int32_t box_size = 0;
        for (Vertex v = 0; v < n; ++v) {
            if (state.dM_out(v) != 0) continue;
            const std::int32_t u = state.unclaimed_out_count(v);
            if (u <= 0) continue;
            if (box == -1 || u < box_size) {
                box = v;
                box_size = u;
            }
        }
        if (box == -1) {
            claim_random(state, rng, budget, claimed);  // all boxes dead
            return claimed;
        }
        std::vector<Vertex> targets = state.unclaimed_out_neighbors(box);
        const auto take = static_cast<std::size_t>(
            std::min<std::int64_t>(budget, static_cast<std::int64_t>(targets.size())));
        for (std::size_t t = 0; t < take; ++t) {
            const std::size_t j = t + rng.below(targets.size() - t);
            std::swap(targets[t], targets[j]);
            const DirectedEdge e{box, targets[t]};
            state.claim(Player::Breaker, e);
            claimed.push_back(e);
        }
        budget -= static_cast<std::int64_t>(take);
    }
    return claimed;
}

std::vector<DirectedEdge> breaker_random_turn(GameState& state, Rng& rng) {
    std::vector<DirectedEdge> claimed;
    claim_random(state, rng, state.bias(), claimed);
    return claimed;
}

std::vector<DirectedEdge> breaker_maxdegree_turn(GameState& state, Rng& rng) {
    (void)rng;  // deterministic given the position
    const Vertex n = state.n();
    std::vector<DirectedEdge> claimed;
    std::int64_t budget = std::min<std::int64_t>(state.bias(), state.unclaimed_count());
    claimed.reserve(static_cast<std::size_t>(budget));

    while (budget > 0) {
        std::int32_t best = -1;
        std::int32_t best_deg = -1;
        for (std::int32_t bip = 0; bip < 2 * n; ++bip) {
            const Vertex base = bip_base(bip, n);
            const std::int32_t avail = bip_is_a(bip, n) ? state.unclaimed_out_count(base)
                                                        : state.unclaimed_in_count(base);
            if (avail <= 0) continue;
            const std::int32_t deg = state.deg_maker_bip(bip);
            if (deg > best_deg) {
                best_deg = deg;
                best = bip;
            }
        }
        if (best == -1) break;  // board exhausted
        const Vertex base = bip_base(best, n);
        const std::vector<Vertex> targets = bip_is_a(best, n)
                                                ? state.unclaimed_out_neighbors(base)
                                                : state.unclaimed_in_neighbors(base);
        for (Vertex w : targets) {
            if (budget == 0) break;
            const DirectedEdge e = bip_is_a(best, n) ? DirectedEdge{base, w}
                                                     : DirectedEdge{w, base};
            state.claim(Player::Breaker, e);
            claimed.push_back(e);
            --budget;
        }
    }
    return claimed;
}

StrategyKind parse_strategy(std::string_view name) {
    std::string k(name);
    std::transform(k.begin(), k.end(), k.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (k == "makerdegree") return StrategyKind::MakerDegree;
    if (k == "makerconnectivity") return StrategyKind::MakerConnectivity;
    if (k == "breakerbox") return StrategyKind::BreakerBox;
    if (k == "breakerrandom") return StrategyKind::BreakerRandom;
    if (k == "breakermaxdegree") return StrategyKind::BreakerMaxDegree;
    fail(Errc::InvalidConfig, "unknown strategy: " + std::string(name));
}

const char* to_string(StrategyKind k) noexcept {
    switch (k) {
        case StrategyKind::MakerDegree: return "MakerDegree";
        case StrategyKind::MakerConnectivity: return "MakerConnectivity";
        case StrategyKind::BreakerBox: return "BreakerBox";
        case StrategyKind::BreakerRandom: return "BreakerRandom";
        case StrategyKind::BreakerMaxDegree: return "BreakerMaxDegree";
    }
    return "?";
}

BreakerTurnFn breaker_turn_fn(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::BreakerBox: return breaker_box_turn;
        case StrategyKind::BreakerRandom: return breaker_random_turn;
        case StrategyKind::BreakerMaxDegree: return breaker_maxdegree_turn;
        default:
            fail(Errc::InvalidConfig,
                 std::string(to_string(kind)) + " is not a Breaker strategy");
    }
}

// ---------------------------------------------------------------------------
// Abstract box game

BoxAttackPolicy box_attack_balance() {
    return [](const BoxGameState& s, std::int64_t budget) {
        std::vector<std::int32_t> ids;
        std::int64_t total = 0;
        std::int32_t max_u = 0;
        for (std::int32_t i = 0; i < s.box_count(); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            if (!s.alive[idx] || s.unclaimed[idx] <= 0) continue;
            ids.push_back(i);
            total += s.unclaimed[idx];
            max_u = std::max(max_u, s.unclaimed[idx]);
        }
        std::vector<std::int32_t> claims;
        if (ids.empty()) return claims;
        budget = std::min(budget, total);

        // smallest level L with sum(max(0, u_i - L)) <= budget
        auto need = [&](std::int32_t level) {
            std::int64_t n = 0;
            for (const std::int32_t i : ids)
                n += std::max(0, s.unclaimed[static_cast<std::size_t>(i)] - level);
            return n;
        };
        std::int32_t lo = 0, hi = max_u;
        while (lo < hi) {
            const std::int32_t mid = lo + (hi - lo) / 2;
            if (need(mid) <= budget)
                hi = mid;
            else
                lo = mid + 1;
        }
        const std::int32_t level = lo;
        std::int64_t leftover = budget - need(level);

        claims.reserve(static_cast<std::size_t>(budget));
        for (const std::int32_t i : ids) {
            const std::int32_t u = s.unclaimed[static_cast<std::size_t>(i)];
            std::int64_t share = std::max(0, u - level);
            if (leftover > 0 && u >= level && level > 0) {
                ++share;  // one step below the level, lowest ids first
                --leftover;
            }
            for (std::int64_t t = 0; t < share; ++t) claims.push_back(i);
        }
        return claims;
    };
}

BoxAttackPolicy box_attack_smallest_spread() {
    return [](const BoxGameState& s, std::int64_t budget) {
        std::vector<std::int32_t> order;
        for (std::int32_t i = 0; i < s.box_count(); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            if (s.alive[idx] && s.unclaimed[idx] > 0) order.push_back(i);
        }
        std::vector<std::int32_t> claims;
        if (order.empty()) return claims;
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            const auto ai = static_cast<std::size_t>(a), bi = static_cast<std::size_t>(b);
            if (s.unclaimed[ai] != s.unclaimed[bi]) return s.unclaimed[ai] < s.unclaimed[bi];
            return a < b;
        });
        const auto k = static_cast<std::int64_t>(order.size());
        const std::int64_t full = budget / k;
        const std::int64_t extra = budget % k;
        claims.reserve(static_cast<std::size_t>(budget));
        for (std::int64_t r = 0; r < k; ++r) {
            const std::int32_t box = order[static_cast<std::size_t>(r)];
            // surplus beyond the box size is moot: filling it ends the game
            const std::int64_t share =
                std::min<std::int64_t>(full + (r < extra ? 1 : 0),
                                       s.unclaimed[static_cast<std::size_t>(box)]);
            for (std::int64_t t = 0; t < share; ++t) claims.push_back(box);
        }
        return claims;
    };
}

BoxRemovePolicy box_remove_most_taken() {
    return [](const BoxGameState& s) {
        std::int32_t best = -1;
        for (std::int32_t i = 0; i < s.box_count(); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            if (!s.alive[idx]) continue;
            if (best == -1 || s.taken[idx] > s.taken[static_cast<std::size_t>(best)]) best = i;
        }
        return best;
    };
}

BoxGameResult box_game_play(std::int32_t n_boxes, std::int32_t box_size, std::int64_t b,
                            const BoxAttackPolicy& attack, const BoxRemovePolicy& remove) {
    if (n_boxes < 1 || box_size < 1 || b < 1)
        fail(Errc::InvalidConfig, "box game needs n_boxes, box_size, b >= 1");

    BoxGameState s;
    s.unclaimed.assign(static_cast<std::size_t>(n_boxes), box_size);
    s.taken.assign(static_cast<std::size_t>(n_boxes), 0);
    s.alive.assign(static_cast<std::size_t>(n_boxes), 1);
    s.surviving = n_boxes;

    BoxGameResult result;
    while (true) {
        // Breaker claims up to b elements
        const std::vector<std::int32_t> claims = attack(s, b);
        if (static_cast<std::int64_t>(claims.size()) > b)
            fail(Errc::Precondition, "attack policy exceeded its budget");
        for (const std::int32_t box : claims) {
            const auto idx = static_cast<std::size_t>(box);
            if (box < 0 || box >= n_boxes || !s.alive[idx] || s.unclaimed[idx] <= 0)
                fail(Errc::Precondition, "attack policy chose an unplayable box");
            --s.unclaimed[idx];
            ++s.taken[idx];
            if (s.unclaimed[idx] == 0) {
                result.winner = BoxWinner::Breaker;
                result.completed_box = box;
                result.turns = result.turns + 1;
                return result;
            }
        }
        ++result.turns;

        // Opponent removes one whole surviving box
        const std::int32_t box = remove(s);
        if (box < 0 || !s.alive[static_cast<std::size_t>(box)])
            fail(Errc::Precondition, "removal policy chose a dead box");
        s.alive[static_cast<std::size_t>(box)] = 0;
        --s.surviving;
        if (s.surviving == 0) {
            result.winner = BoxWinner::Opponent;
            return result;
        }
    }
}

}  // namespace digame
