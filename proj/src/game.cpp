#include "digame/game.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace digame {

const char* to_string(Player p) noexcept {
    return p == Player::Maker ? "Maker" : "Breaker";
}

void GameConfig::validate() const {
    if (n < 2) fail(Errc::InvalidConfig, "n must be at least 2");
    if (b < 1) fail(Errc::InvalidConfig, "bias b must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::InvalidConfig, "alpha must be in (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) fail(Errc::InvalidConfig, "beta must be in (0,1)");
    if (!(theta > 0.0)) fail(Errc::InvalidConfig, "theta must be positive");
    if (K < 0) fail(Errc::InvalidConfig, "K must be non-negative");
}

EdgeOwner BipartiteView::owner(Vertex i, Vertex j) const { return game->owner(i, j); }

std::int32_t BipartiteView::deg_maker(std::int32_t bip) const {
    return game->deg_maker_bip(bip);
}

std::int32_t BipartiteView::deg_breaker(std::int32_t bip) const {
    return game->deg_breaker_bip(bip);
}

std::int32_t BipartiteView::side_count() const { return 2 * game->n(); }

GameState::GameState(GameConfig cfg, bool record_history)
    : cfg_(cfg), record_history_(record_history) {
    cfg_.validate();
    const auto n = static_cast<std::size_t>(cfg_.n);
    owner_.assign(n * n, EdgeOwner::Unclaimed);
    dM_out_.assign(n, 0);
    dM_in_.assign(n, 0);
    dB_out_.assign(n, 0);
    dB_in_.assign(n, 0);
    maker_out_.assign(n, {});
    maker_in_.assign(n, {});
    pool_pos_.assign(n * n, -1);
    pool_.reserve(n * (n - 1));
    for (Vertex i = 0; i < cfg_.n; ++i) {
        for (Vertex j = 0; j < cfg_.n; ++j) {
            if (i == j) continue;
            pool_pos_[static_cast<std::size_t>(code(i, j))] =
                static_cast<std::int32_t>(pool_.size());
            pool_.push_back(code(i, j));
        }
    }
}

EdgeOwner GameState::owner(Vertex from, Vertex to) const {
    check_v(from);
    check_v(to);
    if (from == to) fail(Errc::LoopEdge, "loop edges do not exist");
    return owner_[static_cast<std::size_t>(code(from, to))];
}

void GameState::claim(Player player, DirectedEdge e) {
    check_v(e.from);
    check_v(e.to);
    if (e.from == e.to) fail(Errc::LoopEdge, "cannot claim a loop edge");
    const auto c = static_cast<std::size_t>(code(e.from, e.to));
    if (owner_[c] != EdgeOwner::Unclaimed) fail(Errc::AlreadyClaimed, "edge already owned");
    if (player != to_move_) fail(Errc::OutOfTurn, std::string(to_string(player)) + " tried to move on " + to_string(to_move_) + "'s turn");

    owner_[c] = player == Player::Maker ? EdgeOwner::Maker : EdgeOwner::Breaker;

    // swap-remove from the unclaimed pool
    const std::int32_t pos = pool_pos_[c];
    const std::int32_t last = pool_.back();
    pool_[static_cast<std::size_t>(pos)] = last;
    pool_pos_[static_cast<std::size_t>(last)] = pos;
    pool_.pop_back();
    pool_pos_[c] = -1;

    const auto f = static_cast<std::size_t>(e.from);
    const auto t = static_cast<std::size_t>(e.to);
    if (player == Player::Maker) {
        ++dM_out_[f];
        ++dM_in_[t];
        maker_out_[f].push_back(e.to);
        maker_in_[t].push_back(e.from);
        ++maker_edges_;
    } else {
        ++dB_out_[f];
        ++dB_in_[t];
        ++breaker_edges_;
    }
    if (record_history_) history_.emplace_back(player, e);

    if (player == Player::Maker) {
        if (is_exhausted()) {
            ++round_;  // Breaker gets no turn; close the round
        } else {
            to_move_ = Player::Breaker;
            breaker_turn_claims_ = 0;
        }
    } else {
        ++breaker_turn_claims_;
        if (breaker_turn_claims_ >= cfg_.b || is_exhausted()) {
            to_move_ = Player::Maker;
            breaker_turn_claims_ = 0;
            ++round_;
        }
    }
}

std::int32_t GameState::deg_maker_bip(std::int32_t bip) const {
    return bip_is_a(bip, cfg_.n) ? dM_out(bip) : dM_in(bip - cfg_.n);
}

std::int32_t GameState::deg_breaker_bip(std::int32_t bip) const {
    return bip_is_a(bip, cfg_.n) ? dB_out(bip) : dB_in(bip - cfg_.n);
}

std::int32_t GameState::min_maker_bip_degree() const {
    std::int32_t m = dM_out_[0];
    for (Vertex v = 0; v < cfg_.n; ++v) {
        m = std::min(m, std::min(dM_out_[static_cast<std::size_t>(v)],
                                 dM_in_[static_cast<std::size_t>(v)]));
    }
    return m;
}

std::int32_t GameState::max_breaker_bip_degree() const {
    std::int32_t m = 0;
    for (Vertex v = 0; v < cfg_.n; ++v) {
        m = std::max(m, std::max(dB_out_[static_cast<std::size_t>(v)],
                                 dB_in_[static_cast<std::size_t>(v)]));
    }
    return m;
}

std::int32_t GameState::max_breaker_bip_degree_in_pool(std::int32_t target) const {
    std::int32_t m = 0;
    for (Vertex v = 0; v < cfg_.n; ++v) {
        const auto i = static_cast<std::size_t>(v);
        if (dM_out_[i] < target) m = std::max(m, dB_out_[i]);
        if (dM_in_[i] < target) m = std::max(m, dB_in_[i]);
    }
    return m;
}

std::vector<Vertex> GameState::unclaimed_out_neighbors(Vertex v) const {
    check_v(v);
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(unclaimed_out_count(v)));
    for (Vertex w = 0; w < cfg_.n; ++w) {
        if (w == v) continue;
        if (owner_[static_cast<std::size_t>(code(v, w))] == EdgeOwner::Unclaimed)
            out.push_back(w);
    }
    return out;
}

std::vector<Vertex> GameState::unclaimed_in_neighbors(Vertex v) const {
    check_v(v);
    std::vector<Vertex> in;
    in.reserve(static_cast<std::size_t>(unclaimed_in_count(v)));
    for (Vertex w = 0; w < cfg_.n; ++w) {
        if (w == v) continue;
        if (owner_[static_cast<std::size_t>(code(w, v))] == EdgeOwner::Unclaimed)
            in.push_back(w);
    }
    return in;
}

DirectedEdge GameState::random_unclaimed_edge(Rng& rng) const {
    if (pool_.empty()) fail(Errc::Precondition, "no unclaimed edge remains");
    const std::int32_t c = pool_[rng.below(pool_.size())];
    return DirectedEdge{c / cfg_.n, c % cfg_.n};
}

std::vector<RoundRecord> round_records(const GameState& state) {
    if (!state.history_recording())
        fail(Errc::Precondition, "round records require history recording");
    std::vector<RoundRecord> rounds;
    for (const auto& [player, edge] : state.history()) {
        if (player == Player::Maker) {
            RoundRecord r;
            r.round = static_cast<std::int64_t>(rounds.size());
            r.maker = edge;
            rounds.push_back(std::move(r));
        } else {
            if (rounds.empty()) fail(Errc::Precondition, "history starts with a Breaker claim");
            rounds.back().breaker.push_back(edge);
        }
    }
    return rounds;
}

void dump_position(const GameState& state, std::ostream& os) {
    if (!state.history_recording())
        fail(Errc::Precondition, "position dump requires history recording");
    os << state.n() << ' ' << state.bias() << ' ' << state.config().seed << '\n';
    for (const auto& [player, edge] : state.history()) {
        os << (player == Player::Maker ? 'M' : 'B') << ' ' << edge.from << ' '
           << edge.to << '\n';
    }
}

GameState load_position(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) fail(Errc::Io, "missing position header");
    std::istringstream hs(header);
    GameConfig cfg;
    if (!(hs >> cfg.n >> cfg.b >> cfg.seed)) fail(Errc::Io, "bad position header");
    GameState state(cfg, true);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        char who = 0;
        Vertex i = -1, j = -1;
        if (!(ls >> who >> i >> j)) fail(Errc::Io, "bad claim line: " + line);
        if (who != 'M' && who != 'B') fail(Errc::Io, "bad player tag: " + line);
        state.claim(who == 'M' ? Player::Maker : Player::Breaker, DirectedEdge{i, j});
    }
    return state;
}

}  // namespace digame
