#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"

#include "digame/strategies.hpp"

using namespace digame;

namespace {

GameConfig make_config(Vertex n, std::int64_t b, std::int32_t K = 0) {
    GameConfig cfg;
    cfg.n = n;
    cfg.b = b;
    cfg.K = K;
    return cfg;
}

}  // namespace

TEST_CASE("danger formula") {
    // fresh game: every bipartite vertex has danger 0
    GameState fresh(make_config(6, 2));
    for (std::int32_t bip = 0; bip < 12; ++bip) CHECK(danger(fresh, bip) == 0);

    // d_B(v) = 10, d_M(v) = 2, b = 3 at the in-side vertex b_5 of n = 13
    GameState g(make_config(13, 3));
    g.claim(Player::Maker, {0, 5});
    g.claim(Player::Breaker, {1, 5});
    g.claim(Player::Breaker, {2, 5});
    g.claim(Player::Breaker, {3, 5});
    g.claim(Player::Maker, {4, 5});
    g.claim(Player::Breaker, {6, 5});
    g.claim(Player::Breaker, {7, 5});
    g.claim(Player::Breaker, {8, 5});
    g.claim(Player::Maker, {0, 1});
    g.claim(Player::Breaker, {9, 5});
    g.claim(Player::Breaker, {10, 5});
    g.claim(Player::Breaker, {11, 5});
    g.claim(Player::Maker, {0, 2});
    g.claim(Player::Breaker, {12, 5});
    g.claim(Player::Breaker, {1, 0});
    g.claim(Player::Breaker, {2, 0});
    const std::int32_t b5 = bip_b(5, 13);
    CHECK(g.deg_breaker_bip(b5) == 10);
    CHECK(g.deg_maker_bip(b5) == 2);
    CHECK(danger(g, b5) == 10 - 2 * 3 * 2);
    CHECK(danger(g, b5) == -2);
}

TEST_CASE("incremental danger table equals recomputation") {
    GameState g(make_config(8, 3));
    DangerTable table(g);
    Rng rng(11);
    while (!g.is_exhausted() && g.round() < 6) {
        const Player p = g.to_move();
        const DirectedEdge e = g.random_unclaimed_edge(rng);
        g.claim(p, e);
        table.on_claim(p, e);
        const auto fresh = DangerTable::recompute(g);
        for (std::int32_t bip = 0; bip < 16; ++bip)
            CHECK(table.value(bip) == fresh[static_cast<std::size_t>(bip)]);
    }
}

TEST_CASE("maker degree move picks max danger") {
    SUBCASE("fresh game ties break to a_0") {
        GameState g(make_config(7, 2, 3));
        DangerTable table(g);
        Rng rng(5);
        const MakerDegreeChoice mv = maker_degree_move(g, table, rng);
        CHECK(mv.bip_vertex == 0);
        CHECK(mv.edge.from == 0);
        CHECK(mv.candidates == 6);
    }

    SUBCASE("breaker pressure at a_3 wins the argmax") {
        GameState g(make_config(8, 2, 5));
        g.claim(Player::Maker, {0, 1});
        g.claim(Player::Breaker, {3, 1});
        g.claim(Player::Breaker, {3, 2});
        g.claim(Player::Maker, {0, 2});
        g.claim(Player::Breaker, {3, 4});
        g.claim(Player::Breaker, {3, 5});
        g.claim(Player::Maker, {0, 4});
        g.claim(Player::Breaker, {3, 6});
        g.claim(Player::Breaker, {3, 7});
        CHECK(g.deg_breaker_bip(bip_a(3)) == 6);

        DangerTable table(g);
        Rng rng(5);
        const MakerDegreeChoice mv = maker_degree_move(g, table, rng);
        CHECK(mv.bip_vertex == bip_a(3));
        CHECK(mv.edge.from == 3);
        CHECK(g.owner(mv.edge) == EdgeOwner::Unclaimed);
    }

    SUBCASE("random mid-game position matches brute-force argmax") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            GameState g(make_config(6, 2, 4));
            Rng rng(seed);
            while (!g.is_exhausted() && g.maker_edge_count() < 5)
                g.claim(g.to_move(), g.random_unclaimed_edge(rng));
            if (g.to_move() != Player::Maker || g.is_exhausted()) continue;

            DangerTable table(g);
            const MakerDegreeChoice mv = maker_degree_move(g, table, rng);

            std::int64_t best = -1;
            std::int32_t best_bip = -1;
            for (std::int32_t bip = 0; bip < 12; ++bip) {
                if (g.deg_maker_bip(bip) >= 4) continue;
                const std::int64_t d = danger(g, bip);
                if (best_bip == -1 || d > best) {
                    best = d;
                    best_bip = bip;
                }
            }
            CHECK(mv.bip_vertex == best_bip);
            CHECK(danger(g, mv.bip_vertex) == best);
        }
    }

    SUBCASE("exhausted star is surfaced as an error") {
        GameState g(make_config(2, 1, 2));
        g.claim(Player::Maker, {0, 1});
        g.claim(Player::Breaker, {1, 0});
        DangerTable table(g);
        Rng rng(1);
        try {
            maker_degree_move(g, table, rng);
            FAIL("expected NoUnclaimedIncidentEdge");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NoUnclaimedIncidentEdge);
        }
    }
}

TEST_CASE("breaker box turn") {
    SUBCASE("claims the whole smallest alive box") {
        GameState g(make_config(3, 2));
        g.claim(Player::Maker, {0, 1});
        Rng rng(9);
        const auto edges = breaker_box_turn(g, rng);
        REQUIRE(edges.size() == 2);
        const std::set<std::pair<Vertex, Vertex>> got{{edges[0].from, edges[0].to},
                                                      {edges[1].from, edges[1].to}};
        const std::set<std::pair<Vertex, Vertex>> expect{{1, 0}, {1, 2}};
        CHECK(got == expect);
        CHECK(g.unclaimed_out_count(1) == 0);  // out-degree 0 forever
    }

    SUBCASE("smallest box first, then the next smallest") {
        // alive boxes 1, 2, 3 with unclaimed sizes 4, 7, 9; b = 5
        GameState g(make_config(10, 5));
        g.claim(Player::Maker, {0, 9});
        for (const Vertex w : {0, 2, 3, 4, 5}) g.claim(Player::Breaker, {1, w});
        g.claim(Player::Maker, {4, 9});
        g.claim(Player::Breaker, {2, 0});
        g.claim(Player::Breaker, {2, 1});
        for (const Vertex w : {1, 2, 3}) g.claim(Player::Breaker, {0, w});
        g.claim(Player::Maker, {5, 9});
        for (const Vertex w : {4, 5, 6, 7, 8}) g.claim(Player::Breaker, {0, w});
        g.claim(Player::Maker, {6, 9});
        for (const Vertex w : {0, 1, 2, 3, 5}) g.claim(Player::Breaker, {4, w});
        g.claim(Player::Maker, {7, 9});
        for (const Vertex w : {6, 7, 8}) g.claim(Player::Breaker, {4, w});
        g.claim(Player::Breaker, {5, 0});
        g.claim(Player::Breaker, {5, 1});
        g.claim(Player::Maker, {8, 9});
        for (const Vertex w : {2, 3, 4, 6, 7}) g.claim(Player::Breaker, {5, w});
        g.claim(Player::Maker, {9, 0});
        g.claim(Player::Breaker, {5, 8});
        for (const Vertex w : {0, 1, 2, 3}) g.claim(Player::Breaker, {6, w});
        g.claim(Player::Maker, {9, 1});

        REQUIRE(g.to_move() == Player::Breaker);
        REQUIRE(g.dM_out(1) == 0);
        REQUIRE(g.dM_out(2) == 0);
        REQUIRE(g.dM_out(3) == 0);
        REQUIRE(g.unclaimed_out_count(1) == 4);
        REQUIRE(g.unclaimed_out_count(2) == 7);
        REQUIRE(g.unclaimed_out_count(3) == 9);

        Rng rng(4);
        const auto edges = breaker_box_turn(g, rng);
        REQUIRE(edges.size() == 5);
        std::int64_t from1 = 0, from2 = 0;
        for (const auto& e : edges) {
            if (e.from == 1) ++from1;
            if (e.from == 2) ++from2;
        }
        CHECK(from1 == 4);
        CHECK(from2 == 1);
    }

    SUBCASE("all boxes dead falls back to random claims") {
        GameState g(make_config(3, 1));
        g.claim(Player::Maker, {0, 1});
        g.claim(Player::Breaker, {0, 2});
        g.claim(Player::Maker, {1, 2});
        g.claim(Player::Breaker, {1, 0});
        g.claim(Player::Maker, {2, 0});
        REQUIRE(g.to_move() == Player::Breaker);
        Rng rng(2);
        const auto edges = breaker_box_turn(g, rng);
        REQUIRE(edges.size() == 1);
        CHECK(g.owner(edges[0]) == EdgeOwner::Breaker);
    }
}

TEST_CASE("box breaker only claims from alive boxes while one exists") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        GameState g(make_config(12, 3));
        Rng rng(seed);
        while (!g.is_exhausted()) {
            g.claim(Player::Maker, g.random_unclaimed_edge(rng));
            if (g.is_exhausted()) break;

            std::vector<char> alive(12, 0);
            std::int64_t alive_unclaimed = 0;
            for (Vertex v = 0; v < 12; ++v) {
                if (g.dM_out(v) == 0 && g.unclaimed_out_count(v) > 0) {
                    alive[static_cast<std::size_t>(v)] = 1;
                    alive_unclaimed += g.unclaimed_out_count(v);
                }
            }
            const auto edges = breaker_box_turn(g, rng);
            // claims come from alive boxes until those run out of edges
            const auto from_alive = static_cast<std::size_t>(
                std::min<std::int64_t>(alive_unclaimed,
                                       static_cast<std::int64_t>(edges.size())));
            for (std::size_t i = 0; i < from_alive; ++i) {
                INFO("seed ", seed, " edge (", edges[i].from, ",", edges[i].to, ")");
                CHECK(alive[static_cast<std::size_t>(edges[i].from)]);
            }
        }
    }
}

TEST_CASE("breaker baselines") {
    SUBCASE("random claims distinct unclaimed edges") {
        GameState g(make_config(3, 2));
        g.claim(Player::Maker, {0, 1});
        Rng rng(123);
        const auto edges = breaker_random_turn(g, rng);
        REQUIRE(edges.size() == 2);
        CHECK_FALSE(edges[0] == edges[1]);
        for (const auto& e : edges) CHECK(g.owner(e) == EdgeOwner::Breaker);
    }

    SUBCASE("short final turn returns what is left") {
        GameState g(make_config(2, 5));
        g.claim(Player::Maker, {0, 1});
        Rng rng(8);
        const auto edges = breaker_random_turn(g, rng);
        REQUIRE(edges.size() == 1);
        CHECK(edges[0] == DirectedEdge{1, 0});
        CHECK(g.is_exhausted());
    }

    SUBCASE("maxdegree attacks the top Maker vertex") {
        GameState g(make_config(9, 3));
        g.claim(Player::Maker, {4, 1});
        g.claim(Player::Breaker, {0, 1});
        g.claim(Player::Breaker, {0, 2});
        g.claim(Player::Breaker, {0, 3});
        g.claim(Player::Maker, {4, 2});
        REQUIRE(g.deg_maker_bip(bip_a(4)) == 2);
        Rng rng(6);
        const auto edges = breaker_maxdegree_turn(g, rng);
        REQUIRE(edges.size() == 3);
        for (const auto& e : edges) CHECK(e.from == 4);
    }
}

TEST_CASE("strategy names") {
    CHECK(parse_strategy("MakerDegree") == StrategyKind::MakerDegree);
    CHECK(parse_strategy("breakerbox") == StrategyKind::BreakerBox);
    CHECK(parse_strategy("BREAKERRANDOM") == StrategyKind::BreakerRandom);
    CHECK(parse_strategy("BreakerMaxDegree") == StrategyKind::BreakerMaxDegree);
    CHECK(parse_strategy("makerconnectivity") == StrategyKind::MakerConnectivity);
    CHECK_THROWS_AS(parse_strategy("nope"), Error);
    CHECK_THROWS_AS(breaker_turn_fn(StrategyKind::MakerDegree), Error);
}

TEST_CASE("abstract box game") {
    SUBCASE("one box of size one: Breaker wins immediately") {
        const BoxGameResult r = box_game_play(1, 1, 1);
        CHECK(r.winner == BoxWinner::Breaker);
        CHECK(r.completed_box == 0);
    }

    SUBCASE("two boxes of size three, b = 1: opponent survives") {
        const BoxGameResult r = box_game_play(2, 3, 1);
        CHECK(r.winner == BoxWinner::Opponent);
    }

    SUBCASE("two boxes of size three: opponent survives every Breaker line") {
        // exhaustive game tree over all Breaker element placements, with the
        // opponent playing the fixed most-taken removal policy
        struct Node {
            std::array<std::int32_t, 2> unclaimed;
            std::array<std::int32_t, 2> taken;
            std::array<bool, 2> alive;
        };
        auto opponent_survives = [](auto&& self, Node s) -> bool {
            // Breaker move: one element into any live box; Breaker needs
            // SOME choice that eventually completes a box
            for (int box = 0; box < 2; ++box) {
                if (!s.alive[box] || s.unclaimed[box] == 0) continue;
                Node t = s;
                --t.unclaimed[box];
                ++t.taken[box];
                if (t.unclaimed[box] == 0) return false;  // Breaker completed a box
                // opponent removes the alive box with most taken, tie lowest id
                int rm = -1;
                for (int i = 0; i < 2; ++i) {
                    if (!t.alive[i]) continue;
                    if (rm == -1 || t.taken[i] > t.taken[rm]) rm = i;
                }
                Node u = t;
                u.alive[rm] = false;
                const bool any_left = u.alive[0] || u.alive[1];
                if (any_left && !self(self, u)) return false;
            }
            return true;
        };
        const Node root{{3, 3}, {0, 0}, {true, true}};
        CHECK(opponent_survives(opponent_survives, root));
    }

    SUBCASE("n = box size = 200 at 1.5x the n/ln n ratio: Breaker wins") {
        const auto b = static_cast<std::int64_t>(
            std::ceil(1.5 * 200.0 / std::log(200.0)));
        CHECK(b == 57);
        const BoxGameResult r = box_game_play(200, 200, b);
        CHECK(r.winner == BoxWinner::Breaker);
    }

    SUBCASE("rejects degenerate parameters") {
        CHECK_THROWS_AS(box_game_play(0, 3, 1), Error);
        CHECK_THROWS_AS(box_game_play(2, 0, 1), Error);
        CHECK_THROWS_AS(box_game_play(2, 3, 0), Error);
    }
}
