#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"

#include "digame/checks.hpp"
#include "digame/harness.hpp"

using namespace digame;

namespace {

using VList = std::vector<Vertex>;

HamiltonInstance fixture_a() {
    // n = 12, 2*alpha*n = 4
    std::vector<VList> out(12);
    out[0] = {5, 9};
    out[5] = {0, 7};
    out[7] = {2};
    out[2] = {9, 4};
    out[9] = {4};
    out[4] = {11};
    out[11] = {3};
    out[3] = {6};
    out[6] = {8, 5};
    std::vector<VList> in(12);
    in[1] = {9, 4};
    in[8] = {2};
    in[10] = {11};
    return scripted_instance(12, 1.0 / 6.0, std::move(out), std::move(in));
}

HamiltonInstance fixture_b() {
    // n = 16, 2*alpha*n = 4; reaches the endgame through three Case 2c
    // absorptions and exercises the strict-distance flag
    std::vector<VList> out(16);
    for (Vertex i = 0; i <= 11; ++i) out[static_cast<std::size_t>(i)] = {i + 1};
    out[5] = {6, 0};
    out[6] = {7, 13};
    out[12] = {8, 5, 6};
    out[13] = {8, 5};
    out[14] = {7};
    out[15] = {8};
    std::vector<VList> in(16);
    in[13] = {7};
    in[14] = {4};
    in[15] = {7};
    return scripted_instance(16, 0.125, std::move(out), std::move(in));
}

}  // namespace

TEST_CASE("model config and init") {
    SUBCASE("candidate sizes and in-set sizes") {
        ModelConfig mc;
        mc.n = 10;
        mc.alpha = 0.2;
        mc.K = 3;
        CHECK(mc.candidate_size() == 8);
        Rng rng(1);
        const HamiltonInstance inst = model_init(mc, rng);
        for (Vertex v = 0; v < 10; ++v) {
            CHECK(inst.out[static_cast<std::size_t>(v)].pool_size() == 8);
            CHECK(inst.in_sets[static_cast<std::size_t>(v)].size() == 3);
            for (const Vertex w : inst.in_sets[static_cast<std::size_t>(v)]) CHECK(w != v);
        }
    }

    SUBCASE("rejects K above the candidate size") {
        ModelConfig mc;
        mc.n = 10;
        mc.alpha = 0.2;
        mc.K = 9;
        Rng rng(1);
        CHECK_THROWS_AS(model_init(mc, rng), Error);
    }

    SUBCASE("same seed gives identical instances and reveals") {
        ModelConfig mc;
        mc.n = 14;
        mc.alpha = 0.2;
        mc.K = 4;
        Rng r1(99), r2(99);
        HamiltonInstance a = model_init(mc, r1);
        HamiltonInstance b = model_init(mc, r2);
        CHECK(a.in_sets == b.in_sets);
        for (Vertex v = 0; v < 14; ++v) {
            const auto ya = a.out[static_cast<std::size_t>(v)].current(r1);
            const auto yb = b.out[static_cast<std::size_t>(v)].current(r2);
            REQUIRE(ya.has_value());
            CHECK(*ya == *yb);
        }
    }

    SUBCASE("first reveal is uniform over the candidate set") {
        // block-exclusion adversary keeps B(0) fixed across seeds
        ModelConfig mc;
        mc.n = 10;
        mc.alpha = 0.2;
        mc.K = 3;
        mc.adversary = AdversaryMode::BlockExclusion;
        std::map<Vertex, std::int64_t> counts;
        const std::int64_t trials = 10000;
        for (std::int64_t s = 0; s < trials; ++s) {
            Rng rng(mix_seed(0xf1257, static_cast<std::uint64_t>(s), 0, 0));
            HamiltonInstance inst = model_init(mc, rng);
            const auto y = inst.out[0].current(rng);
            REQUIRE(y.has_value());
            ++counts[*y];
        }
        CHECK(counts.size() == 8);
        const double p = 1.0 / 8.0;
        const double sigma = std::sqrt(static_cast<double>(trials) * p * (1 - p));
        for (const auto& [w, c] : counts) {
            CHECK(w >= 1);
            CHECK(w <= 8);
            CHECK(std::abs(static_cast<double>(c) - trials * p) <= 3.0 * sigma);
        }
    }

    SUBCASE("adversary candidate shapes") {
        ModelConfig mc;
        mc.n = 8;
        mc.alpha = 0.25;  // candidate size 6
        mc.K = 2;
        mc.adversary = AdversaryMode::Targeted;
        Rng rng(5);
        const HamiltonInstance inst = model_init(mc, rng);
        // targeted mode draws from the lowest vertices only
        for (Vertex v = 0; v < 8; ++v)
            for (const Vertex w : inst.in_sets[static_cast<std::size_t>(v)])
                CHECK(w <= 6);
    }
}

TEST_CASE("main phase case dispatch (hand-traced fixture)") {
    HamiltonInstance inst = fixture_a();
    Rng rng(0);
    HamiltonBuilder b(inst, rng);
    CHECK(b.path() == VList{0});
    CHECK(b.u_size() == 11);

    auto expect = [&](StepCase kase, Vertex from, Vertex revealed) {
        const StepOutcome o = b.step();
        REQUIRE(o.status == StepOutcome::Status::Ok);
        CHECK(o.kase == kase);
        CHECK(o.from == from);
        CHECK(o.revealed == revealed);
    };

    expect(StepCase::Extend, 0, 5);   // Case 1
    CHECK(b.path() == VList{0, 5});
    expect(StepCase::Skip, 5, 0);     // y == s_P
    CHECK(b.path() == VList{0, 5});
    expect(StepCase::Extend, 5, 7);
    expect(StepCase::Extend, 7, 2);
    expect(StepCase::Extend, 2, 9);
    expect(StepCase::Extend, 9, 4);
    expect(StepCase::Extend, 4, 11);
    expect(StepCase::Extend, 11, 3);
    CHECK(b.u_size() == 4);           // still the Case 1 regime (>= 2*alpha*n)
    expect(StepCase::Extend, 3, 6);
    CHECK(b.path() == VList{0, 5, 7, 2, 9, 4, 11, 3, 6});
    CHECK(b.u_size() == 3);

    CHECK(b.ubar_star() == VList{2, 4, 9, 11});

    // |U| < 2*alpha*n and y in U: no case applies
    expect(StepCase::Advance, 6, 8);
    CHECK(b.path() == VList{0, 5, 7, 2, 9, 4, 11, 3, 6});

    // Case 2b: x = pi(5) = 0 is not in Ubar*
    expect(StepCase::Rotate, 6, 5);
    CHECK(b.path() == VList{0});
    CHECK(b.cycle() == VList{5, 7, 2, 9, 4, 11, 3, 6});

    // Case 2a: merge the cycle back, f_P becomes pi(9) = 2
    expect(StepCase::MergeCycle, 0, 9);
    CHECK(b.path() == VList{0, 9, 4, 11, 3, 6, 5, 7, 2});
    CHECK(b.cycle().empty());

    // Case 2c: x = pi(4) = 9 supports u = 1 (lowest id with 9 in IN(u))
    expect(StepCase::RotateAbsorb, 2, 4);
    CHECK(b.path() == VList{0, 9, 1});
    CHECK(b.cycle() == VList{4, 11, 3, 6, 5, 7, 2});
    CHECK(b.u_size() == 2);
    CHECK_FALSE(b.in_u(1));
    CHECK(b.ubar_star() == VList{2, 11});

    CHECK(b.stats().trials == 13);
    CHECK(b.invariant_violations() == 0);
}

TEST_CASE("endgame fixture with rotations, merges, close") {
    // n = 8, 2*alpha*n = 0.5: pure Case 1 extension empties U
    std::vector<VList> out(8);
    for (Vertex i = 0; i <= 6; ++i) out[static_cast<std::size_t>(i)] = {i + 1};
    out[7] = {3};
    out[2] = {3, 5};
    out[4] = {5, 0};
    HamiltonInstance inst = scripted_instance(8, 1.0 / 32.0, std::move(out), {});
    Rng rng(0);
    HamiltonBuilder b(inst, rng);
    for (int i = 0; i < 7; ++i) REQUIRE(b.step().kase == StepCase::Extend);
    REQUIRE(b.u_size() == 0);
    REQUIRE(b.path() == VList{0, 1, 2, 3, 4, 5, 6, 7});

    StepOutcome o = b.endgame_step();
    CHECK(o.kase == StepCase::EndRotate);
    CHECK(b.path() == VList{0, 1, 2});
    CHECK(b.cycle() == VList{3, 4, 5, 6, 7});

    o = b.endgame_step();
    CHECK(o.kase == StepCase::EndMerge);
    CHECK(b.path() == VList{0, 1, 2, 5, 6, 7, 3, 4});
    CHECK(b.cycle().empty());

    o = b.endgame_step();
    CHECK(o.kase == StepCase::EndClose);
    CHECK(b.done());
    CHECK(b.hamilton_cycle() == VList{0, 1, 2, 5, 6, 7, 3, 4});
    CHECK(validate_hamilton_cycle(inst, b.hamilton_cycle()));

    CHECK(b.stats().trials == 10);
    CHECK(b.stats().endgame_trials == 3);
    std::int64_t level_sum = 0;
    for (const auto x : b.stats().per_level) level_sum += x;
    CHECK(level_sum + b.stats().endgame_trials == b.stats().trials);
}

TEST_CASE("three absorptions reach the endgame; strict flag blocks short rotations") {
    SUBCASE("lenient build completes") {
        HamiltonInstance inst = fixture_b();
        Rng rng(0);
        std::ostringstream trace;
        BuilderOptions opts;
        opts.check_invariants = true;
        opts.strict_endgame_distance = false;
        opts.trace = &trace;
        const BuildResult r = run_builder(inst, rng, 10.0, opts);
        REQUIRE(r.status == BuildResult::Status::Hamilton);
        CHECK(r.cycle == VList{0, 1, 2, 3, 4, 14, 7, 15, 8, 9, 10, 11, 12, 6, 13, 5});
        CHECK(validate_hamilton_cycle(inst, r.cycle));
        CHECK(r.stats.trials == 21);
        CHECK(r.invariant_violations == 0);
        CHECK(trace.str().find(" 2c ") != std::string::npos);
        CHECK(trace.str().find(" END-CLOSE ") != std::string::npos);
    }

    SUBCASE("strict endgame distance exhausts instead") {
        HamiltonInstance inst = fixture_b();
        Rng rng(0);
        BuilderOptions opts;
        opts.strict_endgame_distance = true;
        const BuildResult r = run_builder(inst, rng, 10.0, opts);
        CHECK(r.status == BuildResult::Status::ListExhausted);
        CHECK(r.exhausted_vertex == 13);
    }

    SUBCASE("case 2c consumes the absorbed vertex") {
        HamiltonInstance inst = fixture_b();
        Rng rng(0);
        HamiltonBuilder b(inst, rng);
        for (int i = 0; i < 12; ++i) REQUIRE(b.step().kase == StepCase::Extend);
        const StepOutcome o = b.step();
        CHECK(o.kase == StepCase::RotateAbsorb);
        CHECK(b.path() == VList{0, 1, 2, 3, 4, 5, 6, 7, 13});
        CHECK(b.cycle() == VList{8, 9, 10, 11, 12});
        CHECK(b.u_size() == 2);
    }
}

TEST_CASE("ubar star accessor") {
    // U = {6} with IN(6) = {3, 5} on the path
    std::vector<VList> out(7);
    for (Vertex i = 0; i <= 5; ++i) out[static_cast<std::size_t>(i)] = {i + 1};
    std::vector<VList> in(7);
    in[6] = {3, 5};
    HamiltonInstance inst = scripted_instance(7, 1.0 / 14.0, std::move(out), std::move(in));
    Rng rng(0);
    HamiltonBuilder b(inst, rng);
    for (int i = 0; i < 5; ++i) REQUIRE(b.step().kase == StepCase::Extend);
    CHECK(b.u_size() == 1);
    CHECK(b.in_u(6));
    CHECK(b.ubar_star() == VList{3, 5});
    CHECK(b.ubar_size() == 2);

    REQUIRE(b.step().kase == StepCase::Extend);  // absorbs 6
    CHECK(b.u_size() == 0);
    CHECK(b.ubar_star().empty());
}

TEST_CASE("incremental ubar matches the definitional oracle") {
    const auto res = checks::ubar_oracle(120, 50, 0x12345);
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("cpstar monitor") {
    TrialStats stats;
    const std::int32_t n = 200;
    const double theta = 4.0;  // threshold n/(theta ln n) ~ 9.44
    stats.snapshots = {{10, 20}, {10, 9}, {1, 11}, {1, 0}};
    const CpstarReport rep = cpstar_check(stats, n, theta, 1.0);
    CHECK(rep.checked_big == 2);
    CHECK(rep.violations_big == 1);   // 9 < 200/20
    CHECK(rep.checked_small == 2);
    CHECK(rep.violations_small == 1); // 0 < 2 * 1 * ln 200
    CHECK(rep.violation_fraction() == doctest::Approx(0.5));

    const CpstarReport relaxed = cpstar_check(stats, n, theta, 0.25);
    CHECK(relaxed.violations_big == 0);    // 9 >= 0.25 * n/20 = 2.5
    CHECK(relaxed.violations_small == 1);  // 0 < 0.25 * 2 * ln 200

}

TEST_CASE("run_builder on a maker n-cycle") {
    GameConfig cfg;
    cfg.n = 12;
    cfg.b = 1;
    cfg.K = 1;
    cfg.alpha = 0.01;
    GameState state(cfg, true);
    for (Vertex v = 0; v < 12; ++v) {
        state.claim(Player::Maker, {v, (v + 1) % 12});
        state.claim(Player::Breaker, {(v + 1) % 12, v});
    }
    HamiltonInstance inst = from_maker_graph(state);
    CHECK(inst.integrated);

    // acquisition order is claim order
    for (Vertex v = 0; v < 12; ++v) {
        CHECK(state.maker_out_adj(v) == VList{(v + 1) % 12});
        const auto revealed = inst.out[static_cast<std::size_t>(v)].revealed_entries();
        CHECK(VList(revealed.begin(), revealed.end()) == state.maker_out_adj(v));
    }

    Rng rng(0);
    const BuildResult r = run_builder(inst, rng, 40.0);
    REQUIRE(r.status == BuildResult::Status::Hamilton);
    // n-1 reveals walk the cycle; the close costs nothing because the last
    // vertex sits in IN(s_P)
    CHECK(r.stats.trials == 11);
    VList expected(12);
    for (Vertex v = 0; v < 12; ++v) expected[static_cast<std::size_t>(v)] = v;
    CHECK(r.cycle == expected);
    CHECK(validate_hamilton_cycle(inst, r.cycle));
}

TEST_CASE("from_maker_graph preconditions and degree phase linkage") {
    SUBCASE("incomplete degree phase is rejected") {
        GameConfig cfg;
        cfg.n = 6;
        cfg.b = 1;
        cfg.K = 2;
        GameState state(cfg, false);
        state.claim(Player::Maker, {0, 1});
        CHECK_THROWS_AS(from_maker_graph(state), Error);
    }

    SUBCASE("out lists are the maker adjacency after a real degree phase") {
        GameConfig cfg;
        cfg.n = 60;
        cfg.b = 2;
        cfg.theta = 2.0;  // K = ceil(2 ln 60) = 9
        cfg.alpha = 0.5;
        cfg.seed = 31;
        GameState state(cfg, true);
        DangerTable danger(state);
        Rng rng(cfg.seed);
        const DegreeReport rep =
            play_degree_phase(state, danger, breaker_random_turn, rng);
        REQUIRE(rep.completed);
        const std::int32_t K = cfg.degree_target();
        CHECK(K == 9);

        HamiltonInstance inst = from_maker_graph(state);
        std::vector<std::int64_t> seen_out(60, 0);
        for (const auto& [player, edge] : state.history()) {
            if (player != Player::Maker) continue;
            const auto revealed = inst.out[static_cast<std::size_t>(edge.from)].revealed_entries();
            CHECK(revealed[static_cast<std::size_t>(seen_out[edge.from])] == edge.to);
            ++seen_out[edge.from];
        }
        for (Vertex v = 0; v < 60; ++v) {
            CHECK(inst.out[static_cast<std::size_t>(v)].pool_size() == state.dM_out(v));
            CHECK(state.dM_out(v) >= K);
            CHECK(state.dM_in(v) >= K);
        }
    }
}

TEST_CASE("builder failure modes") {
    SUBCASE("K = 1 lists exhaust almost always") {
        std::int32_t failures = 0;
        const std::int32_t runs = 50;
        for (std::int32_t s = 0; s < runs; ++s) {
            ModelConfig mc;
            mc.n = 50;
            mc.alpha = 0.1;
            mc.K = 1;
            Rng rng(mix_seed(0x1111, static_cast<std::uint64_t>(s), 1, 2));
            HamiltonInstance inst = model_init(mc, rng);
            const BuildResult r = run_builder(inst, rng, 40.0);
            if (r.status == BuildResult::Status::ListExhausted) ++failures;
        }
        CHECK(failures >= 45);
    }

    SUBCASE("tiny budget reports budget exceeded") {
        ModelConfig mc;
        mc.n = 40;
        mc.alpha = 0.1;
        mc.K = 8;
        Rng rng(4);
        HamiltonInstance inst = model_init(mc, rng);
        const BuildResult r = run_builder(inst, rng, 0.1);
        CHECK(r.status == BuildResult::Status::BudgetExceeded);
    }
}

TEST_CASE("cycle validator rejects bad cycles") {
    HamiltonInstance inst = fixture_b();
    Rng rng(0);
    BuilderOptions opts;
    opts.strict_endgame_distance = false;  // fixture B needs the short rotation
    const BuildResult r = run_builder(inst, rng, 10.0, opts);
    REQUIRE(r.status == BuildResult::Status::Hamilton);

    std::string why;
    VList too_short(r.cycle.begin(), r.cycle.end() - 1);
    CHECK_FALSE(validate_hamilton_cycle(inst, too_short, &why));

    VList repeated = r.cycle;
    repeated[3] = repeated[2];
    CHECK_FALSE(validate_hamilton_cycle(inst, repeated, &why));

    VList swapped = r.cycle;
    std::swap(swapped[4], swapped[10]);  // breaks hop legality
    CHECK_FALSE(validate_hamilton_cycle(inst, swapped, &why));
}
