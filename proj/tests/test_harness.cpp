#include <cmath>
#include <cstdio>
#include <sstream>

#include "doctest.h"

#include "digame/harness.hpp"

using namespace digame;

namespace {

SweepConfig strong_config() {
    SweepConfig cfg;
    cfg.kind = GameKind::StrongConnectivity;
    cfg.maker = StrategyKind::MakerConnectivity;
    cfg.breaker = StrategyKind::BreakerRandom;
    cfg.alpha = 0.5;
    cfg.beta = 0.1;
    cfg.theta = 2.0;
    cfg.base_seed = 1234;
    return cfg;
}

}  // namespace

TEST_CASE("run_game: strong connectivity against a weak breaker") {
    const SweepConfig cfg = strong_config();
    PlayArtifacts art;
    const RunResult r = play_single(GameKind::StrongConnectivity, cfg, 30, 1, 99, &art);
    CHECK(r.maker_win);
    CHECK(r.reason.empty());

    // winner flag must match condense() on the final Maker digraph,
    // reconstructed independently from the position dump
    std::istringstream in(art.position_dump);
    const GameState replay = load_position(in);
    CHECK(condense(maker_digraph(replay)).strongly_connected() == r.maker_win);
}

TEST_CASE("run_game: integrated hamiltonicity plays degree phase then builds") {
    // the builder needs 2*alpha*n well below n and lists comfortably longer
    // than one merge-hunt; theta = 3 gives K = ceil(3 ln 200) = 16
    SweepConfig cfg;
    cfg.kind = GameKind::Hamiltonicity;
    cfg.breaker = StrategyKind::BreakerRandom;
    cfg.alpha = 0.15;
    cfg.beta = 0.05;
    cfg.theta = 3.0;
    std::int32_t wins = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const RunResult r = run_game(GameKind::Hamiltonicity, cfg, 200, 1, 9100 + s);
        CHECK(r.degree_completed);
        if (r.maker_win) {
            ++wins;
            CHECK(r.trials > 0);
            CHECK(r.reason.empty());
        }
    }
    CHECK(wins >= 8);
}

TEST_CASE("run_game: breaker flood wins") {
    const SweepConfig cfg = strong_config();
    const RunResult r = run_game(GameKind::StrongConnectivity, cfg, 30, 29, 7);
    CHECK_FALSE(r.maker_win);
    CHECK_FALSE(r.reason.empty());
}

TEST_CASE("run_game determinism") {
    const SweepConfig cfg = strong_config();
    const RunResult a = run_game(GameKind::StrongConnectivity, cfg, 24, 2, 5);
    const RunResult b = run_game(GameKind::StrongConnectivity, cfg, 24, 2, 5);
    CHECK(a.maker_win == b.maker_win);
    CHECK(a.rounds == b.rounds);
    CHECK(a.degree_moves == b.degree_moves);
    CHECK(a.patch_moves == b.patch_moves);
    CHECK(a.breaker_max_bip == b.breaker_max_bip);
}

TEST_CASE("sweep aggregates, determinism across workers") {
    SweepConfig cfg = strong_config();
    cfg.ns = {24};
    cfg.biases = {1, 23};
    cfg.reps = 4;
    cfg.workers = 1;
    const SweepReport r1 = sweep(cfg);
    REQUIRE(r1.points.size() == 2);
    CHECK(r1.points[0].reps == 4);
    CHECK(r1.points[0].runs.size() == 4);

    cfg.workers = 8;
    const SweepReport r8 = sweep(cfg);
    CHECK(report_to_json(r1) == report_to_json(r8));
    CHECK(report_to_csv(r1) == report_to_csv(r8));

    // a weak bias should not do better than a flooding bias
    CHECK(r1.points[0].win_rate >= r1.points[1].win_rate);
}

TEST_CASE("win rate is non-increasing in bias up to two sigmas") {
    SweepConfig cfg = strong_config();
    cfg.ns = {30};
    cfg.biases = {1, 8, 20, 29};
    cfg.reps = 12;
    cfg.workers = 4;
    const SweepReport r = sweep(cfg);
    REQUIRE(r.points.size() == 4);
    for (std::size_t i = 1; i < r.points.size(); ++i) {
        const double p1 = r.points[i - 1].win_rate;
        const double p2 = r.points[i].win_rate;
        const double se = std::sqrt(p1 * (1 - p1) / cfg.reps + p2 * (1 - p2) / cfg.reps);
        CHECK(p2 <= p1 + 2.0 * se + 1e-12);
    }
}

TEST_CASE("single-point sweep") {
    SweepConfig cfg = strong_config();
    cfg.ns = {16};
    cfg.biases = {2};
    cfg.reps = 1;
    const SweepReport r = sweep(cfg);
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].runs.size() == 1);
    CHECK(r.thresholds.empty());  // fewer than 3 bias points
}

TEST_CASE("threshold estimation") {
    SweepReport report;
    report.config.kind = GameKind::BoxGame;
    auto add_point = [&](std::int32_t n, std::int64_t b, double rate) {
        SweepPoint p;
        p.n = n;
        p.b = b;
        p.reps = 10;
        p.maker_wins = static_cast<std::int32_t>(rate * 10);
        p.win_rate = rate;
        report.points.push_back(p);
    };

    SUBCASE("step curve crosses at b = 6") {
        add_point(100, 2, 1.0);
        add_point(100, 4, 1.0);
        add_point(100, 6, 0.0);
        add_point(100, 8, 0.0);
        const ThresholdEstimate est = estimate_threshold_for(report, 100);
        CHECK(est.b0 == 6);
        CHECK_FALSE(est.censored_above);
        CHECK_FALSE(est.censored_below);
        CHECK(est.ratio == doctest::Approx(6.0 * std::log(100.0) / 100.0));
    }

    SUBCASE("all wins is censored above") {
        add_point(100, 2, 1.0);
        add_point(100, 4, 1.0);
        add_point(100, 6, 1.0);
        const ThresholdEstimate est = estimate_threshold_for(report, 100);
        CHECK(est.censored_above);
    }

    SUBCASE("all losses is censored below") {
        add_point(100, 2, 0.0);
        add_point(100, 4, 0.0);
        add_point(100, 6, 0.0);
        const ThresholdEstimate est = estimate_threshold_for(report, 100);
        CHECK(est.censored_below);
        CHECK(est.b0 == 2);
    }

    SUBCASE("noisy middle is regularized") {
        add_point(100, 2, 0.9);
        add_point(100, 4, 0.2);
        add_point(100, 6, 0.4);  // PAVA pools 0.2 and 0.4 to 0.3
        add_point(100, 8, 0.1);
        const ThresholdEstimate est = estimate_threshold_for(report, 100);
        CHECK(est.b0 == 4);
    }

    SUBCASE("too few points") {
        add_point(100, 2, 1.0);
        add_point(100, 4, 0.0);
        CHECK_THROWS_AS(estimate_threshold_for(report, 100), Error);
    }
}

TEST_CASE("pava non-increasing fit") {
    const std::vector<double> y{1.0, 0.2, 0.4, 0.1};
    const std::vector<double> w{1, 1, 1, 1};
    const std::vector<double> fit = pava_nonincreasing(y, w);
    REQUIRE(fit.size() == 4);
    CHECK(fit[0] == doctest::Approx(1.0));
    CHECK(fit[1] == doctest::Approx(0.3));
    CHECK(fit[2] == doctest::Approx(0.3));
    CHECK(fit[3] == doctest::Approx(0.1));
    for (std::size_t i = 1; i < fit.size(); ++i) CHECK(fit[i - 1] >= fit[i]);
}

TEST_CASE("clopper-pearson intervals") {
    SUBCASE("defining tail equations hold at the endpoints") {
        const auto [lo, hi] = clopper_pearson(7, 20, 0.95);
        CHECK(binom_tail_ge(20, 7, lo) == doctest::Approx(0.025).epsilon(1e-6));
        CHECK(binom_tail_le(20, 7, hi) == doctest::Approx(0.025).epsilon(1e-6));
        CHECK(lo < 0.35);
        CHECK(hi > 0.35);
    }

    SUBCASE("degenerate counts") {
        const auto [lo0, hi0] = clopper_pearson(0, 10);
        CHECK(lo0 == 0.0);
        CHECK(hi0 < 0.35);
        const auto [lon, hin] = clopper_pearson(10, 10);
        CHECK(hin == 1.0);
        CHECK(lon > 0.65);
    }

    SUBCASE("coverage at small R is at least the nominal level") {
        for (const std::int64_t R : {5LL, 10LL, 20LL}) {
            std::vector<std::pair<double, double>> intervals;
            for (std::int64_t w = 0; w <= R; ++w) intervals.push_back(clopper_pearson(w, R));
            for (double p = 0.05; p < 1.0; p += 0.05) {
                double coverage = 0;
                for (std::int64_t w = 0; w <= R; ++w) {
                    const auto& [lo, hi] = intervals[static_cast<std::size_t>(w)];
                    if (lo <= p && p <= hi) {
                        coverage += binom_tail_le(R, w, p) - binom_tail_le(R, w - 1, p);
                    }
                }
                CHECK(coverage >= 0.9499);
            }
        }
    }
}

TEST_CASE("report round trips") {
    SweepConfig cfg = strong_config();
    cfg.ns = {12};
    cfg.biases = {1, 3, 11};
    cfg.reps = 2;
    const SweepReport report = sweep(cfg);

    const std::string json = report_to_json(report);
    const SweepReport back = report_from_json(json);
    CHECK(report_to_json(back) == json);

    const std::string csv = report_to_csv(report);
    CHECK(csv.rfind("game,n,b,R,maker_wins,win_rate,ci_lo,ci_hi,mean_rounds\n", 0) == 0);

    SweepReport empty;
    empty.config = cfg;
    CHECK(report_to_csv(empty) == "game,n,b,R,maker_wins,win_rate,ci_lo,ci_hi,mean_rounds\n");

    const std::string tmp_json = "harness_roundtrip_tmp.json";
    const std::string tmp_csv = "harness_roundtrip_tmp.csv";
    write_report(report, tmp_json, tmp_csv);
    const SweepReport loaded = load_report(tmp_json);
    CHECK(report_to_json(loaded) == json);
    std::remove(tmp_json.c_str());
    std::remove(tmp_csv.c_str());

    CHECK_THROWS_AS(load_report("definitely-missing-file.json"), Error);
}

TEST_CASE("config json round trip") {
    SweepConfig cfg;
    cfg.kind = GameKind::HamiltonModel;
    cfg.ns = {100, 200};
    cfg.biases = {};
    cfg.bias_ratios = {0.5, 1.0};
    cfg.reps = 3;
    cfg.alpha = 0.1;
    cfg.theta = 5.0;
    cfg.adversary = AdversaryMode::BlockExclusion;
    cfg.base_seed = 42;
    cfg.cpstar_monitor = true;
    const std::string json = sweep_config_to_json(cfg);
    const SweepConfig back = sweep_config_from_json(json);
    CHECK(sweep_config_to_json(back) == json);
    CHECK(back.adversary == AdversaryMode::BlockExclusion);
    CHECK(back.bias_ratios == cfg.bias_ratios);

    CHECK_THROWS_AS(sweep_config_from_json("{not json"), Error);
}

TEST_CASE("hamilton model and box sweeps run end to end") {
    SUBCASE("model point") {
        SweepConfig cfg;
        cfg.kind = GameKind::HamiltonModel;
        cfg.ns = {120};
        cfg.alpha = 0.1;
        cfg.K = 12;
        cfg.biases = {12};
        cfg.reps = 3;
        cfg.base_seed = 5;
        cfg.cpstar_monitor = true;
        const SweepReport r = sweep(cfg);
        REQUIRE(r.points.size() == 1);
        for (const RunResult& run : r.points[0].runs) {
            CHECK(run.violations == 0);
            if (run.maker_win) CHECK(run.trials > 0);
        }
    }

    SUBCASE("box game at ratio grid") {
        SweepConfig cfg;
        cfg.kind = GameKind::BoxGame;
        cfg.ns = {100};
        cfg.bias_ratios = {0.25, 1.0, 3.0};
        cfg.reps = 1;
        const SweepReport r = sweep(cfg);
        REQUIRE(r.points.size() == 3);
        // deterministic game: low ratio survives, high ratio falls
        CHECK(r.points.front().win_rate == 1.0);
        CHECK(r.points.back().win_rate == 0.0);
        REQUIRE(r.thresholds.size() == 1);
        CHECK(r.thresholds[0].b0 > 0);
    }
}

TEST_CASE("expansion report serializes to the report json schema") {
    Digraph g(6);
    for (Vertex v = 0; v < 5; ++v) g.add_edge(v, (v + 1) % 5);
    const ExpansionReport rep = expansion_check(g, 0.3, 4, ExpansionMode::Exhaustive);
    REQUIRE(rep.violation_found);
    const std::string json = expansion_report_to_json(rep);
    CHECK(json.find("\"schema_version\"") != std::string::npos);
    CHECK(json.find("\"violation_found\": true") != std::string::npos);
    CHECK(json.find("\"mode\": \"exhaustive\"") != std::string::npos);
    CHECK(json.find("5") != std::string::npos);  // the isolated vertex
}

TEST_CASE("seed mixing is stable") {
    CHECK(mix_seed(1, 2, 3, 4) == mix_seed(1, 2, 3, 4));
    CHECK(mix_seed(1, 2, 3, 4) != mix_seed(1, 2, 3, 5));
    CHECK(mix_seed(1, 2, 3, 4) != mix_seed(2, 2, 3, 4));
}
