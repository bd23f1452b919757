#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "digame/connectivity.hpp"
#include "digame/game.hpp"
#include "digame/hamilton.hpp"
#include "digame/strategies.hpp"

namespace digame {

enum class GameKind { StrongConnectivity, Hamiltonicity, BoxGame, HamiltonModel };

GameKind parse_game_kind(std::string_view name);
const char* to_string(GameKind k) noexcept;

// One experiment matrix. For BoxGame, n is both the box count and the box
// size. For HamiltonModel the "bias" column carries K (the game has no
// Breaker); when biases/bias_ratios are empty the derived default K is used.
struct SweepConfig {
    GameKind kind = GameKind::StrongConnectivity;
    std::vector<std::int32_t> ns;
    std::vector<std::int64_t> biases;      // absolute values
    std::vector<double> bias_ratios;       // multiples of n/ln n (appended)
    std::int32_t reps = 1;
    StrategyKind maker = StrategyKind::MakerConnectivity;
    StrategyKind breaker = StrategyKind::BreakerRandom;
    std::uint64_t base_seed = 0;
    std::int32_t workers = 1;              // never serialized: reports are worker-independent
    double alpha = 0.5;
    double beta = 0.1;
    double theta = 2.0;
    std::int32_t K = 0;
    AdversaryMode adversary = AdversaryMode::Uniform;
    double budget_factor = 40.0;
    double relax = 0.25;
    bool expansion_monitor = false;
    bool cpstar_monitor = false;

    std::vector<std::int64_t> resolved_biases(std::int32_t n) const;
    void validate() const;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::int32_t n = 0;
    std::int64_t b = 0;
    bool maker_win = false;
    std::int64_t rounds = 0;
    std::int64_t degree_moves = -1;
    bool degree_completed = false;
    std::int64_t breaker_max_bip = -1;       // over all bipartite vertices, at end
    std::int64_t breaker_max_bip_pool = -1;  // over vertices still below target, running max
    std::int64_t min_candidates = -1;        // smallest Maker choice set seen
    std::int64_t patch_moves = -1;
    bool stuck = false;
    std::int64_t trials = -1;                // Hamilton builder reveals
    std::int64_t exhausted_lists = 0;
    std::int64_t violations = 0;             // monitored invariant violations
    std::int64_t small_sources = 0, small_sinks = 0;
    std::int64_t cpstar_checked = 0, cpstar_violations = 0;
    std::string reason;                      // failure reason, empty on a clean win
};

struct SweepPoint {
    std::int32_t n = 0;
    std::int64_t b = 0;
    std::int32_t reps = 0;
    std::int32_t maker_wins = 0;
    double win_rate = 0, ci_lo = 0, ci_hi = 0;
    double mean_rounds = 0;
    std::vector<RunResult> runs;
};

struct ThresholdEstimate {
    std::int32_t n = 0;
    std::int64_t b0 = -1;    // smallest swept bias with regularized win rate < 1/2
    double ratio = 0;        // b0 * ln n / n
    bool censored_above = false;  // Maker won across the whole range
    bool censored_below = false;  // Maker already below 1/2 at the smallest bias
};

struct SweepReport {
    std::string schema_version = "digame-report-1";
    SweepConfig config;
    std::vector<SweepPoint> points;
    std::vector<ThresholdEstimate> thresholds;
};

// Degree phase: Maker plays the danger strategy until every bipartite vertex
// has Maker degree >= target (or the board runs out); Breaker answers with
// `breaker_turn` each round. Exposed separately so the degree guarantee can
// be measured without the later phases.
struct DegreeReport {
    bool completed = false;
    bool early_stopped = false;  // early_goal fired before the target degree
    std::int64_t maker_moves = 0;
    std::int64_t rounds = 0;
    std::int64_t breaker_max_bip = 0;       // at phase end, all vertices
    std::int64_t breaker_max_bip_pool = 0;  // running max over the active pool
    std::int64_t min_candidates = -1;
    std::string failure;
};

DegreeReport play_degree_phase(GameState& state, DangerTable& danger,
                               const BreakerTurnFn& breaker_turn, Rng& rng,
                               const std::function<bool(const GameState&)>& early_goal = {});

RunResult run_game(GameKind kind, const SweepConfig& cfg, std::int32_t n, std::int64_t b,
                   std::uint64_t seed);

// Single game with optional artifacts: the position dump for board games and
// the builder trace for Hamilton runs.
struct PlayArtifacts {
    std::string position_dump;
    std::string builder_trace;
};

RunResult play_single(GameKind kind, const SweepConfig& cfg, std::int32_t n, std::int64_t b,
                      std::uint64_t seed, PlayArtifacts* artifacts);

// R runs per (n, b); per-run seeds are splitmix64 mixes of
// (base_seed, n, b, rep), so aggregates do not depend on the worker count.
SweepReport sweep(const SweepConfig& cfg);

ThresholdEstimate estimate_threshold_for(const SweepReport& report, std::int32_t n);
std::vector<ThresholdEstimate> estimate_thresholds(const SweepReport& report);

// Exact (Clopper-Pearson) binomial interval.
std::pair<double, double> clopper_pearson(std::int64_t wins, std::int64_t trials,
                                          double confidence = 0.95);
double binom_tail_ge(std::int64_t n, std::int64_t k, double p);  // P[X >= k]
double binom_tail_le(std::int64_t n, std::int64_t k, double p);  // P[X <= k]

// Pool-adjacent-violators fit of a non-increasing sequence.
std::vector<double> pava_nonincreasing(const std::vector<double>& y,
                                       const std::vector<double>& weights);

std::string report_to_json(const SweepReport& report);
SweepReport report_from_json(const std::string& text);
std::string report_to_csv(const SweepReport& report);

void write_report(const SweepReport& report, const std::string& json_path,
                  const std::string& csv_path);
SweepReport load_report(const std::string& json_path);

// JSON (de)serialization of the sweep config, shared by report files, config
// files and --print-config.
std::string sweep_config_to_json(const SweepConfig& cfg);
SweepConfig sweep_config_from_json(const std::string& text);

std::string expansion_report_to_json(const ExpansionReport& rep);

// Runs fn(i) for i in [0, tasks) on `workers` threads; any exception is
// rethrown on the caller after all threads join.
void parallel_for(std::size_t tasks, std::int32_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace digame
