#include "digame/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace digame {

using json = nlohmann::ordered_json;

GameKind parse_game_kind(std::string_view name) {
    std::string k(name);
    std::transform(k.begin(), k.end(), k.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::erase_if(k, [](char c) { return c == '-' || c == '_'; });
    if (k == "strong" || k == "strongconnectivity") return GameKind::StrongConnectivity;
    if (k == "hamilton" || k == "hamiltonicity") return GameKind::Hamiltonicity;
    if (k == "box" || k == "boxgame") return GameKind::BoxGame;
    if (k == "hamiltonmodel" || k == "model") return GameKind::HamiltonModel;
    fail(Errc::InvalidConfig, "unknown game kind: " + std::string(name));
}

const char* to_string(GameKind k) noexcept {
    switch (k) {
        case GameKind::StrongConnectivity: return "strong";
        case GameKind::Hamiltonicity: return "hamilton";
        case GameKind::BoxGame: return "box";
        case GameKind::HamiltonModel: return "hamilton-model";
    }
    return "?";
}

std::vector<std::int64_t> SweepConfig::resolved_biases(std::int32_t n) const {
    std::vector<std::int64_t> out = biases;
    for (const double r : bias_ratios) {
        const double v = r * static_cast<double>(n) / std::log(static_cast<double>(n));
        out.push_back(std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(v))));
    }
    if (out.empty() && kind == GameKind::HamiltonModel) {
        const ModelConfig mc{n, alpha, theta, K};
        out.push_back(mc.k_value());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void SweepConfig::validate() const {
    if (ns.empty()) fail(Errc::InvalidConfig, "sweep needs at least one n");
    if (reps < 1) fail(Errc::InvalidConfig, "reps must be at least 1");
    for (const std::int32_t n : ns) {
        if (n < 2) fail(Errc::InvalidConfig, "n must be at least 2");
        const auto bs = resolved_biases(n);
        if (bs.empty()) fail(Errc::InvalidConfig, "sweep needs at least one bias value");
        for (const std::int64_t b : bs)
            if (b < 1) fail(Errc::InvalidConfig, "bias values must round to >= 1");
    }
}

DegreeReport play_degree_phase(GameState& state, DangerTable& danger,
                               const BreakerTurnFn& breaker_turn, Rng& rng,
                               const std::function<bool(const GameState&)>& early_goal) {
    DegreeReport rep;
    const std::int32_t target = state.config().degree_target();
    std::int64_t rounds_since_check = 0;
    try {
        while (!state.is_exhausted()) {
            if (state.min_maker_bip_degree() >= target) {
                rep.completed = true;
                break;
            }
            if (early_goal && ++rounds_since_check >= 64) {
                rounds_since_check = 0;
                if (early_goal(state)) {
                    rep.early_stopped = true;
                    break;
                }
            }
            const MakerDegreeChoice mv = maker_degree_move(state, danger, rng);
            if (rep.min_candidates < 0 || mv.candidates < rep.min_candidates)
                rep.min_candidates = mv.candidates;
            state.claim(Player::Maker, mv.edge);
            danger.on_claim(Player::Maker, mv.edge);
            ++rep.maker_moves;
            if (state.is_exhausted()) break;
            for (const DirectedEdge e : breaker_turn(state, rng))
                danger.on_claim(Player::Breaker, e);
            rep.breaker_max_bip_pool = std::max<std::int64_t>(
                rep.breaker_max_bip_pool, state.max_breaker_bip_degree_in_pool(target));
        }
        if (!rep.completed && !rep.early_stopped)
            rep.completed = state.min_maker_bip_degree() >= target;
    } catch (const Error& e) {
        rep.failure = e.what();
    }
    rep.rounds = state.round();
    rep.breaker_max_bip = state.max_breaker_bip_degree();
    return rep;
}

namespace {

RunResult run_strong_or_hamilton(GameKind kind, const SweepConfig& cfg, std::int32_t n,
                                 std::int64_t b, std::uint64_t seed,
                                 PlayArtifacts* artifacts) {
    RunResult r;
    r.seed = seed;
    r.n = n;
    r.b = b;
    GameConfig gc;
    gc.n = n;
    gc.b = b;
    gc.alpha = cfg.alpha;
    gc.beta = cfg.beta;
    gc.theta = cfg.theta;
    gc.K = cfg.K;
    gc.seed = seed;

    GameState state(gc, /*record_history=*/artifacts != nullptr);
    DangerTable danger(state);
    Rng rng(seed);
    const BreakerTurnFn breaker = breaker_turn_fn(cfg.breaker);

    std::function<bool(const GameState&)> early;
    if (kind == GameKind::StrongConnectivity && cfg.maker == StrategyKind::MakerConnectivity) {
        early = [](const GameState& s) {
            for (Vertex v = 0; v < s.n(); ++v)
                if (s.dM_out(v) == 0 || s.dM_in(v) == 0) return false;
            return condense(maker_digraph(s)).strongly_connected();
        };
    }

    const DegreeReport deg = play_degree_phase(state, danger, breaker, rng, early);
    r.degree_moves = deg.maker_moves;
    r.degree_completed = deg.completed;
    r.breaker_max_bip = deg.breaker_max_bip;
    r.breaker_max_bip_pool = deg.breaker_max_bip_pool;
    r.min_candidates = deg.min_candidates;
    if (!deg.failure.empty()) r.reason = deg.failure;

    if (kind == GameKind::StrongConnectivity) {
        if (cfg.maker == StrategyKind::MakerConnectivity && deg.completed &&
            !state.is_exhausted()) {
            const PatchOutcome po = maker_connectivity_endgame(
                state, [&](GameState& s) { breaker(s, rng); }, rng,
                4 * static_cast<std::int64_t>(n));
            r.patch_moves = static_cast<std::int64_t>(po.moves.size());
            r.stuck = po.stuck;
            if (po.stuck && r.reason.empty()) r.reason = "patching stuck";
        } else if (deg.early_stopped) {
            r.patch_moves = 0;
        }
        const Digraph d = maker_digraph(state);
        const Condensation c = condense(d);
        if (cfg.expansion_monitor) {
            const BoundaryComponentCheck bc = check_boundary_components(d, c, cfg.alpha);
            r.small_sources = bc.small_sources;
            r.small_sinks = bc.small_sinks;
            r.violations += bc.implication_failures;
        }
        r.maker_win = c.strongly_connected();
        if (!r.maker_win && r.reason.empty()) r.reason = "not strongly connected";
    } else {
        if (!deg.completed) {
            r.maker_win = false;
            if (r.reason.empty()) r.reason = "degree phase incomplete";
        } else {
            HamiltonInstance inst = from_maker_graph(state);
            std::ostringstream trace;
            BuilderOptions opts;
            if (artifacts) opts.trace = &trace;
            const BuildResult res = run_builder(inst, rng, cfg.budget_factor, opts);
            if (artifacts) artifacts->builder_trace = trace.str();
            r.trials = res.stats.trials;
            r.exhausted_lists = res.stats.exhausted_lists;
            r.violations += res.invariant_violations;
            if (res.status == BuildResult::Status::Hamilton) {
                r.maker_win = validate_hamilton_cycle(inst, res.cycle);
                if (!r.maker_win) {
                    r.reason = "builder cycle failed validation";
                    ++r.violations;
                }
            } else {
                r.maker_win = false;
                r.reason = to_string(res.status);
            }
            if (cfg.cpstar_monitor) {
                const double theta_eff = static_cast<double>(inst.K) /
                                         std::log(static_cast<double>(n));
                const CpstarReport cp = cpstar_check(res.stats, n, theta_eff, cfg.relax);
                r.cpstar_checked = cp.checked();
                r.cpstar_violations = cp.violations();
            }
        }
    }
    r.rounds = state.round();
    if (artifacts) {
        std::ostringstream dump;
        dump_position(state, dump);
        artifacts->position_dump = dump.str();
    }
    return r;
}

RunResult run_model(const SweepConfig& cfg, std::int32_t n, std::int64_t b,
                    std::uint64_t seed, PlayArtifacts* artifacts) {
    RunResult r;
    r.seed = seed;
    r.n = n;
    r.b = b;
    ModelConfig mc;
    mc.n = n;
    mc.alpha = cfg.alpha;
    mc.theta = cfg.theta;
    mc.K = static_cast<std::int32_t>(b);
    mc.adversary = cfg.adversary;
    mc.seed = seed;

    Rng rng(seed);
    HamiltonInstance inst = model_init(mc, rng);
    std::ostringstream trace;
    BuilderOptions opts;
    if (artifacts) opts.trace = &trace;
    const BuildResult res = run_builder(inst, rng, cfg.budget_factor, opts);
    if (artifacts) artifacts->builder_trace = trace.str();
    r.trials = res.stats.trials;
    r.rounds = res.stats.trials;
    r.exhausted_lists = res.stats.exhausted_lists;
    r.violations = res.invariant_violations;
    if (res.status == BuildResult::Status::Hamilton) {
        r.maker_win = validate_hamilton_cycle(inst, res.cycle);
        if (!r.maker_win) {
            r.reason = "builder cycle failed validation";
            ++r.violations;
        }
    } else {
        r.reason = to_string(res.status);
    }
    if (cfg.cpstar_monitor) {
        const double theta_eff =
            static_cast<double>(inst.K) / std::log(static_cast<double>(n));
        const CpstarReport cp = cpstar_check(res.stats, n, theta_eff, cfg.relax);
        r.cpstar_checked = cp.checked();
        r.cpstar_violations = cp.violations();
    }
    return r;
}

}  // namespace

RunResult play_single(GameKind kind, const SweepConfig& cfg, std::int32_t n, std::int64_t b,
                      std::uint64_t seed, PlayArtifacts* artifacts) {
    try {
        switch (kind) {
            case GameKind::StrongConnectivity:
            case GameKind::Hamiltonicity:
                return run_strong_or_hamilton(kind, cfg, n, b, seed, artifacts);
            case GameKind::HamiltonModel:
                return run_model(cfg, n, b, seed, artifacts);
            case GameKind::BoxGame: {
                RunResult r;
                r.seed = seed;
                r.n = n;
                r.b = b;
                const BoxGameResult res = box_game_play(n, n, b);
                r.maker_win = res.winner == BoxWinner::Opponent;
                r.rounds = res.turns;
                if (!r.maker_win) r.reason = "breaker completed a box";
                return r;
            }
        }
    } catch (const Error& e) {
        RunResult r;
        r.seed = seed;
        r.n = n;
        r.b = b;
        r.maker_win = false;
        r.reason = e.what();
        return r;
    }
    fail(Errc::InvalidConfig, "unhandled game kind");
}

RunResult run_game(GameKind kind, const SweepConfig& cfg, std::int32_t n, std::int64_t b,
                   std::uint64_t seed) {
    return play_single(kind, cfg, n, b, seed, nullptr);
}

void parallel_for(std::size_t tasks, std::int32_t workers,
                  const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || tasks <= 1) {
        for (std::size_t i = 0; i < tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    auto body = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks) return;
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(err_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const auto count = static_cast<std::size_t>(
        std::min<std::int64_t>(workers, static_cast<std::int64_t>(tasks)));
    pool.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SweepReport sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepReport report;
    report.config = cfg;

    std::vector<std::pair<std::int32_t, std::int64_t>> grid;
    for (const std::int32_t n : cfg.ns)
        for (const std::int64_t b : cfg.resolved_biases(n)) grid.emplace_back(n, b);

    const auto reps = static_cast<std::size_t>(cfg.reps);
    std::vector<RunResult> results(grid.size() * reps);
    parallel_for(results.size(), cfg.workers, [&](std::size_t i) {
        const auto [n, b] = grid[i / reps];
        const auto rep_idx = static_cast<std::uint64_t>(i % reps);
        const std::uint64_t seed =
            mix_seed(cfg.base_seed, static_cast<std::uint64_t>(n),
                     static_cast<std::uint64_t>(b), rep_idx);
        results[i] = run_game(cfg.kind, cfg, n, b, seed);
    });

    report.points.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        SweepPoint p;
        p.n = grid[g].first;
        p.b = grid[g].second;
        p.reps = cfg.reps;
        double rounds_sum = 0;
        for (std::size_t rep_idx = 0; rep_idx < reps; ++rep_idx) {
            const RunResult& r = results[g * reps + rep_idx];
            if (r.maker_win) ++p.maker_wins;
            rounds_sum += static_cast<double>(r.rounds);
            p.runs.push_back(r);
        }
        p.win_rate = static_cast<double>(p.maker_wins) / static_cast<double>(p.reps);
        std::tie(p.ci_lo, p.ci_hi) = clopper_pearson(p.maker_wins, p.reps);
        p.mean_rounds = rounds_sum / static_cast<double>(p.reps);
        report.points.push_back(std::move(p));
    }

    for (const std::int32_t n : cfg.ns) {
        if (cfg.resolved_biases(n).size() >= 3)
            report.thresholds.push_back(estimate_threshold_for(report, n));
    }
    return report;
}

std::vector<double> pava_nonincreasing(const std::vector<double>& y,
                                       const std::vector<double>& weights) {
    struct Block {
        double wsum, wysum;
        std::size_t len;
        double mean() const { return wysum / wsum; }
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double w = i < weights.size() ? weights[i] : 1.0;
        blocks.push_back({w, w * y[i], 1});
        while (blocks.size() >= 2 &&
               blocks[blocks.size() - 1].mean() > blocks[blocks.size() - 2].mean()) {
            Block last = blocks.back();
            blocks.pop_back();
            blocks.back().wsum += last.wsum;
            blocks.back().wysum += last.wysum;
            blocks.back().len += last.len;
        }
    }
    std::vector<double> fitted;
    fitted.reserve(y.size());
    for (const Block& b : blocks) fitted.insert(fitted.end(), b.len, b.mean());
    return fitted;
}

ThresholdEstimate estimate_threshold_for(const SweepReport& report, std::int32_t n) {
    std::vector<std::pair<std::int64_t, std::pair<double, double>>> pts;  // b -> (rate, reps)
    for (const SweepPoint& p : report.points)
        if (p.n == n) pts.push_back({p.b, {p.win_rate, static_cast<double>(p.reps)}});
    if (pts.size() < 3)
        fail(Errc::InsufficientPoints,
             "threshold estimate needs >= 3 bias points for n = " + std::to_string(n));
    std::sort(pts.begin(), pts.end());

    std::vector<double> rates, weights;
    for (const auto& [b, rw] : pts) {
        rates.push_back(rw.first);
        weights.push_back(rw.second);
    }
    const std::vector<double> fitted = pava_nonincreasing(rates, weights);

    ThresholdEstimate est;
    est.n = n;
    std::size_t cross = pts.size();
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        if (fitted[i] < 0.5) {
            cross = i;
            break;
        }
    }
    if (cross == pts.size()) {
        est.censored_above = true;
        est.b0 = pts.back().first;
    } else {
        est.b0 = pts[cross].first;
        if (cross == 0) est.censored_below = true;
    }
    est.ratio = static_cast<double>(est.b0) * std::log(static_cast<double>(n)) /
                static_cast<double>(n);
    return est;
}

std::vector<ThresholdEstimate> estimate_thresholds(const SweepReport& report) {
    std::vector<std::int32_t> ns;
    for (const SweepPoint& p : report.points)
        if (std::find(ns.begin(), ns.end(), p.n) == ns.end()) ns.push_back(p.n);
    std::vector<ThresholdEstimate> out;
    out.reserve(ns.size());
    for (const std::int32_t n : ns) out.push_back(estimate_threshold_for(report, n));
    return out;
}

namespace {

double binom_log_pmf(std::int64_t n, std::int64_t k, double p) {
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1) +
           static_cast<double>(k) * std::log(p) +
           static_cast<double>(n - k) * std::log1p(-p);
}

}  // namespace

double binom_tail_ge(std::int64_t n, std::int64_t k, double p) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double sum = 0;
    for (std::int64_t i = k; i <= n; ++i) sum += std::exp(binom_log_pmf(n, i, p));
    return std::min(1.0, sum);
}

double binom_tail_le(std::int64_t n, std::int64_t k, double p) {
    if (k >= n) return 1.0;
    if (k < 0) return 0.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    double sum = 0;
    for (std::int64_t i = 0; i <= k; ++i) sum += std::exp(binom_log_pmf(n, i, p));
    return std::min(1.0, sum);
}

std::pair<double, double> clopper_pearson(std::int64_t wins, std::int64_t trials,
                                          double confidence) {
    if (trials <= 0 || wins < 0 || wins > trials)
        fail(Errc::Precondition, "invalid binomial sample");
    const double a = (1.0 - confidence) / 2.0;
    double lo = 0.0, hi = 1.0;
    if (wins > 0) {
        // smallest p with P[X >= wins] >= a; the tail is increasing in p
        double l = 0.0, r = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (l + r);
            (binom_tail_ge(trials, wins, m) < a ? l : r) = m;
        }
        lo = l;
    }
    if (wins < trials) {
        // largest p with P[X <= wins] >= a; the tail is decreasing in p
        double l = 0.0, r = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (l + r);
            (binom_tail_le(trials, wins, m) < a ? r : l) = m;
        }
        hi = r;
    }
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// serialization

namespace {

json config_to_jobj(const SweepConfig& c) {
    json j;
    j["game"] = to_string(c.kind);
    j["n"] = c.ns;
    j["b"] = c.biases;
    j["bias_ratio"] = c.bias_ratios;
    j["reps"] = c.reps;
    j["maker"] = to_string(c.maker);
    j["breaker"] = to_string(c.breaker);
    j["seed"] = c.base_seed;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["theta"] = c.theta;
    j["k"] = c.K;
    j["adversary_mode"] = to_string(c.adversary);
    j["budget_factor"] = c.budget_factor;
    j["relax"] = c.relax;
    j["expansion_check"] = c.expansion_monitor;
    j["cpstar"] = c.cpstar_monitor;
    return j;
}

template <typename T>
std::vector<T> scalar_or_array(const json& v) {
    std::vector<T> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(e.get<T>());
    } else {
        out.push_back(v.get<T>());
    }
    return out;
}

SweepConfig config_from_jobj(const json& j) {
    SweepConfig c;
    if (j.contains("game")) c.kind = parse_game_kind(j.at("game").get<std::string>());
    if (j.contains("n")) c.ns = scalar_or_array<std::int32_t>(j.at("n"));
    if (j.contains("b")) c.biases = scalar_or_array<std::int64_t>(j.at("b"));
    if (j.contains("bias_ratio")) c.bias_ratios = scalar_or_array<double>(j.at("bias_ratio"));
    if (j.contains("reps")) c.reps = j.at("reps").get<std::int32_t>();
    if (j.contains("maker")) c.maker = parse_strategy(j.at("maker").get<std::string>());
    if (j.contains("breaker")) c.breaker = parse_strategy(j.at("breaker").get<std::string>());
    if (j.contains("seed")) c.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("beta")) c.beta = j.at("beta").get<double>();
    if (j.contains("theta")) c.theta = j.at("theta").get<double>();
    if (j.contains("k")) c.K = j.at("k").get<std::int32_t>();
    if (j.contains("adversary_mode"))
        c.adversary = parse_adversary(j.at("adversary_mode").get<std::string>());
    if (j.contains("budget_factor")) c.budget_factor = j.at("budget_factor").get<double>();
    if (j.contains("relax")) c.relax = j.at("relax").get<double>();
    if (j.contains("expansion_check")) c.expansion_monitor = j.at("expansion_check").get<bool>();
    if (j.contains("cpstar")) c.cpstar_monitor = j.at("cpstar").get<bool>();
    return c;
}

json run_to_jobj(const RunResult& r) {
    json j;
    j["seed"] = r.seed;
    j["win"] = r.maker_win;
    j["rounds"] = r.rounds;
    j["degree_moves"] = r.degree_moves;
    j["degree_completed"] = r.degree_completed;
    j["breaker_max_bip"] = r.breaker_max_bip;
    j["breaker_max_bip_pool"] = r.breaker_max_bip_pool;
    j["min_candidates"] = r.min_candidates;
    j["patch_moves"] = r.patch_moves;
    j["stuck"] = r.stuck;
    j["trials"] = r.trials;
    j["exhausted_lists"] = r.exhausted_lists;
    j["violations"] = r.violations;
    j["small_sources"] = r.small_sources;
    j["small_sinks"] = r.small_sinks;
    j["cpstar_checked"] = r.cpstar_checked;
    j["cpstar_violations"] = r.cpstar_violations;
    j["reason"] = r.reason;
    return j;
}

RunResult run_from_jobj(const json& j, std::int32_t n, std::int64_t b) {
    RunResult r;
    r.n = n;
    r.b = b;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.maker_win = j.at("win").get<bool>();
    r.rounds = j.at("rounds").get<std::int64_t>();
    r.degree_moves = j.at("degree_moves").get<std::int64_t>();
    r.degree_completed = j.at("degree_completed").get<bool>();
    r.breaker_max_bip = j.at("breaker_max_bip").get<std::int64_t>();
    r.breaker_max_bip_pool = j.at("breaker_max_bip_pool").get<std::int64_t>();
    r.min_candidates = j.at("min_candidates").get<std::int64_t>();
    r.patch_moves = j.at("patch_moves").get<std::int64_t>();
    r.stuck = j.at("stuck").get<bool>();
    r.trials = j.at("trials").get<std::int64_t>();
    r.exhausted_lists = j.at("exhausted_lists").get<std::int64_t>();
    r.violations = j.at("violations").get<std::int64_t>();
    r.small_sources = j.at("small_sources").get<std::int64_t>();
    r.small_sinks = j.at("small_sinks").get<std::int64_t>();
    r.cpstar_checked = j.at("cpstar_checked").get<std::int64_t>();
    r.cpstar_violations = j.at("cpstar_violations").get<std::int64_t>();
    r.reason = j.at("reason").get<std::string>();
    return r;
}

}  // namespace

std::string sweep_config_to_json(const SweepConfig& cfg) {
    return config_to_jobj(cfg).dump(1) + "\n";
}

std::string expansion_report_to_json(const ExpansionReport& rep) {
    json j;
    j["schema_version"] = "digame-report-1";
    j["n"] = rep.n;
    j["alpha"] = rep.alpha;
    j["max_size"] = rep.max_size;
    j["mode"] = rep.mode == ExpansionMode::Exhaustive ? "exhaustive" : "sampled";
    j["samples"] = rep.samples;
    j["hypothesis_ok"] = rep.hypothesis_ok;
    j["violation_found"] = rep.violation_found;
    j["violating_set"] = rep.violating_set;
    j["missing_out"] = rep.missing_out;
    j["missing_in"] = rep.missing_in;
    return j.dump(1) + "\n";
}

SweepConfig sweep_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(Errc::Io, std::string("bad config JSON: ") + e.what());
    }
    return config_from_jobj(j);
}

std::string report_to_json(const SweepReport& report) {
    json j;
    j["schema_version"] = report.schema_version;
    j["config"] = config_to_jobj(report.config);
    json points = json::array();
    for (const SweepPoint& p : report.points) {
        json pj;
        pj["n"] = p.n;
        pj["b"] = p.b;
        pj["reps"] = p.reps;
        pj["maker_wins"] = p.maker_wins;
        pj["win_rate"] = p.win_rate;
        pj["ci_lo"] = p.ci_lo;
        pj["ci_hi"] = p.ci_hi;
        pj["mean_rounds"] = p.mean_rounds;
        json runs = json::array();
        for (const RunResult& r : p.runs) runs.push_back(run_to_jobj(r));
        pj["runs"] = std::move(runs);
        points.push_back(std::move(pj));
    }
    j["points"] = std::move(points);
    json ths = json::array();
    for (const ThresholdEstimate& t : report.thresholds) {
        json tj;
        tj["n"] = t.n;
        tj["b0"] = t.b0;
        tj["ratio"] = t.ratio;
        tj["censored_above"] = t.censored_above;
        tj["censored_below"] = t.censored_below;
        ths.push_back(std::move(tj));
    }
    j["thresholds"] = std::move(ths);
    return j.dump(1) + "\n";
}

SweepReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(Errc::Io, std::string("bad report JSON: ") + e.what());
    }
    SweepReport report;
    report.schema_version = j.at("schema_version").get<std::string>();
    report.config = config_from_jobj(j.at("config"));
    for (const auto& pj : j.at("points")) {
        SweepPoint p;
        p.n = pj.at("n").get<std::int32_t>();
        p.b = pj.at("b").get<std::int64_t>();
        p.reps = pj.at("reps").get<std::int32_t>();
        p.maker_wins = pj.at("maker_wins").get<std::int32_t>();
        p.win_rate = pj.at("win_rate").get<double>();
        p.ci_lo = pj.at("ci_lo").get<double>();
        p.ci_hi = pj.at("ci_hi").get<double>();
        p.mean_rounds = pj.at("mean_rounds").get<double>();
        for (const auto& rj : pj.at("runs")) p.runs.push_back(run_from_jobj(rj, p.n, p.b));
        report.points.push_back(std::move(p));
    }
    for (const auto& tj : j.at("thresholds")) {
        ThresholdEstimate t;
        t.n = tj.at("n").get<std::int32_t>();
        t.b0 = tj.at("b0").get<std::int64_t>();
        t.ratio = tj.at("ratio").get<double>();
        t.censored_above = tj.at("censored_above").get<bool>();
        t.censored_below = tj.at("censored_below").get<bool>();
        report.thresholds.push_back(t);
    }
    return report;
}

std::string report_to_csv(const SweepReport& report) {
    std::string out = "game,n,b,R,maker_wins,win_rate,ci_lo,ci_hi,mean_rounds\n";
    char line[256];
    for (const SweepPoint& p : report.points) {
        std::snprintf(line, sizeof(line), "%s,%d,%lld,%d,%d,%.6f,%.6f,%.6f,%.6f\n",
                      to_string(report.config.kind), p.n, static_cast<long long>(p.b),
                      p.reps, p.maker_wins, p.win_rate, p.ci_lo, p.ci_hi, p.mean_rounds);
        out += line;
    }
    return out;
}

void write_report(const SweepReport& report, const std::string& json_path,
                  const std::string& csv_path) {
    std::ofstream jf(json_path, std::ios::binary);
    if (!jf) fail(Errc::Io, "cannot open " + json_path + " for writing");
    jf << report_to_json(report);
    if (!jf) fail(Errc::Io, "write failed: " + json_path);
    if (!csv_path.empty()) {
        std::ofstream cf(csv_path, std::ios::binary);
        if (!cf) fail(Errc::Io, "cannot open " + csv_path + " for writing");
        cf << report_to_csv(report);
        if (!cf) fail(Errc::Io, "write failed: " + csv_path);
    }
}

SweepReport load_report(const std::string& json_path) {
    std::ifstream jf(json_path, std::ios::binary);
    if (!jf) fail(Errc::Io, "cannot open " + json_path);
    std::stringstream ss;
    ss << jf.rdbuf();
    return report_from_json(ss.str());
}

}  // namespace digame
