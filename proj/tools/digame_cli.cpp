// Command-line front door: single games with traces, Monte Carlo sweeps, the
// standalone Hamilton model, the abstract box game, and the verification
// suites. Exit codes: 0 success (and all enabled checks passing), 1 check
// failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "digame/checks.hpp"
#include "digame/harness.hpp"

namespace {

using namespace digame;

struct CliOptions {
    SweepConfig cfg;
    std::string config_path;
    std::string out_path;
    std::string trace_path;
    std::string log_level = "info";
    bool print_config = false;
    bool seed_given = false;
};

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(Errc::Io, "cannot open " + path + " for writing");
    f << text;
    if (!f) fail(Errc::Io, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(Errc::Io, "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Registers the shared experiment flags on a subcommand; returns the option
// group so callers can check what was explicitly set.
void add_common_flags(CLI::App* sub, CliOptions& o, std::vector<std::int32_t>& ns,
                      std::vector<std::int64_t>& bs, std::vector<double>& ratios,
                      std::string& game, std::string& maker, std::string& breaker,
                      std::string& adversary) {
    sub->option_defaults()->always_capture_default();
    sub->add_option("--config", o.config_path, "JSON config file (flags override it)");
    sub->add_option("--game", game, "game kind: strong, hamilton, box, hamilton-model");
    sub->add_option("--n", ns, "vertex count(s)")->delimiter(',');
    sub->add_option("--b", bs, "Breaker bias value(s)")->delimiter(',');
    sub->add_option("--bias-ratio", ratios, "bias as multiples of n/ln n")->delimiter(',');
    sub->add_option("--alpha", o.cfg.alpha, "alpha parameter");
    sub->add_option("--beta", o.cfg.beta, "beta parameter");
    sub->add_option("--theta", o.cfg.theta, "theta parameter (K = ceil(theta ln n))");
    sub->add_option("--K,--k", o.cfg.K, "explicit degree target / list size K");
    sub->add_option("--reps", o.cfg.reps, "repetitions per sweep point");
    sub->add_option("--seed", o.cfg.base_seed, "base seed (env DIGAME_SEED as fallback)");
    sub->add_option("--maker", maker, "Maker strategy: MakerDegree or MakerConnectivity");
    sub->add_option("--breaker", breaker,
                    "Breaker strategy: BreakerBox, BreakerRandom, BreakerMaxDegree");
    sub->add_option("--adversary-mode", adversary,
                    "candidate-set adversary: uniform, block-exclusion, targeted");
    sub->add_option("--budget-factor", o.cfg.budget_factor,
                    "builder reveal budget as a multiple of n");
    sub->add_option("--relax", o.cfg.relax, "relaxation factor for the cpstar monitor");
    sub->add_option("--workers", o.cfg.workers, "worker threads for sweeps");
    sub->add_option("--out", o.out_path, "output path (reports / position dump)");
    sub->add_option("--trace", o.trace_path, "builder trace output path");
    sub->add_option("--log-level", o.log_level, "quiet or info");
    sub->add_flag("--expansion-check", o.cfg.expansion_monitor,
                  "enable the expansion/boundary-component monitor");
    sub->add_flag("--cpstar", o.cfg.cpstar_monitor, "enable the cpstar monitor");
    sub->add_flag("--print-config", o.print_config,
                  "print the effective config as JSON and exit");
}

// Layering: config file first, then explicit flags, then the env seed.
void merge_options(CLI::App* sub, CliOptions& o, const std::vector<std::int32_t>& ns,
                   const std::vector<std::int64_t>& bs, const std::vector<double>& ratios,
                   const std::string& game, const std::string& maker,
                   const std::string& breaker, const std::string& adversary) {
    SweepConfig flags_cfg = o.cfg;  // flag values landed here during parse
    if (!o.config_path.empty()) o.cfg = sweep_config_from_json(read_text_file(o.config_path));

    if (sub->count("--game")) o.cfg.kind = parse_game_kind(game);
    if (sub->count("--n")) o.cfg.ns = ns;
    if (sub->count("--b")) o.cfg.biases = bs;
    if (sub->count("--bias-ratio")) o.cfg.bias_ratios = ratios;
    if (sub->count("--alpha")) o.cfg.alpha = flags_cfg.alpha;
    if (sub->count("--beta")) o.cfg.beta = flags_cfg.beta;
    if (sub->count("--theta")) o.cfg.theta = flags_cfg.theta;
    if (sub->count("--K")) o.cfg.K = flags_cfg.K;
    if (sub->count("--reps")) o.cfg.reps = flags_cfg.reps;
    if (sub->count("--maker")) o.cfg.maker = parse_strategy(maker);
    if (sub->count("--breaker")) o.cfg.breaker = parse_strategy(breaker);
    if (sub->count("--adversary-mode")) o.cfg.adversary = parse_adversary(adversary);
    if (sub->count("--budget-factor")) o.cfg.budget_factor = flags_cfg.budget_factor;
    if (sub->count("--relax")) o.cfg.relax = flags_cfg.relax;
    if (sub->count("--workers")) o.cfg.workers = flags_cfg.workers;
    if (sub->count("--expansion-check")) o.cfg.expansion_monitor = flags_cfg.expansion_monitor;
    if (sub->count("--cpstar")) o.cfg.cpstar_monitor = flags_cfg.cpstar_monitor;

    o.seed_given = sub->count("--seed") > 0;
    if (sub->count("--seed")) {
        o.cfg.base_seed = flags_cfg.base_seed;
    } else if (o.config_path.empty() || o.cfg.base_seed == 0) {
        if (const char* env = std::getenv("DIGAME_SEED")) {
            o.cfg.base_seed = std::strtoull(env, nullptr, 10);
            o.seed_given = true;
        }
    }
}

int run_play(CliOptions& o) {
    if (o.print_config) {
        std::cout << sweep_config_to_json(o.cfg);
        return 0;
    }
    if (o.cfg.ns.empty()) fail(Errc::InvalidConfig, "play needs --n");
    const std::int32_t n = o.cfg.ns.front();
    const auto biases = o.cfg.resolved_biases(n);
    const std::int64_t b = biases.front();

    PlayArtifacts art;
    const bool want_artifacts = !o.out_path.empty() || !o.trace_path.empty();
    const RunResult r = play_single(o.cfg.kind, o.cfg, n, b, o.cfg.base_seed,
                                    want_artifacts ? &art : nullptr);

    std::printf("winner=%s rounds=%lld game=%s n=%d b=%lld seed=%llu%s%s\n",
                r.maker_win ? "Maker" : "Breaker", static_cast<long long>(r.rounds),
                to_string(o.cfg.kind), n, static_cast<long long>(b),
                static_cast<unsigned long long>(r.seed), r.reason.empty() ? "" : " reason=",
                r.reason.c_str());
    if (!o.out_path.empty() && !art.position_dump.empty())
        write_text_file(o.out_path, art.position_dump);
    if (!o.trace_path.empty()) write_text_file(o.trace_path, art.builder_trace);
    return 0;
}

int run_sweep(CliOptions& o) {
    if (o.print_config) {
        std::cout << sweep_config_to_json(o.cfg);
        return 0;
    }
    if (o.log_level != "quiet" &&
        (o.cfg.kind == GameKind::StrongConnectivity || o.cfg.kind == GameKind::Hamiltonicity)) {
        for (const std::int32_t n : o.cfg.ns) {
            GameConfig gc;
            gc.n = n;
            gc.alpha = o.cfg.alpha;
            gc.beta = o.cfg.beta;
            gc.theta = o.cfg.theta;
            gc.K = o.cfg.K;
            if (!gc.degree_hypotheses_ok())
                std::fprintf(stderr,
                             "note: n=%d: degree-guarantee hypotheses (K >= 2/alpha, "
                             "theta*beta < alpha, theta < (alpha-beta)/beta) not satisfied\n",
                             n);
        }
    }
    const SweepReport report = sweep(o.cfg);

    if (o.log_level != "quiet") {
        for (const SweepPoint& p : report.points)
            std::printf("point n=%d b=%lld R=%d win_rate=%.3f [%.3f, %.3f]\n", p.n,
                        static_cast<long long>(p.b), p.reps, p.win_rate, p.ci_lo, p.ci_hi);
        for (const ThresholdEstimate& t : report.thresholds)
            std::printf("threshold n=%d b0=%lld ratio=%.3f%s%s\n", t.n,
                        static_cast<long long>(t.b0), t.ratio,
                        t.censored_above ? " censored-above" : "",
                        t.censored_below ? " censored-below" : "");
    }

    std::string json_path = o.out_path.empty() ? "sweep-report.json" : o.out_path;
    std::string csv_path = json_path;
    if (csv_path.size() > 5 && csv_path.substr(csv_path.size() - 5) == ".json")
        csv_path = csv_path.substr(0, csv_path.size() - 5) + ".csv";
    else
        csv_path += ".csv";
    write_report(report, json_path, csv_path);

    std::int64_t violations = 0, cp_checked = 0, cp_viol = 0;
    for (const SweepPoint& p : report.points) {
        for (const RunResult& r : p.runs) {
            violations += r.violations;
            cp_checked += r.cpstar_checked;
            cp_viol += r.cpstar_violations;
        }
    }
    bool checks_ok = violations == 0;
    if (o.cfg.cpstar_monitor && cp_checked > 0) {
        const double frac = static_cast<double>(cp_viol) / static_cast<double>(cp_checked);
        if (frac > 0.05) checks_ok = false;
        if (o.log_level != "quiet")
            std::printf("cpstar checked=%lld violations=%lld fraction=%.4f\n",
                        static_cast<long long>(cp_checked), static_cast<long long>(cp_viol),
                        frac);
    }
    std::printf("sweep done points=%zu report=%s checks=%s\n", report.points.size(),
                json_path.c_str(), checks_ok ? "pass" : "FAIL");
    return checks_ok ? 0 : 1;
}

int run_model_cmd(CliOptions& o) {
    if (o.print_config) {
        std::cout << sweep_config_to_json(o.cfg);
        return 0;
    }
    o.cfg.kind = GameKind::HamiltonModel;
    if (o.cfg.ns.empty()) fail(Errc::InvalidConfig, "hamilton-model needs --n");
    o.cfg.cpstar_monitor = true;

    if (!o.trace_path.empty() && o.cfg.reps == 1) {
        const std::int32_t n = o.cfg.ns.front();
        const std::int64_t k = o.cfg.resolved_biases(n).front();
        PlayArtifacts art;
        const RunResult r = play_single(GameKind::HamiltonModel, o.cfg, n, k,
                                        o.cfg.base_seed, &art);
        write_text_file(o.trace_path, art.builder_trace);
        std::printf("winner=%s trials=%lld n=%d K=%lld seed=%llu%s%s\n",
                    r.maker_win ? "Maker" : "Breaker", static_cast<long long>(r.trials), n,
                    static_cast<long long>(k), static_cast<unsigned long long>(r.seed),
                    r.reason.empty() ? "" : " reason=", r.reason.c_str());
        return 0;
    }
    return run_sweep(o);
}

int run_box(CliOptions& o) {
    if (o.print_config) {
        std::cout << sweep_config_to_json(o.cfg);
        return 0;
    }
    o.cfg.kind = GameKind::BoxGame;
    if (o.cfg.ns.empty()) fail(Errc::InvalidConfig, "box-game needs --n");
    const std::int32_t n = o.cfg.ns.front();
    for (const std::int64_t b : o.cfg.resolved_biases(n)) {
        const BoxGameResult r = box_game_play(n, n, b);
        std::printf("box n=%d b=%lld winner=%s turns=%lld\n", n, static_cast<long long>(b),
                    r.winner == BoxWinner::Breaker ? "Breaker" : "Opponent",
                    static_cast<long long>(r.turns));
    }
    return 0;
}

int run_verify(const std::string& suite, std::int64_t games, std::uint64_t seed) {
    std::vector<checks::CheckResult> results;
    const bool all = suite == "all";
    if (all || suite == "engine")
        results.push_back(checks::engine_fuzz(games, 2, 30, seed));
    if (all || suite == "scc") results.push_back(checks::scc_oracle(1000, seed));
    if (all || suite == "expansion")
        results.push_back(checks::expansion_oracle(50, 16, 4, 0.3, seed));
    if (all || suite == "ubar") results.push_back(checks::ubar_oracle(500, 50, seed));
    if (results.empty())
        fail(Errc::InvalidConfig, "unknown suite: " + suite +
                                      " (expected engine, scc, expansion, ubar, all)");
    bool ok = true;
    for (const auto& r : results) {
        std::printf("%s %s: %s\n", r.pass ? "ok" : "FAIL", r.name.c_str(), r.detail.c_str());
        if (!r.pass) ok = false;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maker-Breaker games on the complete digraph: engine, strategies, and a "
                 "Monte Carlo laboratory"};
    app.require_subcommand(1);

    CliOptions play_o, sweep_o, model_o, box_o;
    std::vector<std::int32_t> ns[4];
    std::vector<std::int64_t> bs[4];
    std::vector<double> ratios[4];
    std::string games[4], makers[4], breakers[4], adversaries[4];

    CLI::App* play = app.add_subcommand("play", "play one game and print the outcome");
    add_common_flags(play, play_o, ns[0], bs[0], ratios[0], games[0], makers[0], breakers[0],
                     adversaries[0]);

    CLI::App* sw = app.add_subcommand("sweep", "run a Monte Carlo sweep and write reports");
    add_common_flags(sw, sweep_o, ns[1], bs[1], ratios[1], games[1], makers[1], breakers[1],
                     adversaries[1]);

    CLI::App* model = app.add_subcommand("hamilton-model",
                                         "run the standalone IN/OUT Hamilton model");
    add_common_flags(model, model_o, ns[2], bs[2], ratios[2], games[2], makers[2],
                     breakers[2], adversaries[2]);

    CLI::App* box = app.add_subcommand("box-game", "play the abstract box game");
    add_common_flags(box, box_o, ns[3], bs[3], ratios[3], games[3], makers[3], breakers[3],
                     adversaries[3]);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all";
    std::int64_t verify_games = 2000;
    std::uint64_t verify_seed = 0x5eedbeef;
    verify->add_option("--suite", suite, "engine, scc, expansion, ubar, or all");
    verify->add_option("--games", verify_games, "fuzz game count for the engine suite");
    verify->add_option("--seed", verify_seed, "fuzz seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // model defaults follow the Hamilton section's desk-scale constants
    model_o.cfg.alpha = model->count("--alpha") ? model_o.cfg.alpha : 0.1;
    model_o.cfg.theta = model->count("--theta") ? model_o.cfg.theta : 5.0;

    try {
        if (app.got_subcommand(play)) {
            merge_options(play, play_o, ns[0], bs[0], ratios[0], games[0], makers[0],
                          breakers[0], adversaries[0]);
            return run_play(play_o);
        }
        if (app.got_subcommand(sw)) {
            merge_options(sw, sweep_o, ns[1], bs[1], ratios[1], games[1], makers[1],
                          breakers[1], adversaries[1]);
            return run_sweep(sweep_o);
        }
        if (app.got_subcommand(model)) {
            merge_options(model, model_o, ns[2], bs[2], ratios[2], games[2], makers[2],
                          breakers[2], adversaries[2]);
            return run_model_cmd(model_o);
        }
        if (app.got_subcommand(box)) {
            merge_options(box, box_o, ns[3], bs[3], ratios[3], games[3], makers[3],
                          breakers[3], adversaries[3]);
            return run_box(box_o);
        }
        if (app.got_subcommand(verify)) return run_verify(suite, verify_games, verify_seed);
    } catch (const digame::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        const auto c = e.code();
        return (c == Errc::Io || c == Errc::InvalidConfig) ? 2 : 1;
    }
    return 2;
}
