#include "digame/hamilton.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace digame {

AdversaryMode parse_adversary(std::string_view name) {
    std::string k(name);
    std::transform(k.begin(), k.end(), k.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::erase_if(k, [](char c) { return c == '-' || c == '_'; });
    if (k == "uniform") return AdversaryMode::Uniform;
    if (k == "blockexclusion" || k == "block") return AdversaryMode::BlockExclusion;
    if (k == "targeted") return AdversaryMode::Targeted;
    fail(Errc::InvalidConfig, "unknown adversary mode: " + std::string(name));
}

const char* to_string(AdversaryMode m) noexcept {
    switch (m) {
        case AdversaryMode::Uniform: return "uniform";
        case AdversaryMode::BlockExclusion: return "block-exclusion";
        case AdversaryMode::Targeted: return "targeted";
    }
    return "?";
}

void ModelConfig::validate() const {
    if (n < 2) fail(Errc::InvalidConfig, "model needs n >= 2");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::InvalidConfig, "alpha must be in (0,1)");
    const std::int32_t m = candidate_size();
    if (m > n - 1)
        fail(Errc::InvalidConfig,
             "candidate size ceil((1-alpha)n) = " + std::to_string(m) +
                 " exceeds n-1; increase alpha or n");
    const std::int32_t k = k_value();
    if (k < 1) fail(Errc::InvalidConfig, "K must be at least 1");
    if (k > m)
        fail(Errc::InvalidConfig, "K = " + std::to_string(k) +
                                      " exceeds candidate size " + std::to_string(m));
}

OutList OutList::lazy(std::vector<Vertex> pool, std::int32_t budget) {
    OutList l;
    l.items_ = std::move(pool);
    l.budget_ = budget;
    return l;
}

OutList OutList::pre_revealed(std::vector<Vertex> entries) {
    OutList l;
    l.items_ = std::move(entries);
    l.revealed_ = static_cast<std::int32_t>(l.items_.size());
    l.budget_ = l.revealed_;
    return l;
}

std::optional<Vertex> OutList::current(Rng& rng) {
    if (pointer_ >= limit()) return std::nullopt;
    if (pointer_ == revealed_) {
        const auto r = static_cast<std::size_t>(revealed_);
        const std::size_t idx = r + rng.below(items_.size() - r);
        std::swap(items_[r], items_[idx]);
        ++revealed_;
    }
    return items_[static_cast<std::size_t>(pointer_)];
}

void HamiltonInstance::finalize() {
    for (auto& s : in_sets) std::sort(s.begin(), s.end());
    in_supporters.assign(static_cast<std::size_t>(n), {});
    for (Vertex u = 0; u < n; ++u)
        for (const Vertex w : in_sets[static_cast<std::size_t>(u)])
            in_supporters[static_cast<std::size_t>(w)].push_back(u);
}

namespace {

std::vector<Vertex> make_candidates(std::int32_t n, Vertex v, std::int32_t m,
                                    AdversaryMode mode, Rng& rng) {
    std::vector<Vertex> cand;
    cand.reserve(static_cast<std::size_t>(m));
    switch (mode) {
        case AdversaryMode::Uniform: {
            std::vector<Vertex> others;
            others.reserve(static_cast<std::size_t>(n - 1));
            for (Vertex w = 0; w < n; ++w)
                if (w != v) others.push_back(w);
            rng.partial_shuffle(others, static_cast<std::size_t>(m));
            others.resize(static_cast<std::size_t>(m));
            return others;
        }
        case AdversaryMode::BlockExclusion:
            for (std::int32_t i = 1; i <= m; ++i) cand.push_back((v + i) % n);
            return cand;
        case AdversaryMode::Targeted:
            for (Vertex w = 0; w < n && static_cast<std::int32_t>(cand.size()) < m; ++w)
                if (w != v) cand.push_back(w);
            return cand;
    }
    return cand;
}

}  // namespace

HamiltonInstance model_init(const ModelConfig& cfg, Rng& rng) {
    cfg.validate();
    HamiltonInstance inst;
    inst.n = cfg.n;
    inst.alpha = cfg.alpha;
    inst.K = cfg.k_value();
    inst.integrated = false;
    inst.out.reserve(static_cast<std::size_t>(cfg.n));
    inst.in_sets.resize(static_cast<std::size_t>(cfg.n));
    const std::int32_t m = cfg.candidate_size();

    for (Vertex v = 0; v < cfg.n; ++v) {
        std::vector<Vertex> a_cand = make_candidates(cfg.n, v, m, cfg.adversary, rng);
        std::vector<Vertex> b_cand = make_candidates(cfg.n, v, m, cfg.adversary, rng);
        rng.partial_shuffle(a_cand, static_cast<std::size_t>(inst.K));
        a_cand.resize(static_cast<std::size_t>(inst.K));
        inst.in_sets[static_cast<std::size_t>(v)] = std::move(a_cand);
        inst.out.push_back(OutList::lazy(std::move(b_cand), inst.K));
    }
    inst.finalize();
    return inst;
}

HamiltonInstance from_maker_graph(const GameState& game) {
    const std::int32_t target = game.config().degree_target();
    for (Vertex v = 0; v < game.n(); ++v) {
        if (game.dM_out(v) < target || game.dM_in(v) < target)
            fail(Errc::DegreePhaseIncomplete,
                 "vertex " + std::to_string(v) + " below degree target " +
                     std::to_string(target));
    }
    HamiltonInstance inst;
    inst.n = game.n();
    inst.alpha = game.config().alpha;
    inst.K = target;
    inst.integrated = true;
    inst.out.reserve(static_cast<std::size_t>(inst.n));
    inst.in_sets.resize(static_cast<std::size_t>(inst.n));
    for (Vertex v = 0; v < inst.n; ++v) {
        inst.out.push_back(OutList::pre_revealed(game.maker_out_adj(v)));
        inst.in_sets[static_cast<std::size_t>(v)] = game.maker_in_adj(v);
    }
    inst.finalize();
    return inst;
}

HamiltonInstance scripted_instance(std::int32_t n, double alpha,
                                   std::vector<std::vector<Vertex>> out_lists,
                                   std::vector<std::vector<Vertex>> in_sets) {
    HamiltonInstance inst;
    inst.n = n;
    inst.alpha = alpha;
    inst.integrated = true;
    std::size_t longest = 1;
    for (const auto& l : out_lists) longest = std::max(longest, l.size());
    inst.K = static_cast<std::int32_t>(longest);
    inst.out.reserve(out_lists.size());
    for (auto& l : out_lists) inst.out.push_back(OutList::pre_revealed(std::move(l)));
    inst.in_sets = std::move(in_sets);
    inst.in_sets.resize(static_cast<std::size_t>(n));
    inst.finalize();
    return inst;
}

const char* to_string(StepCase c) noexcept {
    switch (c) {
        case StepCase::Skip: return "SKIP";
        case StepCase::Extend: return "1";
        case StepCase::MergeCycle: return "2a";
        case StepCase::Rotate: return "2b";
        case StepCase::RotateAbsorb: return "2c";
        case StepCase::Advance: return "ADV";
        case StepCase::EndClose: return "END-CLOSE";
        case StepCase::EndRotate: return "END-ROT";
        case StepCase::EndMerge: return "END-MERGE";
    }
    return "?";
}

const char* to_string(BuildResult::Status s) noexcept {
    switch (s) {
        case BuildResult::Status::Hamilton: return "hamilton";
        case BuildResult::Status::ListExhausted: return "list-exhausted";
        case BuildResult::Status::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

HamiltonBuilder::HamiltonBuilder(HamiltonInstance& inst, Rng& rng, BuilderOptions opts)
    : inst_(&inst), rng_(&rng), opts_(opts) {
    const auto n = static_cast<std::size_t>(inst.n);
    two_alpha_n_ = 2.0 * inst.alpha * static_cast<double>(inst.n);
    pos_path_.assign(n, -1);
    pos_cycle_.assign(n, -1);
    in_u_.assign(n, 1);
    support_count_.assign(n, 0);
    stats_.per_level.assign(n + 1, 0);

    const double theta = static_cast<double>(inst.K) / std::log(static_cast<double>(inst.n));
    stats_.p_extend_ref = inst.alpha;
    stats_.p_mid_ref = inst.alpha * (1.0 - inst.alpha) * (1.0 / 40.0 - inst.alpha);
    stats_.p_small_coeff_ref =
        inst.alpha * (1.0 - inst.alpha) * std::sqrt(theta) / (6.0 * static_cast<double>(inst.n));

    // P = (s_P), C = empty, U = [n] \ {s_P}; s_P is vertex 0
    path_.reserve(n);
    path_.push_back(0);
    pos_path_[0] = 0;
    in_u_[0] = 0;
    u_size_ = inst.n - 1;
    for (Vertex u = 0; u < inst.n; ++u) {
        if (!in_u_[static_cast<std::size_t>(u)]) continue;
        for (const Vertex w : inst.in_sets[static_cast<std::size_t>(u)])
            ++support_count_[static_cast<std::size_t>(w)];
    }
    for (Vertex v = 0; v < inst.n; ++v)
        if (in_ubar(v)) ++ubar_size_;
    maybe_snapshot();
}

std::vector<Vertex> HamiltonBuilder::ubar_star() const {
    std::vector<Vertex> s;
    for (Vertex v = 0; v < inst_->n; ++v)
        if (in_ubar(v)) s.push_back(v);
    return s;
}

void HamiltonBuilder::remove_from_u(Vertex u) {
    for (const Vertex w : inst_->in_sets[static_cast<std::size_t>(u)]) {
        const auto wi = static_cast<std::size_t>(w);
        if (--support_count_[wi] == 0 && !in_u_[wi]) --ubar_size_;
    }
    in_u_[static_cast<std::size_t>(u)] = 0;
    --u_size_;
    if (support_count_[static_cast<std::size_t>(u)] > 0) ++ubar_size_;
    maybe_snapshot();
}

void HamiltonBuilder::extend(Vertex y) {
    pos_path_[static_cast<std::size_t>(y)] = static_cast<std::int32_t>(path_.size());
    path_.push_back(y);
    remove_from_u(y);
}

void HamiltonBuilder::merge_cycle(Vertex y) {
    const auto k = static_cast<std::int32_t>(cycle_.size());
    const std::int32_t j = pos_cycle_[static_cast<std::size_t>(y)];
    for (std::int32_t t = 0; t < k; ++t) {
        const Vertex v = cycle_[static_cast<std::size_t>((j + t) % k)];
        pos_path_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(path_.size());
        path_.push_back(v);
        pos_cycle_[static_cast<std::size_t>(v)] = -1;
    }
    cycle_.clear();
}

void HamiltonBuilder::rotate(std::int32_t iy) {
    const auto start = static_cast<std::size_t>(iy);
    cycle_.assign(path_.begin() + static_cast<std::ptrdiff_t>(start), path_.end());
    for (std::size_t t = 0; t < cycle_.size(); ++t) {
        const Vertex v = cycle_[t];
        pos_cycle_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(t);
        pos_path_[static_cast<std::size_t>(v)] = -1;
    }
    path_.resize(start);
}

Vertex HamiltonBuilder::absorb_candidate(Vertex x) const {
    for (const Vertex u : inst_->in_supporters[static_cast<std::size_t>(x)])
        if (in_u_[static_cast<std::size_t>(u)]) return u;  // supporters are sorted
    return -1;
}

std::optional<Vertex> HamiltonBuilder::reveal() {
    const Vertex f = path_.back();
    auto y = inst_->out[static_cast<std::size_t>(f)].current(*rng_);
    if (!y) return std::nullopt;
    inst_->out[static_cast<std::size_t>(f)].advance();
    ++stats_.trials;
    return y;
}

StepOutcome HamiltonBuilder::step() {
    StepOutcome o;
    o.from = path_.back();
    const std::int64_t progress =
        static_cast<std::int64_t>(path_.size()) + static_cast<std::int64_t>(cycle_.size());
    const auto y_opt = reveal();
    if (!y_opt) {
        o.status = StepOutcome::Status::Exhausted;
        return o;
    }
    ++stats_.per_level[static_cast<std::size_t>(progress)];
    const Vertex y = *y_opt;
    o.revealed = y;

    bool mutated = true;
    if (y == path_.front()) {
        o.kase = StepCase::Skip;
        mutated = false;
    } else if (static_cast<double>(u_size_) >= two_alpha_n_) {
        if (in_u_[static_cast<std::size_t>(y)]) {
            extend(y);
            o.kase = StepCase::Extend;
        } else {
            o.kase = StepCase::Advance;
            mutated = false;
        }
    } else if (!cycle_.empty()) {
        if (pos_cycle_[static_cast<std::size_t>(y)] >= 0) {
            merge_cycle(y);
            o.kase = StepCase::MergeCycle;
        } else {
            o.kase = StepCase::Advance;
            mutated = false;
        }
    } else if (pos_path_[static_cast<std::size_t>(y)] >= 0) {
        const std::int32_t iy = pos_path_[static_cast<std::size_t>(y)];
        const std::int32_t dist = static_cast<std::int32_t>(path_.size()) - 1 - iy;
        if (static_cast<double>(dist) >= two_alpha_n_) {
            const Vertex x = path_[static_cast<std::size_t>(iy) - 1];
            if (!in_ubar(x)) {
                rotate(iy);
                o.kase = StepCase::Rotate;
            } else {
                const Vertex u = absorb_candidate(x);
                rotate(iy);
                extend(u);
                o.kase = StepCase::RotateAbsorb;
            }
        } else {
            o.kase = StepCase::Advance;
            mutated = false;
        }
    } else {
        // y in U while |U| < 2*alpha*n: no case applies
        o.kase = StepCase::Advance;
        mutated = false;
    }

    verify_invariants(mutated);
    trace_line(o);
    return o;
}

StepOutcome HamiltonBuilder::endgame_step() {
    StepOutcome o;
    o.from = path_.back();

    // The closing edge (f_P, s_P) may already exist through the materialized
    // in-neighborhood of s_P; that costs no reveal.
    if (cycle_.empty()) {
        const auto& in_s = inst_->in_sets[static_cast<std::size_t>(path_.front())];
        if (std::binary_search(in_s.begin(), in_s.end(), path_.back())) {
            hamilton_ = path_;
            done_ = true;
            o.kase = StepCase::EndClose;
            o.revealed = path_.front();
            verify_invariants(false);
            trace_line(o);
            return o;
        }
    }

    const auto y_opt = reveal();
    if (!y_opt) {
        o.status = StepOutcome::Status::Exhausted;
        return o;
    }
    ++stats_.endgame_trials;
    const Vertex y = *y_opt;
    o.revealed = y;

    bool mutated = true;
    if (!cycle_.empty()) {
        if (pos_cycle_[static_cast<std::size_t>(y)] >= 0) {
            merge_cycle(y);
            o.kase = StepCase::EndMerge;
        } else {
            o.kase = StepCase::Advance;
            mutated = false;
        }
    } else if (y == path_.front()) {
        hamilton_ = path_;
        done_ = true;
        o.kase = StepCase::EndClose;
        mutated = false;
    } else {
        const std::int32_t iy = pos_path_[static_cast<std::size_t>(y)];
        const std::int32_t dist = static_cast<std::int32_t>(path_.size()) - 1 - iy;
        if (opts_.strict_endgame_distance && static_cast<double>(dist) < two_alpha_n_) {
            o.kase = StepCase::Advance;
            mutated = false;
        } else {
            rotate(iy);
            o.kase = StepCase::EndRotate;
        }
    }

    verify_invariants(mutated);
    trace_line(o);
    return o;
}

void HamiltonBuilder::maybe_snapshot() {
    if (u_size_ >= 1 && static_cast<double>(u_size_) < two_alpha_n_) {
        stats_.snapshots.emplace_back(static_cast<std::int32_t>(u_size_),
                                      static_cast<std::int32_t>(ubar_size_));
        if (opts_.trace) *opts_.trace << u_size_ << ' ' << ubar_size_ << '\n';
    }
}

void HamiltonBuilder::verify_invariants(bool mutated) {
    // Cycle-size invariant, main phase only: |C| = 0 or |C| >= 2*alpha*n.
    if (u_size_ > 0 && !cycle_.empty() &&
        static_cast<double>(cycle_.size()) < two_alpha_n_) {
        ++invariant_violations_;
    }
    if (!mutated || !opts_.check_invariants) return;

    // Full partition check. Steps that only advance a pointer do not touch
    // the state, so checking after every mutation covers every step.
    std::int64_t on_path = 0, on_cycle = 0, in_u = 0;
    bool ok = path_.size() + cycle_.size() + static_cast<std::size_t>(u_size_) ==
              static_cast<std::size_t>(inst_->n);
    for (Vertex v = 0; v < inst_->n && ok; ++v) {
        const auto vi = static_cast<std::size_t>(v);
        const int places = (pos_path_[vi] >= 0 ? 1 : 0) + (pos_cycle_[vi] >= 0 ? 1 : 0) +
                           (in_u_[vi] ? 1 : 0);
        if (places != 1) ok = false;
        if (pos_path_[vi] >= 0) {
            ++on_path;
            if (static_cast<std::size_t>(pos_path_[vi]) >= path_.size() ||
                path_[static_cast<std::size_t>(pos_path_[vi])] != v)
                ok = false;
        }
        if (pos_cycle_[vi] >= 0) {
            ++on_cycle;
            if (static_cast<std::size_t>(pos_cycle_[vi]) >= cycle_.size() ||
                cycle_[static_cast<std::size_t>(pos_cycle_[vi])] != v)
                ok = false;
        }
        if (in_u_[vi]) ++in_u;
    }
    if (ok) {
        ok = on_path == static_cast<std::int64_t>(path_.size()) &&
             on_cycle == static_cast<std::int64_t>(cycle_.size()) && in_u == u_size_;
    }
    if (!ok) ++invariant_violations_;
}

void HamiltonBuilder::trace_line(const StepOutcome& o) {
    if (!opts_.trace) return;
    *opts_.trace << stats_.trials << ' ' << o.from << ' ' << o.revealed << ' '
                 << to_string(o.kase) << ' ' << u_size_ << ' ' << cycle_.size() << ' '
                 << path_.size() << '\n';
}

BuildResult run_builder(HamiltonInstance& inst, Rng& rng, double budget_factor,
                        BuilderOptions opts) {
    HamiltonBuilder b(inst, rng, opts);
    const auto budget =
        static_cast<std::int64_t>(std::ceil(budget_factor * static_cast<double>(inst.n)));
    BuildResult r;
    while (!b.done()) {
        if (b.stats().trials >= budget) {
            r.status = BuildResult::Status::BudgetExceeded;
            break;
        }
        const StepOutcome o = b.advance_any();
        if (o.status == StepOutcome::Status::Exhausted) {
            r.status = BuildResult::Status::ListExhausted;
            r.exhausted_vertex = o.from;
            break;
        }
    }
    if (b.done()) {
        r.status = BuildResult::Status::Hamilton;
        r.cycle = b.hamilton_cycle();
    }
    r.stats = b.stats();
    r.invariant_violations = b.invariant_violations();
    for (Vertex v = 0; v < inst.n; ++v)
        if (inst.out[static_cast<std::size_t>(v)].fully_consumed()) ++r.stats.exhausted_lists;
    return r;
}

bool validate_hamilton_cycle(const HamiltonInstance& inst, const std::vector<Vertex>& cycle,
                             std::string* why) {
    auto reject = [&](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };
    if (static_cast<std::int32_t>(cycle.size()) != inst.n)
        return reject("cycle has " + std::to_string(cycle.size()) + " vertices, expected " +
                      std::to_string(inst.n));
    std::vector<char> seen(static_cast<std::size_t>(inst.n), 0);
    for (const Vertex v : cycle) {
        if (v < 0 || v >= inst.n) return reject("vertex out of range");
        if (seen[static_cast<std::size_t>(v)]) return reject("vertex visited twice");
        seen[static_cast<std::size_t>(v)] = 1;
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const Vertex v = cycle[i];
        const Vertex w = cycle[(i + 1) % cycle.size()];
        const auto revealed = inst.out[static_cast<std::size_t>(v)].revealed_entries();
        const bool out_edge = std::find(revealed.begin(), revealed.end(), w) != revealed.end();
        const auto& in_w = inst.in_sets[static_cast<std::size_t>(w)];
        const bool in_edge = std::binary_search(in_w.begin(), in_w.end(), v);
        if (!out_edge && !in_edge)
            return reject("hop (" + std::to_string(v) + "," + std::to_string(w) +
                          ") is not a revealed edge");
    }
    return true;
}

CpstarReport cpstar_check(const TrialStats& stats, std::int32_t n, double theta,
                          double relax) {
    CpstarReport rep;
    rep.relax = relax;
    const double ln_n = std::log(static_cast<double>(n));
    rep.u_threshold = static_cast<double>(n) / (theta * ln_n);
    for (const auto& [u, ubar] : stats.snapshots) {
        if (u < 1) continue;
        if (static_cast<double>(u) >= rep.u_threshold) {
            ++rep.checked_big;
            if (static_cast<double>(ubar) < relax * static_cast<double>(n) / 20.0)
                ++rep.violations_big;
        } else {
            ++rep.checked_small;
            if (static_cast<double>(ubar) <
                relax * std::sqrt(theta) * static_cast<double>(u) * ln_n)
                ++rep.violations_small;
        }
    }
    return rep;
}

}  // namespace digame
