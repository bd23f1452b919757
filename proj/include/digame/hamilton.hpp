#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "digame/error.hpp"
#include "digame/game.hpp"
#include "digame/rng.hpp"

namespace digame {

// How the adversary picks the candidate sets A(v), B(v) of size
// ceil((1-alpha)n) that IN(v)/OUT(v) are drawn from.
enum class AdversaryMode {
    Uniform,         // uniform random subsets of [n] \ {v}
    BlockExclusion,  // exclude a contiguous block just "behind" v, shifted per vertex
    Targeted,        // exclude a common top block for every vertex
};

AdversaryMode parse_adversary(std::string_view name);
const char* to_string(AdversaryMode m) noexcept;

struct ModelConfig {
    std::int32_t n = 0;
    double alpha = 0.1;
    double theta = 5.0;     // K = ceil(theta * ln n) unless K set explicitly
    std::int32_t K = 0;
    AdversaryMode adversary = AdversaryMode::Uniform;
    std::uint64_t seed = 0;

    std::int32_t k_value() const {
        if (K > 0) return K;
        return static_cast<std::int32_t>(std::ceil(theta * std::log(static_cast<double>(n))));
    }
    std::int32_t candidate_size() const {
        return static_cast<std::int32_t>(std::ceil((1.0 - alpha) * static_cast<double>(n)));
    }
    void validate() const;
};

// OUT(v): a lazily revealed random ordering of up to K draws from B(v),
// with a pointer to the next entry to examine. Revealing draws uniformly
// from the unrevealed remainder, which matches a pre-committed random
// K-subset in random order. Pre-revealed lists (builder on a Maker graph,
// scripted fixtures) skip the draws.
class OutList {
public:
    static OutList lazy(std::vector<Vertex> pool, std::int32_t budget);
    static OutList pre_revealed(std::vector<Vertex> entries);

    // Entry at the pointer, revealing it first if necessary; nullopt once
    // the list is exhausted.
    std::optional<Vertex> current(Rng& rng);
    void advance() { ++pointer_; }

    std::int32_t limit() const {
        return std::min(budget_, static_cast<std::int32_t>(items_.size()));
    }
    bool exhausted() const { return pointer_ >= limit(); }
    bool fully_consumed() const { return pointer_ >= limit(); }
    std::int32_t revealed_count() const { return revealed_; }
    std::int32_t pointer() const { return pointer_; }
    std::int32_t budget() const { return budget_; }
    std::int32_t pool_size() const { return static_cast<std::int32_t>(items_.size()); }
    std::span<const Vertex> revealed_entries() const {
        return {items_.data(), static_cast<std::size_t>(revealed_)};
    }

private:
    std::vector<Vertex> items_;
    std::int32_t revealed_ = 0;
    std::int32_t pointer_ = 0;
    std::int32_t budget_ = 0;
};

// One runnable instance: OUT lists, materialized IN sets, and the reverse
// index used to maintain Ubar*.
struct HamiltonInstance {
    std::int32_t n = 0;
    double alpha = 0.0;
    std::int32_t K = 0;
    bool integrated = false;  // built from a Maker graph
    std::vector<OutList> out;
    std::vector<std::vector<Vertex>> in_sets;        // IN(v), sorted
    std::vector<std::vector<Vertex>> in_supporters;  // v -> { u : v in IN(u) }

    void finalize();  // builds in_supporters, sorts in_sets
};

HamiltonInstance model_init(const ModelConfig& cfg, Rng& rng);

// Builder input taken from a finished degree phase: OUT(v) is Maker's
// out-neighborhood in acquisition order (already revealed), IN(v) his
// in-neighborhood. Throws DegreePhaseIncomplete below min degree K.
HamiltonInstance from_maker_graph(const GameState& game);

// Fixture helper: fully scripted, pre-revealed lists.
HamiltonInstance scripted_instance(std::int32_t n, double alpha,
                                   std::vector<std::vector<Vertex>> out_lists,
                                   std::vector<std::vector<Vertex>> in_sets);

enum class StepCase {
    Skip,          // y == s_P in the main phase: pointer advance only
    Extend,        // Case 1
    MergeCycle,    // Case 2a
    Rotate,        // Case 2b
    RotateAbsorb,  // Case 2c
    Advance,       // no case applied
    EndClose,      // endgame: y == s_P closes the Hamilton cycle
    EndRotate,     // endgame rotation (distance constraint waived by default)
    EndMerge,      // endgame merge back to one path
};

const char* to_string(StepCase c) noexcept;

struct StepOutcome {
    enum class Status { Ok, Exhausted };
    Status status = Status::Ok;
    StepCase kase = StepCase::Advance;
    Vertex from = -1;      // f_P whose list was examined
    Vertex revealed = -1;  // y (unset when exhausted)
};

// Per-run trial accounting. X_i counts reveals spent while |P|+|C| == i;
// total trials = sum(X_i) + endgame_trials. Snapshots record (|U|, |Ubar*|)
// after each change of U inside the |U| < 2*alpha*n regime.
struct TrialStats {
    std::int64_t trials = 0;
    std::vector<std::int64_t> per_level;
    std::int64_t endgame_trials = 0;
    std::vector<std::pair<std::int32_t, std::int32_t>> snapshots;
    std::int32_t exhausted_lists = 0;
    // reference success probabilities from the analysis, recorded only
    double p_extend_ref = 0;      // alpha
    double p_mid_ref = 0;         // alpha(1-alpha)(1/40 - alpha)
    double p_small_coeff_ref = 0; // alpha(1-alpha)theta^{1/2}/(6n), times |U|
};

struct BuilderOptions {
    bool check_invariants = false;
    // Endgame rotations keep the 2*alpha*n distance guard by default: waiving
    // it creates short cycles whose merge-back odds are far below the
    // per-vertex reveal budget, and runs die of list exhaustion.
    bool strict_endgame_distance = true;
    std::ostream* trace = nullptr;
};

// Rotation-extension path/cycle builder over deferred OUT lists. State is a
// path P from s_P to f_P, an optional cycle C disjoint from it, and
// U = [n] \ (V(P) u V(C)); Ubar* = { v not in U : exists u in U with
// v in IN(u) } is maintained incrementally.
class HamiltonBuilder {
public:
    HamiltonBuilder(HamiltonInstance& inst, Rng& rng, BuilderOptions opts = {});

    // Main-phase step (pre: U nonempty): examines y = out(f_P) and applies
    // the first matching case; otherwise advances the pointer.
    StepOutcome step();
    // Endgame step (pre: U empty): closes on y == s_P, rotates or merges.
    StepOutcome endgame_step();
    StepOutcome advance_any() { return u_size() > 0 ? step() : endgame_step(); }

    bool done() const { return done_; }
    const std::vector<Vertex>& hamilton_cycle() const { return hamilton_; }

    const std::vector<Vertex>& path() const { return path_; }
    const std::vector<Vertex>& cycle() const { return cycle_; }
    Vertex start_vertex() const { return path_.front(); }
    Vertex finish_vertex() const { return path_.back(); }
    bool in_u(Vertex v) const { return in_u_[static_cast<std::size_t>(v)] != 0; }
    std::int64_t u_size() const { return u_size_; }

    std::int64_t ubar_size() const { return ubar_size_; }
    std::vector<Vertex> ubar_star() const;  // sorted

    const TrialStats& stats() const { return stats_; }
    std::int64_t invariant_violations() const { return invariant_violations_; }

private:
    std::optional<Vertex> reveal();
    void remove_from_u(Vertex u);
    void extend(Vertex y);
    void merge_cycle(Vertex y);
    void rotate(std::int32_t iy);
    Vertex absorb_candidate(Vertex x) const;  // lowest-id u in U with x in IN(u)
    bool in_ubar(Vertex v) const {
        return !in_u_[static_cast<std::size_t>(v)] &&
               support_count_[static_cast<std::size_t>(v)] > 0;
    }
    void maybe_snapshot();
    void verify_invariants(bool mutated);
    void trace_line(const StepOutcome& o);

    HamiltonInstance* inst_;
    Rng* rng_;
    BuilderOptions opts_;
    double two_alpha_n_ = 0;

    std::vector<Vertex> path_, cycle_;
    std::vector<std::int32_t> pos_path_, pos_cycle_;
    std::vector<char> in_u_;
    std::int64_t u_size_ = 0;
    std::vector<std::int32_t> support_count_;  // |{u in U : v in IN(u)}|
    std::int64_t ubar_size_ = 0;

    bool done_ = false;
    std::vector<Vertex> hamilton_;
    TrialStats stats_;
    std::int64_t invariant_violations_ = 0;
};

struct BuildResult {
    enum class Status { Hamilton, ListExhausted, BudgetExceeded };
    Status status = Status::BudgetExceeded;
    std::vector<Vertex> cycle;
    Vertex exhausted_vertex = -1;
    TrialStats stats;
    std::int64_t invariant_violations = 0;
};

const char* to_string(BuildResult::Status s) noexcept;

// Runs the builder until a Hamilton cycle, a list exhaustion, or
// budget_factor * n total reveals.
BuildResult run_builder(HamiltonInstance& inst, Rng& rng, double budget_factor = 40.0,
                        BuilderOptions opts = {});

// Independent cycle check: a permutation of [n] whose every hop (v, w) is a
// revealed OUT entry of v or has v in IN(w). Reads only raw instance data.
bool validate_hamilton_cycle(const HamiltonInstance& inst, const std::vector<Vertex>& cycle,
                             std::string* why = nullptr);

// Empirical monitor for the lower bound on |Ubar*|: in the |U| < 2*alpha*n
// regime it should be at least n/20 when |U| >= n/(theta ln n) and at least
// theta^{1/2} |U| ln n below that, scaled by relax in (0, 1].
struct CpstarReport {
    double relax = 1.0;
    double u_threshold = 0;  // n / (theta ln n)
    std::int64_t checked_big = 0, violations_big = 0;
    std::int64_t checked_small = 0, violations_small = 0;

    std::int64_t checked() const { return checked_big + checked_small; }
    std::int64_t violations() const { return violations_big + violations_small; }
    double violation_fraction() const {
        return checked() == 0 ? 0.0
                              : static_cast<double>(violations()) / static_cast<double>(checked());
    }
};

CpstarReport cpstar_check(const TrialStats& stats, std::int32_t n, double theta, double relax);

}  // namespace digame
