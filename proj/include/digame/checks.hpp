#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "digame/connectivity.hpp"
#include "digame/game.hpp"
#include "digame/hamilton.hpp"

namespace digame {
namespace checks {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Random-legal games with per-position verification: ownership disjointness,
// degree-counter consistency against a full recount, bipartite degree
// identities, turn accounting, danger monotonicity under Maker moves, and
// the incremental danger table against recomputation.
CheckResult engine_fuzz(std::int64_t games, std::int32_t n_min, std::int32_t n_max,
                        std::uint64_t seed);

// condense() against a transitive-closure mutual-reachability oracle on
// random digraphs with n <= 8; also checks DAG acyclicity and source/sink
// classification, and the boundary-component implication.
CheckResult scc_oracle(std::int64_t cases, std::uint64_t seed);

// Exhaustive expansion_check against an independent subset-enumeration
// oracle on random K-out/K-in digraphs.
CheckResult expansion_oracle(std::int64_t cases, std::int32_t n, std::int32_t K,
                             double alpha, std::uint64_t seed);

// Incremental Ubar* against the definitional double loop, sampled from live
// builder states.
CheckResult ubar_oracle(std::int64_t snapshots, std::int32_t n_max, std::uint64_t seed);

// Test-side oracle: Ubar* = { v not in U : exists u in U with v in IN(u) }
// recomputed from scratch.
std::vector<Vertex> ubar_star_bruteforce(const HamiltonInstance& inst,
                                         const std::vector<char>& in_u);

}  // namespace checks
}  // namespace digame
