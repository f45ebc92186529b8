#ifndef SCHEDLAB_PLA_PLA_HPP
#define SCHEDLAB_PLA_PLA_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "schedlab/genie/replay.hpp"
#include "schedlab/moo/pareto.hpp"
#include "schedlab/objectives.hpp"
#include "schedlab/sim/env.hpp"
#include "schedlab/sim/kpi.hpp"

namespace schedlab::pla {

// One partial schedule: the action prefix (1-based UE per TTI; 0 marks a
// forced idle TTI), the replayed environment it leads to, and the running
// KPI triple over the prefix.
struct SearchPath {
    std::vector<int32_t> actions;
    sim::Environment env;
    sim::KpiWindow window;
    Objectives obj;
    uint64_t fingerprint = 0;  // hash of the environment snapshot
};

struct PlaConfig {
    uint32_t list_size = 200;  // L
    uint32_t horizon = 0;      // N TTIs; 0 = full trace length
    moo::Weights weights{};

    void validate() const;
};

// Each path spawns one child per UE active in its own state, or a single idle
// child when none is; children advance one TTI on the shared trace.
std::vector<SearchPath> expand(const std::vector<SearchPath>& paths);

// Removes duplicates with identical (fingerprint, objective triple); the
// lexicographically smallest action prefix survives. Order is preserved.
void dedupe(std::vector<SearchPath>& paths);

// Keeps min(limit, |paths|) paths: whole nondominated fronts first, the
// splitting front filtered by descending crowding distance.
void prune(std::vector<SearchPath>& paths, size_t limit);

struct PlaResult {
    std::vector<SearchPath> final_list;
    size_t selected = 0;  // index into final_list, by the weighted preference
};

// expand -> dedupe -> prune, TTI by TTI over the window. Single-RBG only.
PlaResult pla_run(const genie::ReplayContext& ctx, const PlaConfig& cfg);

// Evaluates every reachable action sequence (one branch per active UE, idle
// only when forced) and returns the nondominated outcomes with one witness
// sequence each (the lexicographically smallest), unique by objective triple.
// Refuses instances with K^horizon > 10^6. Single-RBG only.
std::vector<std::pair<std::vector<int32_t>, Objectives>> exhaustive_search(
    const genie::ReplayContext& ctx, uint32_t horizon);

}  // namespace schedlab::pla

#endif
