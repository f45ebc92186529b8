#ifndef SCHEDLAB_GENIE_REPLAY_HPP
#define SCHEDLAB_GENIE_REPLAY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "schedlab/objectives.hpp"
#include "schedlab/sim/env.hpp"

namespace schedlab::genie {

// Deterministic replay of action sequences over one scheduling window: a
// starting state (snapshot) plus the window's pregenerated randomness. Both
// genie searches and the PF reference leg score sequences through this, so
// every comparison shares the exact same exogenous world.
struct ReplayContext {
    sim::SimConfig cfg;
    std::vector<uint8_t> init_blob;  // snapshot of the window's starting state
    sim::GenieTrace trace;

    // Fresh environment positioned at the start of the window.
    sim::Environment make_env() const {
        return sim::Environment::restore(cfg, init_blob, &trace);
    }

    // Builds the context from a live environment: snapshots it and
    // pregenerates n_ttis of randomness.
    static ReplayContext from_env(const sim::Environment& env, uint32_t n_ttis);

    // Replays a sequence of 1-based UE actions, one gene per (TTI, RBG) in
    // row-major order (length = num_ttis * num_rbgs). Actions on empty-buffer
    // UEs replay as idle. Returns the window KPI triple.
    Objectives replay(std::span<const int32_t> actions_1based) const;
};

// Causal PF reference over the same window: what the baseline achieves on the
// exact exogenous world the genie searches.
Objectives pf_replay(const ReplayContext& ctx);

}  // namespace schedlab::genie

#endif
