#ifndef SCHEDLAB_SIM_ENV_HPP
#define SCHEDLAB_SIM_ENV_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "schedlab/sim/buffer.hpp"
#include "schedlab/sim/config.hpp"
#include "schedlab/sim/decision.hpp"
#include "schedlab/sim/kpi.hpp"
#include "schedlab/sim/link_adapt.hpp"
#include "schedlab/sim/trace.hpp"

namespace schedlab::sim {

// TTI-stepped downlink cell. Two sources of exogenous randomness, never mixed:
// live mode draws from the internal engine; replay mode reads a GenieTrace and
// leaves the engine untouched. Within a TTI the draws are consumed in a pinned
// order independent of the decision (arrivals per UE, then BLER uniforms per
// (UE, RBG), then the fading redraw when due), so a live run and a trace replay
// of the same action sequence are bit-identical, and two action sequences from
// the same state see the same randomness.
class Environment {
public:
    // Live mode. Requires cfg.mean_snr_per_ue to be materialized (size K).
    explicit Environment(const SimConfig& cfg);

    // Replay mode: exogenous randomness comes from `trace` (not owned; must
    // outlive the environment and all its copies). Replay starts at row 0.
    Environment(const SimConfig& cfg, const GenieTrace* trace);

    // Advances one TTI. Throws std::invalid_argument on a malformed decision
    // (wrong width, UE out of range, or an assignment to an empty-buffer UE)
    // and std::runtime_error when a replay runs past the end of its trace.
    KpiRecord step(const Decision& decision);

    // Materializes the next N TTIs of exogenous randomness without disturbing
    // this environment (works on copies of the engine and channel state).
    GenieTrace pregenerate(uint32_t n_ttis) const;

    // Versioned binary state blob; restore validates the config hash and, for
    // blobs taken in replay mode, the trace hash.
    std::vector<uint8_t> snapshot() const;
    static Environment restore(const SimConfig& cfg, const std::vector<uint8_t>& blob,
                               const GenieTrace* trace = nullptr);

    // --- observation surface ---
    const SimConfig& config() const { return cfg_; }
    uint32_t num_ues() const { return cfg_.num_ues; }
    uint32_t num_rbgs() const { return cfg_.num_rbgs; }
    uint64_t tti() const { return tti_; }

    // Post-link-adaptation rate estimate for (ue, rbg) at the current state,
    // bits/TTI. Zero when no MCS fits.
    double inst_rate(uint32_t ue, uint32_t rbg) const;
    double avg_thp(uint32_t ue) const { return avg_thp_[ue]; }
    double snr_db(uint32_t ue, uint32_t rbg) const { return snr_[idx(ue, rbg)]; }
    double olla_offset(uint32_t ue) const { return olla_offset_[ue]; }
    const UeBuffer& buffer(uint32_t ue) const { return buffers_[ue]; }
    bool active(uint32_t ue) const { return !buffers_[ue].empty(); }
    bool any_active() const;
    // TTIs the head-of-line packet has waited; 0 for an empty buffer.
    uint64_t hol_wait(uint32_t ue) const;

    // Rolling hash over every exogenous value consumed since construction or
    // restore; equal hashes certify that two runs saw identical randomness.
    uint64_t exog_hash() const { return exog_hash_; }

    bool replaying() const { return trace_ != nullptr; }

private:
    Environment() = default;

    size_t idx(uint32_t ue, uint32_t rbg) const { return size_t(ue) * cfg_.num_rbgs + rbg; }
    void init_channel();
    double draw_snr(uint32_t ue, std::mt19937_64& rng) const;
    void validate_decision(const Decision& decision) const;

    SimConfig cfg_;
    uint64_t tti_ = 0;
    std::mt19937_64 rng_;

    std::vector<UeBuffer> buffers_;
    std::vector<double> snr_;          // K*B, current fading realization, dB
    std::vector<double> olla_offset_;  // per UE, dB
    std::vector<double> avg_thp_;      // per UE EMA, bits/TTI

    const GenieTrace* trace_ = nullptr;
    uint32_t trace_pos_ = 0;

    uint64_t exog_hash_ = 0xcbf29ce484222325ULL;
};

// Copy of `base` ready to construct: when the base leaves mean_snr_per_ue
// empty, one mean SNR per UE is drawn uniformly from the deploy range using
// deploy_seed; rng_seed is set to env_seed; override_rbgs > 0 replaces
// num_rbgs. Validates the result.
SimConfig materialize_deployment(const SimConfig& base, uint64_t deploy_seed, uint64_t env_seed,
                                 uint32_t override_rbgs = 0);

}  // namespace schedlab::sim

#endif
