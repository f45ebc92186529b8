#ifndef SCHEDLAB_RL_OBS_HPP
#define SCHEDLAB_RL_OBS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <deque>
#include <vector>

#include "schedlab/sim/env.hpp"
#include "schedlab/sim/kpi.hpp"

namespace schedlab::rl {

// Intra-TTI queue view for iterative policy reuse across RBGs: each prior
// allocation's expected service (rate x (1-bler)) is pre-drained from a copy
// of the packet lists, so later RBGs see adjusted activity, spare space, and
// head-of-line waits. The environment itself is untouched.
class TtiView {
public:
    explicit TtiView(const sim::Environment& env);

    void allocate(uint32_t ue, double expected_bits);

    bool active(uint32_t ue) const { return !queues_[ue].empty(); }
    bool any_active() const;
    uint32_t spare(uint32_t ue) const {
        return capacity_ - static_cast<uint32_t>(queues_[ue].size());
    }
    uint64_t hol_wait(uint32_t ue) const {
        return queues_[ue].empty() ? 0 : now_ - queues_[ue].front().arrival_tti;
    }
    std::vector<uint8_t> active_mask() const;

private:
    struct Pkt {
        double remaining_bits;
        uint64_t arrival_tti;
    };
    std::vector<std::deque<Pkt>> queues_;
    uint64_t now_ = 0;
    uint32_t capacity_ = 0;
};

// Per-UE feature quadruple (inst rate, avg rate, spare buffer, HoL wait),
// flattened to length 4K in UE order, every feature normalized into [0, 1]:
// rates by the single-RBG max MCS rate, spare by capacity, wait by max_delay.
Eigen::VectorXd build_obs(const sim::Environment& env, const TtiView& view, uint32_t rbg);

// Eq. 2-style per-TTI reward: alpha * (TTI served bits / max single-TTI
// service) + beta * JFI(window-cumulative per-UE bits) - delta * (TTI dropped
// packets / K). The JFI term looks at a sliding window of recent service.
class RewardTracker {
public:
    RewardTracker(const sim::SimConfig& sim_cfg, uint32_t window, double alpha, double beta,
                  double delta);

    // Feeds one TTI's record and returns its reward.
    double add(const sim::KpiRecord& rec);

    double last_jfi() const { return last_jfi_; }

private:
    double max_service_;  // bits per TTI across all RBGs at the top MCS
    uint32_t num_ues_;
    uint32_t window_;
    double alpha_, beta_, delta_;
    std::deque<std::vector<double>> ring_;  // per-TTI served bits, newest last
    std::vector<double> cumulative_;        // per-UE sum over the ring
    double last_jfi_ = 1.0;
};

}  // namespace schedlab::rl

#endif
