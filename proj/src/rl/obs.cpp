#include "schedlab/rl/obs.hpp"

#include <algorithm>

namespace schedlab::rl {

TtiView::TtiView(const sim::Environment& env)
    : queues_(env.num_ues()), now_(env.tti()), capacity_(env.config().buffer_capacity) {
    for (uint32_t k = 0; k < env.num_ues(); ++k) {
        for (const auto& p : env.buffer(k).packets()) {
            queues_[k].push_back({p.remaining_bits, p.arrival_tti});
        }
    }
}

void TtiView::allocate(uint32_t ue, double expected_bits) {
    auto& q = queues_[ue];
    while (expected_bits > 0.0 && !q.empty()) {
        if (q.front().remaining_bits <= expected_bits) {
            expected_bits -= q.front().remaining_bits;
            q.pop_front();
        } else {
            q.front().remaining_bits -= expected_bits;
            expected_bits = 0.0;
        }
    }
}

bool TtiView::any_active() const {
    for (const auto& q : queues_)
        if (!q.empty()) return true;
    return false;
}

std::vector<uint8_t> TtiView::active_mask() const {
    std::vector<uint8_t> mask(queues_.size());
    for (size_t k = 0; k < queues_.size(); ++k) mask[k] = queues_[k].empty() ? 0 : 1;
    return mask;
}

Eigen::VectorXd build_obs(const sim::Environment& env, const TtiView& view, uint32_t rbg) {
    const auto& cfg = env.config();
    const uint32_t K = cfg.num_ues;
    const double rate_ref = cfg.max_rate();
    Eigen::VectorXd x(4 * K);
    for (uint32_t k = 0; k < K; ++k) {
        x[4 * k + 0] = std::min(env.inst_rate(k, rbg) / rate_ref, 1.0);
        x[4 * k + 1] = std::min(env.avg_thp(k) / rate_ref, 1.0);
        x[4 * k + 2] = static_cast<double>(view.spare(k)) / cfg.buffer_capacity;
        x[4 * k + 3] = std::min(static_cast<double>(view.hol_wait(k)) / cfg.max_delay, 1.0);
    }
    return x;
}

RewardTracker::RewardTracker(const sim::SimConfig& sim_cfg, uint32_t window, double alpha,
                             double beta, double delta)
    : max_service_(sim_cfg.max_rate() * sim_cfg.num_rbgs),
      num_ues_(sim_cfg.num_ues),
      window_(window == 0 ? 1 : window),
      alpha_(alpha),
      beta_(beta),
      delta_(delta),
      cumulative_(sim_cfg.num_ues, 0.0) {}

double RewardTracker::add(const sim::KpiRecord& rec) {
    ring_.push_back(rec.served_bits);
    for (uint32_t k = 0; k < num_ues_; ++k) cumulative_[k] += rec.served_bits[k];
    if (ring_.size() > window_) {
        for (uint32_t k = 0; k < num_ues_; ++k) cumulative_[k] -= ring_.front()[k];
        ring_.pop_front();
    }

    double served = 0.0;
    uint32_t dropped = 0;
    for (uint32_t k = 0; k < num_ues_; ++k) {
        served += rec.served_bits[k];
        dropped += rec.dropped_packets[k];
    }
    last_jfi_ = sim::jain_index(cumulative_);
    return alpha_ * (served / max_service_) + beta_ * last_jfi_ -
           delta_ * (static_cast<double>(dropped) / num_ues_);
}

}  // namespace schedlab::rl
