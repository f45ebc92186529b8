#include "schedlab/sched/policies.hpp"

#include <stdexcept>

#include "schedlab/util/rng.hpp"

namespace schedlab::sched {

namespace {

template <typename Metric>
int32_t argmax_active(const SchedulerObservation& obs, Metric&& metric) {
    int32_t best = -1;
    double best_val = 0.0;
    for (uint32_t k = 0; k < obs.num_ues; ++k) {
        if (!obs.active[k]) continue;
        const double v = metric(k);
        if (best < 0 || v > best_val) {  // strict >: ties keep the lowest index
            best = static_cast<int32_t>(k);
            best_val = v;
        }
    }
    return best;
}

}  // namespace

int32_t pf_select(const SchedulerObservation& obs, uint32_t rbg) {
    return argmax_active(obs, [&](uint32_t k) { return obs.rate_at(k, rbg) / obs.avg_thp[k]; });
}

int32_t maxci_select(const SchedulerObservation& obs, uint32_t rbg) {
    return argmax_active(obs, [&](uint32_t k) { return obs.rate_at(k, rbg); });
}

sim::Decision PfScheduler::decide(const SchedulerObservation& obs) {
    sim::Decision d = sim::Decision::idle(obs.num_rbgs);
    for (uint32_t b = 0; b < obs.num_rbgs; ++b) d.rbg_to_ue[b] = pf_select(obs, b);
    return d;
}

sim::Decision MaxCiScheduler::decide(const SchedulerObservation& obs) {
    sim::Decision d = sim::Decision::idle(obs.num_rbgs);
    for (uint32_t b = 0; b < obs.num_rbgs; ++b) d.rbg_to_ue[b] = maxci_select(obs, b);
    return d;
}

int32_t RoundRobinScheduler::next_active(const SchedulerObservation& obs) {
    const int32_t K = static_cast<int32_t>(obs.num_ues);
    for (int32_t off = 1; off <= K; ++off) {
        const int32_t k = (last_ + off) % K;
        if (obs.active[k]) {
            last_ = k;
            return k;
        }
    }
    return -1;  // pointer unchanged when nothing is active
}

sim::Decision RoundRobinScheduler::decide(const SchedulerObservation& obs) {
    sim::Decision d = sim::Decision::idle(obs.num_rbgs);
    for (uint32_t b = 0; b < obs.num_rbgs; ++b) d.rbg_to_ue[b] = next_active(obs);
    return d;
}

sim::Decision RandomScheduler::decide(const SchedulerObservation& obs) {
    sim::Decision d = sim::Decision::idle(obs.num_rbgs);
    for (uint32_t b = 0; b < obs.num_rbgs; ++b) {
        // one slot per active UE plus one for idling
        uint32_t n_active = 0;
        for (uint32_t k = 0; k < obs.num_ues; ++k) n_active += obs.active[k] ? 1 : 0;
        uint32_t pick = static_cast<uint32_t>(uniform01(rng_) * (n_active + 1));
        if (pick >= n_active) continue;  // idle
        for (uint32_t k = 0; k < obs.num_ues; ++k) {
            if (!obs.active[k]) continue;
            if (pick == 0) {
                d.rbg_to_ue[b] = static_cast<int32_t>(k);
                break;
            }
            --pick;
        }
    }
    return d;
}

std::unique_ptr<Scheduler> make_scheduler(const std::string& name, uint64_t seed) {
    if (name == "pf") return std::make_unique<PfScheduler>();
    if (name == "maxci") return std::make_unique<MaxCiScheduler>();
    if (name == "rr") return std::make_unique<RoundRobinScheduler>();
    if (name == "random") return std::make_unique<RandomScheduler>(seed);
    throw std::invalid_argument("unknown scheduler: " + name);
}

}  // namespace schedlab::sched
