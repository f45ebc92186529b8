#include "schedlab/sched/observation.hpp"

#include "schedlab/sim/env.hpp"

namespace schedlab::sched {

SchedulerObservation make_observation(const sim::Environment& env) {
    const uint32_t K = env.num_ues();
    const uint32_t B = env.num_rbgs();
    SchedulerObservation obs;
    obs.num_ues = K;
    obs.num_rbgs = B;
    obs.inst_rate.resize(size_t(K) * B);
    obs.avg_thp.resize(K);
    obs.active.resize(K);
    obs.spare_buffer.resize(K);
    obs.hol_wait.resize(K);
    for (uint32_t k = 0; k < K; ++k) {
        for (uint32_t b = 0; b < B; ++b) obs.inst_rate[size_t(k) * B + b] = env.inst_rate(k, b);
        obs.avg_thp[k] = env.avg_thp(k);
        obs.active[k] = env.active(k) ? 1 : 0;
        obs.spare_buffer[k] = env.buffer(k).spare();
        obs.hol_wait[k] = env.hol_wait(k);
    }
    return obs;
}

}  // namespace schedlab::sched
