#ifndef SCHEDLAB_SCHED_OBSERVATION_HPP
#define SCHEDLAB_SCHED_OBSERVATION_HPP

#include <cstdint>
#include <vector>

namespace schedlab::sim {
class Environment;
}

namespace schedlab::sched {

// Everything a per-TTI policy is allowed to see, decoupled from the
// environment so the same policies drive live runs and genie replays.
struct SchedulerObservation {
    uint32_t num_ues = 0;
    uint32_t num_rbgs = 0;
    std::vector<double> inst_rate;        // K*B row-major, bits/TTI after link adaptation
    std::vector<double> avg_thp;          // per-UE EMA throughput, bits/TTI, floored > 0
    std::vector<uint8_t> active;          // per-UE, nonempty buffer
    std::vector<uint32_t> spare_buffer;   // per-UE, free packet slots
    std::vector<uint64_t> hol_wait;       // per-UE, head-of-line waiting time in TTIs

    double rate_at(uint32_t ue, uint32_t rbg) const {
        return inst_rate[size_t(ue) * num_rbgs + rbg];
    }
};

SchedulerObservation make_observation(const sim::Environment& env);

}  // namespace schedlab::sched

#endif
