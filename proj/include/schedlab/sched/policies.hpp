#ifndef SCHEDLAB_SCHED_POLICIES_HPP
#define SCHEDLAB_SCHED_POLICIES_HPP

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "schedlab/sched/observation.hpp"
#include "schedlab/sim/decision.hpp"

namespace schedlab::sched {

// Proportional fair: argmax over active UEs of inst_rate/avg_thp for this RBG.
// Returns -1 when no UE is active. Ties go to the lowest UE index.
int32_t pf_select(const SchedulerObservation& obs, uint32_t rbg);

// Max-C/I: argmax of inst_rate alone, same tie-break and inactivity handling.
int32_t maxci_select(const SchedulerObservation& obs, uint32_t rbg);

// Per-TTI policy. decide() must not mutate the environment; stateful policies
// (round-robin pointer, random engine) keep their state here.
class Scheduler {
public:
    virtual ~Scheduler() = default;
    virtual sim::Decision decide(const SchedulerObservation& obs) = 0;
    virtual void reset() {}
};

class PfScheduler final : public Scheduler {
public:
    sim::Decision decide(const SchedulerObservation& obs) override;
};

class MaxCiScheduler final : public Scheduler {
public:
    sim::Decision decide(const SchedulerObservation& obs) override;
};

class RoundRobinScheduler final : public Scheduler {
public:
    sim::Decision decide(const SchedulerObservation& obs) override;
    void reset() override { last_ = -1; }

private:
    int32_t next_active(const SchedulerObservation& obs);
    int32_t last_ = -1;  // last UE served; selection starts after it
};

// Uniformly random active UE (or idle) per RBG; fuzzing aid, not a baseline.
class RandomScheduler final : public Scheduler {
public:
    explicit RandomScheduler(uint64_t seed) : rng_(seed) {}
    sim::Decision decide(const SchedulerObservation& obs) override;

private:
    std::mt19937_64 rng_;
};

// name: "pf" | "maxci" | "rr" | "random". Throws std::invalid_argument otherwise.
std::unique_ptr<Scheduler> make_scheduler(const std::string& name, uint64_t seed = 0);

}  // namespace schedlab::sched

#endif
