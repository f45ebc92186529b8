#ifndef SCHEDLAB_SCHED_EMA_HPP
#define SCHEDLAB_SCHED_EMA_HPP

#include <algorithm>

namespace schedlab::sched {

// Exponential moving average throughput tracker: T' = (1 - 1/tau)*T + served/tau,
// applied every TTI for every UE (served = 0 when unscheduled), floored at eps
// so PF ratios stay bounded at cold start.
inline double ema_update(double t, double served_bits, double tau, double floor_eps) {
    const double t_next = (1.0 - 1.0 / tau) * t + served_bits / tau;
    return std::max(t_next, floor_eps);
}

}  // namespace schedlab::sched

#endif
