#ifndef SCHEDLAB_SIM_DECISION_HPP
#define SCHEDLAB_SIM_DECISION_HPP

#include <cstdint>
#include <vector>

namespace schedlab::sim {

// One TTI's scheduling decision: rbg_to_ue[b] is the UE index granted RBG b,
// or kIdle to leave the RBG unused.
struct Decision {
    static constexpr int32_t kIdle = -1;

    std::vector<int32_t> rbg_to_ue;

    static Decision idle(size_t num_rbgs) {
        Decision d;
        d.rbg_to_ue.assign(num_rbgs, kIdle);
        return d;
    }
    static Decision single(size_t num_rbgs, int32_t ue) {
        Decision d;
        d.rbg_to_ue.assign(num_rbgs, ue);
        return d;
    }
};

}  // namespace schedlab::sim

#endif
