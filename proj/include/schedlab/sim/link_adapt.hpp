#ifndef SCHEDLAB_SIM_LINK_ADAPT_HPP
#define SCHEDLAB_SIM_LINK_ADAPT_HPP

#include <cstdint>
#include <vector>

#include "schedlab/sim/config.hpp"

namespace schedlab::sim {

struct LinkAdaptResult {
    int mcs_index = -1;   // -1: effective SNR below the whole table, no transmission
    double rate = 0.0;    // bits per TTI on one RBG
    double bler = 1.0;
};

// AMC selection with an OLLA margin: picks the highest MCS whose threshold is
// at or below snr_db - olla_offset_db. BLER follows a logistic curve in the
// margin above the chosen threshold, anchored at target_bler on the threshold
// itself (the table's switching points are target-BLER points), so a wider
// margin means fewer NACKs and the OLLA loop has a reachable equilibrium.
LinkAdaptResult link_adapt(double snr_db, double olla_offset_db, const std::vector<McsEntry>& mcs_table,
                           uint32_t rbg_symbols, double bler_slope, double target_bler);

// ACK/NACK outer loop: NACK raises the offset by step_up, ACK lowers it by
// step_down. With step_down = step_up * t/(1-t) the offset drifts to where the
// realized BLER equals the target t.
inline double olla_update(double offset_db, bool ack, double step_up, double step_down) {
    return ack ? offset_db - step_down : offset_db + step_up;
}

}  // namespace schedlab::sim

#endif
