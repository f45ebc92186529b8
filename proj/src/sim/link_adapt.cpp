#include "schedlab/sim/link_adapt.hpp"

#include <cmath>

namespace schedlab::sim {

LinkAdaptResult link_adapt(double snr_db, double olla_offset_db, const std::vector<McsEntry>& mcs_table,
                           uint32_t rbg_symbols, double bler_slope, double target_bler) {
    const double effective_snr = snr_db - olla_offset_db;
    int chosen = -1;
    for (size_t i = 0; i < mcs_table.size(); ++i) {
        if (mcs_table[i].min_snr_db <= effective_snr)
            chosen = static_cast<int>(i);
        else
            break;
    }
    if (chosen < 0) return {};

    const double margin = effective_snr - mcs_table[chosen].min_snr_db;
    LinkAdaptResult res;
    res.mcs_index = chosen;
    res.rate = mcs_table[chosen].spectral_efficiency * rbg_symbols;
    // Anchored so a zero-margin transmission errors at exactly target_bler:
    // the table thresholds are the target-BLER switching points, which is
    // what lets the ACK/NACK loop actually settle at the target instead of
    // ratcheting toward rate 0.
    const double anchor = std::log(1.0 / target_bler - 1.0);
    res.bler = 1.0 / (1.0 + std::exp(bler_slope * margin + anchor));
    return res;
}

}  // namespace schedlab::sim
