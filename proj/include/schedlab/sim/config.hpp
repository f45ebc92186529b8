#ifndef SCHEDLAB_SIM_CONFIG_HPP
#define SCHEDLAB_SIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace schedlab::sim {

// One row of the AMC table: lowest effective SNR at which the MCS is usable,
// and its spectral efficiency in bits per resource symbol.
struct McsEntry {
    double min_snr_db;
    double spectral_efficiency;
};

// Standard 15-entry LTE CQI table with ~10% BLER switching thresholds.
std::vector<McsEntry> default_mcs_table();

struct SimConfig {
    uint32_t num_ues = 5;
    uint32_t num_rbgs = 1;
    double arrival_rate = 0.30;      // packets/TTI/UE; ~1.2x saturated PF service at defaults
    uint64_t packet_size = 4096;     // bits
    uint32_t buffer_capacity = 20;   // packets
    uint32_t max_delay = 50;         // TTIs; a packet expires once its age reaches this
    double target_bler = 0.1;
    double olla_step_up = 0.5;       // dB added to the offset on NACK
    double olla_step_down = -1.0;    // dB subtracted on ACK; < 0 means derive from target_bler
    double ema_time_constant = 100;  // TTIs
    double tti_duration = 1e-3;      // seconds
    std::vector<McsEntry> mcs_table = default_mcs_table();
    uint32_t rbg_symbols = 1008;     // resource symbols per RBG per TTI
    std::vector<double> mean_snr_per_ue;  // dB; empty until a deployment is materialized
    double deploy_snr_min = 0.0;     // deployment draw range when mean_snr_per_ue is empty
    double deploy_snr_max = 20.0;
    uint32_t doppler_block_len = 2;  // TTIs per fading realization; 0 = static channel
    double bler_slope = 1.5;         // logistic slope of the error model, per dB of margin
    uint64_t rng_seed = 1;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    // NACK/ACK step ratio that makes the offset equilibrate at target_bler.
    double resolved_olla_step_down() const;

    // Highest per-RBG rate in the table, bits/TTI.
    double max_rate() const;

    // Floor for the EMA throughput tracker: one packet per 10^4 TTIs.
    double ema_floor() const;

    // Hash of every field; snapshots and result CSVs embed it so mismatched
    // restores and cross-config comparisons are rejected.
    uint64_t hash() const;
};

}  // namespace schedlab::sim

#endif
