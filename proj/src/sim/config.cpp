#include "schedlab/sim/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "schedlab/util/binio.hpp"
#include "schedlab/util/rng.hpp"

namespace schedlab::sim {

std::vector<McsEntry> default_mcs_table() {
    return {
        {-6.7, 0.1523}, {-4.7, 0.2344}, {-2.3, 0.3770}, {0.2, 0.6016},
        {2.4, 0.8770},  {4.3, 1.1758},  {5.9, 1.4766},  {8.1, 1.9141},
        {10.3, 2.4063}, {11.7, 2.7305}, {14.1, 3.3223}, {16.3, 3.9023},
        {18.7, 4.5234}, {21.0, 5.1152}, {22.7, 5.5547},
    };
}

void SimConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("SimConfig: " + msg); };
    if (num_ues < 1) fail("num_ues must be >= 1");
    if (num_rbgs < 1) fail("num_rbgs must be >= 1");
    if (!(arrival_rate >= 0.0)) fail("arrival_rate must be >= 0");
    if (packet_size == 0) fail("packet_size must be > 0");
    if (buffer_capacity < 1) fail("buffer_capacity must be >= 1");
    if (max_delay < 1) fail("max_delay must be >= 1");
    if (!(target_bler > 0.0 && target_bler < 1.0)) fail("target_bler must be in (0, 1)");
    if (!(olla_step_up >= 0.0)) fail("olla_step_up must be >= 0");
    if (!(ema_time_constant >= 1.0)) fail("ema_time_constant must be >= 1");
    if (!(tti_duration > 0.0)) fail("tti_duration must be > 0");
    if (mcs_table.empty()) fail("mcs_table must be nonempty");
    if (!std::is_sorted(mcs_table.begin(), mcs_table.end(),
                        [](const McsEntry& a, const McsEntry& b) { return a.min_snr_db < b.min_snr_db; }))
        fail("mcs_table must be sorted ascending by min_snr_db");
    if (rbg_symbols == 0) fail("rbg_symbols must be > 0");
    if (!mean_snr_per_ue.empty() && mean_snr_per_ue.size() != num_ues)
        fail("mean_snr_per_ue must have num_ues entries (or be empty)");
    for (double s : mean_snr_per_ue)
        if (!std::isfinite(s)) fail("mean_snr_per_ue entries must be finite");
    if (!(deploy_snr_max >= deploy_snr_min)) fail("deploy_snr_max must be >= deploy_snr_min");
    if (!(bler_slope > 0.0)) fail("bler_slope must be > 0");
}

double SimConfig::resolved_olla_step_down() const {
    if (olla_step_down >= 0.0) return olla_step_down;
    return olla_step_up * target_bler / (1.0 - target_bler);
}

double SimConfig::max_rate() const {
    double best = 0.0;
    for (const auto& e : mcs_table) best = std::max(best, e.spectral_efficiency);
    return best * rbg_symbols;
}

double SimConfig::ema_floor() const {
    return static_cast<double>(packet_size) / 1e4;
}

uint64_t SimConfig::hash() const {
    BinWriter w;
    w.put_u32(num_ues);
    w.put_u32(num_rbgs);
    w.put_f64(arrival_rate);
    w.put_u64(packet_size);
    w.put_u32(buffer_capacity);
    w.put_u32(max_delay);
    w.put_f64(target_bler);
    w.put_f64(olla_step_up);
    w.put_f64(olla_step_down);
    w.put_f64(ema_time_constant);
    w.put_f64(tti_duration);
    w.put_u64(mcs_table.size());
    for (const auto& e : mcs_table) {
        w.put_f64(e.min_snr_db);
        w.put_f64(e.spectral_efficiency);
    }
    w.put_u32(rbg_symbols);
    w.put_f64_vec(mean_snr_per_ue);
    w.put_f64(deploy_snr_min);
    w.put_f64(deploy_snr_max);
    w.put_u32(doppler_block_len);
    w.put_f64(bler_slope);
    w.put_u64(rng_seed);
    return fnv1a(w.bytes().data(), w.bytes().size());
}

}  // namespace schedlab::sim
