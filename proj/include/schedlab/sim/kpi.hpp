#ifndef SCHEDLAB_SIM_KPI_HPP
#define SCHEDLAB_SIM_KPI_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "schedlab/objectives.hpp"

namespace schedlab::sim {

// Per-TTI accounting emitted by the environment.
struct KpiRecord {
    uint64_t tti = 0;
    std::vector<double> served_bits;       // per UE, realized goodput this TTI
    std::vector<uint32_t> dropped_packets; // per UE, overflow + expiry this TTI
    std::vector<uint32_t> arrived_packets; // per UE, offered this TTI (admitted + overflow)
};

// Jain's fairness index over per-UE totals. The all-zero vector is defined as
// 1.0 (the "all equal" limit); reachable only before any service.
double jain_index(std::span<const double> per_ue);

// Window accumulator for the KPI triple.
class KpiWindow {
public:
    explicit KpiWindow(uint32_t num_ues) : served_bits_(num_ues, 0.0) {}

    void add(const KpiRecord& rec);

    uint64_t ttis() const { return ttis_; }
    const std::vector<double>& served_bits() const { return served_bits_; }
    uint64_t total_dropped() const { return dropped_; }
    uint64_t total_arrived() const { return arrived_; }

private:
    std::vector<double> served_bits_;
    uint64_t dropped_ = 0;
    uint64_t arrived_ = 0;
    uint64_t ttis_ = 0;
};

// THP in bits/s, JFI over per-UE cumulative served bits, PDR as dropped over
// arrived packets (0 when nothing arrived). Throws on an empty window.
Objectives compute_kpis(const KpiWindow& window, double tti_duration);

}  // namespace schedlab::sim

#endif
