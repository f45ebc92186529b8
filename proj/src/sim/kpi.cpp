#include "schedlab/sim/kpi.hpp"

#include <stdexcept>

namespace schedlab::sim {

double jain_index(std::span<const double> per_ue) {
    double sum = 0.0, sum_sq = 0.0;
    for (double x : per_ue) {
        sum += x;
        sum_sq += x * x;
    }
    if (sum_sq == 0.0) return 1.0;
    return sum * sum / (static_cast<double>(per_ue.size()) * sum_sq);
}

void KpiWindow::add(const KpiRecord& rec) {
    for (size_t k = 0; k < served_bits_.size(); ++k) {
        served_bits_[k] += rec.served_bits[k];
        dropped_ += rec.dropped_packets[k];
        arrived_ += rec.arrived_packets[k];
    }
    ++ttis_;
}

Objectives compute_kpis(const KpiWindow& window, double tti_duration) {
    if (window.ttis() == 0) throw std::invalid_argument("compute_kpis: empty window");
    Objectives obj;
    double total = 0.0;
    for (double x : window.served_bits()) total += x;
    obj.thp = total / (static_cast<double>(window.ttis()) * tti_duration);
    obj.jfi = jain_index(window.served_bits());
    obj.pdr = window.total_arrived() == 0
                  ? 0.0
                  : static_cast<double>(window.total_dropped()) / static_cast<double>(window.total_arrived());
    return obj;
}

}  // namespace schedlab::sim
