#ifndef SCHEDLAB_SIM_TRACE_HPP
#define SCHEDLAB_SIM_TRACE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace schedlab::sim {

// Pregenerated exogenous randomness for N TTIs: per-TTI arrival counts per UE,
// per-(UE,RBG) SNR realizations, and the uniform draws consumed by the BLER
// coin flips. Replaying a trace through Environment reproduces exactly the
// stochastic process a live run with the same seed would see, independent of
// the scheduling decisions taken.
struct GenieTrace {
    uint32_t num_ttis = 0;
    uint32_t num_ues = 0;
    uint32_t num_rbgs = 0;

    // Row-major layouts: arrivals[t*K + k], snr_db[(t*K + k)*B + b], bler_u likewise.
    std::vector<uint32_t> arrivals;
    std::vector<double> snr_db;
    std::vector<double> bler_u;

    uint32_t arrival_at(uint32_t t, uint32_t k) const { return arrivals[size_t(t) * num_ues + k]; }
    double snr_at(uint32_t t, uint32_t k, uint32_t b) const {
        return snr_db[(size_t(t) * num_ues + k) * num_rbgs + b];
    }
    double bler_u_at(uint32_t t, uint32_t k, uint32_t b) const {
        return bler_u[(size_t(t) * num_ues + k) * num_rbgs + b];
    }

    std::vector<uint8_t> to_bytes() const;
    static GenieTrace from_bytes(const std::vector<uint8_t>& bytes);

    void save(const std::string& path) const;
    static GenieTrace load(const std::string& path);

    uint64_t hash() const;
};

}  // namespace schedlab::sim

#endif
