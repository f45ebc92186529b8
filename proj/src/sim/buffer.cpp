#include "schedlab/sim/buffer.hpp"

#include <algorithm>

namespace schedlab::sim {

UeBuffer::AdmitResult UeBuffer::admit(uint32_t n_new, uint64_t now, uint64_t packet_size_bits) {
    const uint32_t admitted = std::min(n_new, spare());
    const uint32_t dropped = n_new - admitted;
    for (uint32_t i = 0; i < admitted; ++i)
        queue_.push_back(Packet{packet_size_bits, now, static_cast<double>(packet_size_bits)});
    arrived_total_ += n_new;
    dropped_overflow_ += dropped;
    return {admitted, dropped};
}

uint32_t UeBuffer::expire(uint64_t now, uint32_t max_delay) {
    uint32_t removed = 0;
    while (!queue_.empty() && now - queue_.front().arrival_tti >= max_delay) {
        queue_.pop_front();
        ++removed;
    }
    dropped_expiry_ += removed;
    return removed;
}

DrainResult UeBuffer::drain(double bits) {
    DrainResult res;
    while (bits > 0.0 && !queue_.empty()) {
        Packet& p = queue_.front();
        if (p.remaining_bits <= bits) {
            bits -= p.remaining_bits;
            res.bits_drained += p.remaining_bits;
            res.packets_completed += 1;
            queue_.pop_front();
        } else {
            p.remaining_bits -= bits;
            res.bits_drained += bits;
            bits = 0.0;
        }
    }
    sent_total_ += res.packets_completed;
    return res;
}

double UeBuffer::queued_bits() const {
    double total = 0.0;
    for (const auto& p : queue_) total += p.remaining_bits;
    return total;
}

void UeBuffer::restore_counters(uint64_t arrived, uint64_t sent, uint64_t overflow, uint64_t expiry) {
    arrived_total_ = arrived;
    sent_total_ = sent;
    dropped_overflow_ = overflow;
    dropped_expiry_ = expiry;
}

}  // namespace schedlab::sim
