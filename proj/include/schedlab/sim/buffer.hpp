#ifndef SCHEDLAB_SIM_BUFFER_HPP
#define SCHEDLAB_SIM_BUFFER_HPP

#include <cstdint>
#include <deque>

namespace schedlab::sim {

struct Packet {
    uint64_t size_bits;
    uint64_t arrival_tti;
    double remaining_bits;  // partially transmitted packets carry their residue
};

struct DrainResult {
    double bits_drained = 0.0;
    uint32_t packets_completed = 0;
};

// Finite FIFO transmission buffer of one UE. Maintains the conservation
// counters: arrived_total == sent_total + dropped_total + queue size.
class UeBuffer {
public:
    UeBuffer() = default;
    explicit UeBuffer(uint32_t capacity) : capacity_(capacity) {}

    // Admits up to the spare capacity; the rest is dropped as overflow.
    // Returns {admitted, dropped}.
    struct AdmitResult {
        uint32_t admitted;
        uint32_t dropped;
    };
    AdmitResult admit(uint32_t n_new, uint64_t now, uint64_t packet_size_bits);

    // Removes head packets whose age reached max_delay. Returns the count.
    uint32_t expire(uint64_t now, uint32_t max_delay);

    // Drains up to `bits` head-first; a packet counts as sent only when its
    // last bit goes.
    DrainResult drain(double bits);

    bool empty() const { return queue_.empty(); }
    uint32_t size() const { return static_cast<uint32_t>(queue_.size()); }
    uint32_t capacity() const { return capacity_; }
    uint32_t spare() const { return capacity_ - size(); }
    double queued_bits() const;
    const Packet& head() const { return queue_.front(); }
    const std::deque<Packet>& packets() const { return queue_; }

    uint64_t arrived_total() const { return arrived_total_; }
    uint64_t sent_total() const { return sent_total_; }
    uint64_t dropped_total() const { return dropped_overflow_ + dropped_expiry_; }
    uint64_t dropped_overflow() const { return dropped_overflow_; }
    uint64_t dropped_expiry() const { return dropped_expiry_; }

    // Snapshot plumbing.
    void restore_counters(uint64_t arrived, uint64_t sent, uint64_t overflow, uint64_t expiry);
    void restore_packet(const Packet& p) { queue_.push_back(p); }

private:
    std::deque<Packet> queue_;
    uint32_t capacity_ = 0;
    uint64_t arrived_total_ = 0;
    uint64_t sent_total_ = 0;
    uint64_t dropped_overflow_ = 0;
    uint64_t dropped_expiry_ = 0;
};

}  // namespace schedlab::sim

#endif
