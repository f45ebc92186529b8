#include "schedlab/sim/env.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "schedlab/sched/ema.hpp"
#include "schedlab/util/binio.hpp"
#include "schedlab/util/rng.hpp"

namespace schedlab::sim {

namespace {

constexpr char kSnapMagic[4] = {'S', 'L', 'S', 'N'};
constexpr uint32_t kSnapVersion = 1;

uint64_t hash_u64(uint64_t h, uint64_t v) { return fnv1a(&v, sizeof v, h); }
uint64_t hash_f64(uint64_t h, double v) { return fnv1a(&v, sizeof v, h); }

// Exogenous values for one TTI, drawn (or read from the trace) before any of
// them is used, always in the same order.
struct ExogBlock {
    std::vector<uint32_t> arrivals;  // K
    std::vector<double> bler_u;      // K*B
    std::vector<double> next_snr;    // K*B when a fading redraw is due, else empty
};

}  // namespace

Environment::Environment(const SimConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.mean_snr_per_ue.size() != cfg_.num_ues) {
        throw std::invalid_argument("Environment: mean_snr_per_ue must hold one entry per UE");
    }
    rng_.seed(cfg_.rng_seed);
    buffers_.assign(cfg_.num_ues, UeBuffer(cfg_.buffer_capacity));
    olla_offset_.assign(cfg_.num_ues, 0.0);
    avg_thp_.assign(cfg_.num_ues, cfg_.ema_floor());
    init_channel();
}

Environment::Environment(const SimConfig& cfg, const GenieTrace* trace) : Environment(cfg) {
    if (trace == nullptr) throw std::invalid_argument("Environment: null trace");
    if (trace->num_ues != cfg_.num_ues || trace->num_rbgs != cfg_.num_rbgs) {
        throw std::invalid_argument("Environment: trace dimensions do not match config");
    }
    trace_ = trace;
    trace_pos_ = 0;
}

double Environment::draw_snr(uint32_t ue, std::mt19937_64& rng) const {
    // Rayleigh block fading: unit-mean exponential power on top of the UE's
    // mean SNR. The power is floored so the dB value stays finite.
    double u = uniform01(rng);
    double power = std::max(-std::log1p(-u), 1e-12);
    return cfg_.mean_snr_per_ue[ue] + 10.0 * std::log10(power);
}

void Environment::init_channel() {
    snr_.resize(size_t(cfg_.num_ues) * cfg_.num_rbgs);
    for (uint32_t k = 0; k < cfg_.num_ues; ++k)
        for (uint32_t b = 0; b < cfg_.num_rbgs; ++b) snr_[idx(k, b)] = draw_snr(k, rng_);
}

bool Environment::any_active() const {
    for (const auto& buf : buffers_)
        if (!buf.empty()) return true;
    return false;
}

uint64_t Environment::hol_wait(uint32_t ue) const {
    if (buffers_[ue].empty()) return 0;
    return tti_ - buffers_[ue].head().arrival_tti;
}

double Environment::inst_rate(uint32_t ue, uint32_t rbg) const {
    return link_adapt(snr_[idx(ue, rbg)], olla_offset_[ue], cfg_.mcs_table, cfg_.rbg_symbols,
                      cfg_.bler_slope, cfg_.target_bler)
        .rate;
}

void Environment::validate_decision(const Decision& decision) const {
    if (decision.rbg_to_ue.size() != cfg_.num_rbgs) {
        throw std::invalid_argument("Decision: expected one entry per RBG");
    }
    for (int32_t ue : decision.rbg_to_ue) {
        if (ue == Decision::kIdle) continue;
        if (ue < 0 || static_cast<uint32_t>(ue) >= cfg_.num_ues) {
            throw std::invalid_argument("Decision: UE index out of range");
        }
        if (buffers_[ue].empty()) {
            throw std::invalid_argument("Decision: assigned UE " + std::to_string(ue) +
                                        " has an empty buffer");
        }
    }
}

KpiRecord Environment::step(const Decision& decision) {
    validate_decision(decision);

    const uint32_t K = cfg_.num_ues;
    const uint32_t B = cfg_.num_rbgs;
    const bool redraw_due =
        cfg_.doppler_block_len > 0 && (tti_ + 1) % cfg_.doppler_block_len == 0;

    // Exogenous block. Pinned order: arrivals, BLER uniforms, fading redraw.
    ExogBlock ex;
    ex.arrivals.resize(K);
    ex.bler_u.resize(size_t(K) * B);
    if (trace_) {
        if (trace_pos_ >= trace_->num_ttis) {
            throw std::runtime_error("Environment: trace exhausted at replay position " +
                                     std::to_string(trace_pos_));
        }
        for (uint32_t k = 0; k < K; ++k) ex.arrivals[k] = trace_->arrival_at(trace_pos_, k);
        for (uint32_t k = 0; k < K; ++k)
            for (uint32_t b = 0; b < B; ++b) ex.bler_u[idx(k, b)] = trace_->bler_u_at(trace_pos_, k, b);
        // The trace stores the effective SNR per TTI; adopt this row. After the
        // step, the channel advance preloads the next row so observations see
        // the SNR the next step will actually use, exactly as in live mode.
        for (uint32_t k = 0; k < K; ++k)
            for (uint32_t b = 0; b < B; ++b) snr_[idx(k, b)] = trace_->snr_at(trace_pos_, k, b);
        if (trace_pos_ + 1 < trace_->num_ttis) {
            ex.next_snr.resize(size_t(K) * B);
            for (uint32_t k = 0; k < K; ++k)
                for (uint32_t b = 0; b < B; ++b) ex.next_snr[idx(k, b)] = trace_->snr_at(trace_pos_ + 1, k, b);
        }
    } else {
        for (uint32_t k = 0; k < K; ++k) ex.arrivals[k] = draw_poisson(cfg_.arrival_rate, rng_);
        for (uint32_t k = 0; k < K; ++k)
            for (uint32_t b = 0; b < B; ++b) ex.bler_u[idx(k, b)] = uniform01(rng_);
        if (redraw_due) {
            ex.next_snr.resize(size_t(K) * B);
            for (uint32_t k = 0; k < K; ++k)
                for (uint32_t b = 0; b < B; ++b) ex.next_snr[idx(k, b)] = draw_snr(k, rng_);
        }
    }
    for (uint32_t k = 0; k < K; ++k) exog_hash_ = hash_u64(exog_hash_, ex.arrivals[k]);
    for (double u : ex.bler_u) exog_hash_ = hash_f64(exog_hash_, u);
    for (double s : snr_) exog_hash_ = hash_f64(exog_hash_, s);

    KpiRecord rec;
    rec.tti = tti_;
    rec.served_bits.assign(K, 0.0);
    rec.dropped_packets.assign(K, 0);
    rec.arrived_packets.assign(K, 0);

    // Transmit: per assigned (UE, RBG) run link adaptation, flip the success
    // coin, give OLLA its ACK/NACK. Successful grants to the same UE pool
    // their bits and drain the queue head-first once.
    const double step_up = cfg_.olla_step_up;
    const double step_down = cfg_.resolved_olla_step_down();
    std::vector<double> pooled(K, 0.0);
    for (uint32_t b = 0; b < B; ++b) {
        int32_t ue = decision.rbg_to_ue[b];
        if (ue == Decision::kIdle) continue;
        const auto la = link_adapt(snr_[idx(ue, b)], olla_offset_[ue], cfg_.mcs_table,
                                   cfg_.rbg_symbols, cfg_.bler_slope, cfg_.target_bler);
        if (la.rate <= 0.0) continue;  // no usable MCS: nothing on air, no feedback
        const bool ack = ex.bler_u[idx(ue, b)] >= la.bler;
        olla_offset_[ue] = olla_update(olla_offset_[ue], ack, step_up, step_down);
        if (ack) pooled[ue] += la.rate;
    }
    for (uint32_t k = 0; k < K; ++k) {
        if (pooled[k] > 0.0) rec.served_bits[k] = buffers_[k].drain(pooled[k]).bits_drained;
    }

    // Average-throughput tracker advances for every UE, scheduled or not.
    for (uint32_t k = 0; k < K; ++k) {
        avg_thp_[k] = sched::ema_update(avg_thp_[k], rec.served_bits[k], cfg_.ema_time_constant,
                                        cfg_.ema_floor());
    }

    // Expire, then admit this TTI's arrivals.
    for (uint32_t k = 0; k < K; ++k) {
        rec.dropped_packets[k] += buffers_[k].expire(tti_, cfg_.max_delay);
    }
    for (uint32_t k = 0; k < K; ++k) {
        auto res = buffers_[k].admit(ex.arrivals[k], tti_, cfg_.packet_size);
        rec.arrived_packets[k] = ex.arrivals[k];
        rec.dropped_packets[k] += res.dropped;
    }

    // Channel advance.
    if (!ex.next_snr.empty()) snr_ = ex.next_snr;
    if (trace_) ++trace_pos_;
    ++tti_;
    return rec;
}

GenieTrace Environment::pregenerate(uint32_t n_ttis) const {
    if (n_ttis == 0) throw std::invalid_argument("pregenerate: need at least one TTI");
    if (trace_) throw std::logic_error("pregenerate: environment is already replaying a trace");
    const uint32_t K = cfg_.num_ues;
    const uint32_t B = cfg_.num_rbgs;

    GenieTrace tr;
    tr.num_ttis = n_ttis;
    tr.num_ues = K;
    tr.num_rbgs = B;
    tr.arrivals.reserve(size_t(n_ttis) * K);
    tr.snr_db.reserve(size_t(n_ttis) * K * B);
    tr.bler_u.reserve(size_t(n_ttis) * K * B);

    std::mt19937_64 rng = rng_;       // the live engine is not disturbed
    std::vector<double> snr = snr_;
    for (uint32_t t = 0; t < n_ttis; ++t) {
        const uint64_t abs_tti = tti_ + t;
        for (uint32_t k = 0; k < K; ++k) tr.arrivals.push_back(draw_poisson(cfg_.arrival_rate, rng));
        for (uint32_t k = 0; k < K; ++k)
            for (uint32_t b = 0; b < B; ++b) tr.bler_u.push_back(uniform01(rng));
        tr.snr_db.insert(tr.snr_db.end(), snr.begin(), snr.end());
        if (cfg_.doppler_block_len > 0 && (abs_tti + 1) % cfg_.doppler_block_len == 0) {
            for (uint32_t k = 0; k < K; ++k)
                for (uint32_t b = 0; b < B; ++b) snr[idx(k, b)] = draw_snr(k, rng);
        }
    }
    return tr;
}

std::vector<uint8_t> Environment::snapshot() const {
    BinWriter w;
    for (char c : kSnapMagic) w.put_u8(static_cast<uint8_t>(c));
    w.put_u32(kSnapVersion);
    w.put_u64(cfg_.hash());
    w.put_u64(trace_ ? trace_->hash() : 0);
    w.put_u64(tti_);
    w.put_u32(trace_pos_);
    w.put_u64(exog_hash_);

    std::ostringstream rng_text;
    rng_text << rng_;
    w.put_string(rng_text.str());

    w.put_f64_vec(snr_);
    w.put_f64_vec(olla_offset_);
    w.put_f64_vec(avg_thp_);

    for (const auto& buf : buffers_) {
        w.put_u64(buf.arrived_total());
        w.put_u64(buf.sent_total());
        w.put_u64(buf.dropped_overflow());
        w.put_u64(buf.dropped_expiry());
        w.put_u64(buf.size());
        for (const auto& p : buf.packets()) {
            w.put_u64(p.size_bits);
            w.put_u64(p.arrival_tti);
            w.put_f64(p.remaining_bits);
        }
    }
    return w.take();
}

Environment Environment::restore(const SimConfig& cfg, const std::vector<uint8_t>& blob,
                                 const GenieTrace* trace) {
    BinReader r(blob);
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.get_u8());
    if (magic[0] != kSnapMagic[0] || magic[1] != kSnapMagic[1] || magic[2] != kSnapMagic[2] ||
        magic[3] != kSnapMagic[3]) {
        throw std::runtime_error("snapshot: bad magic");
    }
    if (uint32_t v = r.get_u32(); v != kSnapVersion) {
        throw std::runtime_error("snapshot: unsupported version " + std::to_string(v));
    }
    if (uint64_t h = r.get_u64(); h != cfg.hash()) {
        throw std::runtime_error("snapshot: config hash mismatch (blob from a different SimConfig)");
    }
    const uint64_t trace_hash = r.get_u64();
    if (trace_hash != 0) {
        if (trace == nullptr) {
            throw std::runtime_error("snapshot: blob was taken in replay mode; trace required");
        }
        if (trace->hash() != trace_hash) {
            throw std::runtime_error("snapshot: trace hash mismatch");
        }
    }
    if (trace != nullptr && (trace->num_ues != cfg.num_ues || trace->num_rbgs != cfg.num_rbgs)) {
        throw std::invalid_argument("snapshot: trace dimensions do not match config");
    }

    Environment env;
    env.cfg_ = cfg;
    env.cfg_.validate();
    env.trace_ = trace;
    env.tti_ = r.get_u64();
    env.trace_pos_ = r.get_u32();
    env.exog_hash_ = r.get_u64();

    std::istringstream rng_text(r.get_string());
    rng_text >> env.rng_;
    if (!rng_text) throw std::runtime_error("snapshot: bad rng state");

    env.snr_ = r.get_f64_vec();
    env.olla_offset_ = r.get_f64_vec();
    env.avg_thp_ = r.get_f64_vec();
    if (env.snr_.size() != size_t(cfg.num_ues) * cfg.num_rbgs ||
        env.olla_offset_.size() != cfg.num_ues || env.avg_thp_.size() != cfg.num_ues) {
        throw std::runtime_error("snapshot: state dimensions do not match config");
    }

    env.buffers_.assign(cfg.num_ues, UeBuffer(cfg.buffer_capacity));
    for (auto& buf : env.buffers_) {
        const uint64_t arrived = r.get_u64();
        const uint64_t sent = r.get_u64();
        const uint64_t overflow = r.get_u64();
        const uint64_t expiry = r.get_u64();
        buf.restore_counters(arrived, sent, overflow, expiry);
        const uint64_t n = r.get_u64();
        if (n > cfg.buffer_capacity) throw std::runtime_error("snapshot: queue exceeds capacity");
        for (uint64_t i = 0; i < n; ++i) {
            Packet p;
            p.size_bits = r.get_u64();
            p.arrival_tti = r.get_u64();
            p.remaining_bits = r.get_f64();
            buf.restore_packet(p);
        }
    }
    if (!r.at_end()) throw std::runtime_error("snapshot: trailing bytes");
    return env;
}

SimConfig materialize_deployment(const SimConfig& base, uint64_t deploy_seed, uint64_t env_seed,
                                 uint32_t override_rbgs) {
    SimConfig c = base;
    if (override_rbgs > 0) c.num_rbgs = override_rbgs;
    if (c.mean_snr_per_ue.empty()) {
        std::mt19937_64 rd(deploy_seed);
        c.mean_snr_per_ue.resize(c.num_ues);
        for (double& s : c.mean_snr_per_ue)
            s = c.deploy_snr_min + uniform01(rd) * (c.deploy_snr_max - c.deploy_snr_min);
    }
    c.rng_seed = env_seed;
    c.validate();
    return c;
}

}  // namespace schedlab::sim
