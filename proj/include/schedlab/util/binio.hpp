#ifndef SCHEDLAB_UTIL_BINIO_HPP
#define SCHEDLAB_UTIL_BINIO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace schedlab {

// Little-endian binary encoding shared by all versioned file formats
// (snapshots, genie traces, network checkpoints).

class BinWriter {
public:
    void put_u8(uint8_t v) { buf_.push_back(v); }
    void put_u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void put_u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void put_f64(double v) { put_u64(std::bit_cast<uint64_t>(v)); }
    void put_string(const std::string& s) {
        put_u64(s.size());
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    void put_f64_vec(const std::vector<double>& v) {
        put_u64(v.size());
        for (double x : v) put_f64(x);
    }
    void put_u64_vec(const std::vector<uint64_t>& v) {
        put_u64(v.size());
        for (uint64_t x : v) put_u64(x);
    }
    void put_u32_vec(const std::vector<uint32_t>& v) {
        put_u64(v.size());
        for (uint32_t x : v) put_u32(x);
    }

    const std::vector<uint8_t>& bytes() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
};

class BinReader {
public:
    BinReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
    explicit BinReader(const std::vector<uint8_t>& buf) : BinReader(buf.data(), buf.size()) {}

    uint8_t get_u8() {
        need(1);
        return data_[pos_++];
    }
    uint32_t get_u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    uint64_t get_u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }
    double get_f64() { return std::bit_cast<double>(get_u64()); }
    std::string get_string() {
        uint64_t n = get_u64();
        need(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }
    std::vector<double> get_f64_vec() {
        uint64_t n = get_u64();
        std::vector<double> v(n);
        for (auto& x : v) x = get_f64();
        return v;
    }
    std::vector<uint64_t> get_u64_vec() {
        uint64_t n = get_u64();
        std::vector<uint64_t> v(n);
        for (auto& x : v) x = get_u64();
        return v;
    }
    std::vector<uint32_t> get_u32_vec() {
        uint64_t n = get_u64();
        std::vector<uint32_t> v(n);
        for (auto& x : v) x = get_u32();
        return v;
    }

    bool at_end() const { return pos_ == size_; }

private:
    void need(size_t n) const {
        if (pos_ + n > size_) throw std::runtime_error("binary blob truncated");
    }
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

}  // namespace schedlab

#endif
