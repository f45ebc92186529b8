#include "schedlab/sim/trace.hpp"

#include <fstream>
#include <stdexcept>

#include "schedlab/util/binio.hpp"
#include "schedlab/util/rng.hpp"

namespace schedlab::sim {

namespace {
constexpr char kMagic[4] = {'S', 'L', 'T', 'R'};
constexpr uint32_t kVersion = 1;
}  // namespace

std::vector<uint8_t> GenieTrace::to_bytes() const {
    BinWriter w;
    w.put_u8(kMagic[0]);
    w.put_u8(kMagic[1]);
    w.put_u8(kMagic[2]);
    w.put_u8(kMagic[3]);
    w.put_u32(kVersion);
    w.put_u32(num_ttis);
    w.put_u32(num_ues);
    w.put_u32(num_rbgs);
    w.put_u32_vec(arrivals);
    w.put_f64_vec(snr_db);
    w.put_f64_vec(bler_u);
    return w.take();
}

GenieTrace GenieTrace::from_bytes(const std::vector<uint8_t>& bytes) {
    BinReader r(bytes);
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.get_u8());
    if (magic[0] != kMagic[0] || magic[1] != kMagic[1] || magic[2] != kMagic[2] ||
        magic[3] != kMagic[3]) {
        throw std::runtime_error("GenieTrace: bad magic");
    }
    if (uint32_t v = r.get_u32(); v != kVersion) {
        throw std::runtime_error("GenieTrace: unsupported version " + std::to_string(v));
    }
    GenieTrace t;
    t.num_ttis = r.get_u32();
    t.num_ues = r.get_u32();
    t.num_rbgs = r.get_u32();
    t.arrivals = r.get_u32_vec();
    t.snr_db = r.get_f64_vec();
    t.bler_u = r.get_f64_vec();
    const size_t nk = size_t(t.num_ttis) * t.num_ues;
    if (t.arrivals.size() != nk || t.snr_db.size() != nk * t.num_rbgs ||
        t.bler_u.size() != nk * t.num_rbgs) {
        throw std::runtime_error("GenieTrace: inconsistent array sizes");
    }
    if (!r.at_end()) throw std::runtime_error("GenieTrace: trailing bytes");
    return t;
}

void GenieTrace::save(const std::string& path) const {
    auto bytes = to_bytes();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("GenieTrace: cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("GenieTrace: write failed for " + path);
}

GenieTrace GenieTrace::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("GenieTrace: cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return from_bytes(bytes);
}

uint64_t GenieTrace::hash() const {
    auto bytes = to_bytes();
    return fnv1a(bytes.data(), bytes.size());
}

}  // namespace schedlab::sim
