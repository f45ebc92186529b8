#ifndef SCHEDLAB_UTIL_CSV_HPP
#define SCHEDLAB_UTIL_CSV_HPP

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

namespace schedlab {

// Shortest round-trip decimal form; identical runs produce byte-identical CSVs.
inline std::string csv_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

inline std::string csv_u64(uint64_t v) { return std::to_string(v); }

struct CsvDoc {
    std::vector<std::string> comments;  // leading '#' lines, without newline
    std::vector<std::string> header;    // column names
    std::vector<std::vector<std::string>> rows;
};

// Serializes with '#' comment lines first, then the header, then rows.
std::string csv_to_string(const CsvDoc& doc);
void write_csv(const std::string& path, const CsvDoc& doc);
CsvDoc read_csv(const std::string& path);

}  // namespace schedlab

#endif
