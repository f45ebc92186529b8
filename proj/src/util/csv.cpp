#include "schedlab/util/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace schedlab {

namespace {
std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    return line;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}
}  // namespace

std::string csv_to_string(const CsvDoc& doc) {
    std::string out;
    for (const auto& c : doc.comments) out += "# " + c + "\n";
    out += join(doc.header) + "\n";
    for (const auto& r : doc.rows) out += join(r) + "\n";
    return out;
}

void write_csv(const std::string& path, const CsvDoc& doc) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f << csv_to_string(doc);
}

CsvDoc read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    CsvDoc doc;
    std::string line;
    bool header_done = false;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string c = line.substr(1);
            if (!c.empty() && c[0] == ' ') c = c.substr(1);
            doc.comments.push_back(c);
            continue;
        }
        if (!header_done) {
            doc.header = split(line);
            header_done = true;
        } else {
            doc.rows.push_back(split(line));
        }
    }
    return doc;
}

}  // namespace schedlab
