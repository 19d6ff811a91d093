/// @file io.hpp
/// @brief Deterministic CSV/JSON output helpers (17 significant digits,
///        '.' decimal separator, LF line endings).
#pragma once

#include <nlohmann/json.hpp>
#include <fstream>
#include <string>
#include <vector>

#include "gcurv/errors.hpp"
#include "gcurv/linalg.hpp"

namespace gcurv {

using OrderedJson = nlohmann::ordered_json;

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file: " + path);
    os << text;
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) {
        for (std::size_t i = 0; i < header.size(); ++i) line_ += (i ? "," : "") + header[i];
        body_ += line_ + "\n";
        line_.clear();
    }
    void cell(const std::string& s) { line_ += (line_.empty() ? "" : ",") + s; }
    void cell(double v) { cell(fmt17(v)); }
    void cell(int v) { cell(std::to_string(v)); }
    void end_row() {
        body_ += line_ + "\n";
        line_.clear();
    }
    const std::string& text() const { return body_; }

private:
    std::string line_, body_;
};

inline OrderedJson json_vec(const Vec& v) {
    OrderedJson a = OrderedJson::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

inline OrderedJson json_mat(const Mat& m) {
    OrderedJson a = OrderedJson::array();
    for (int i = 0; i < m.rows(); ++i) {
        OrderedJson row = OrderedJson::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        a.push_back(row);
    }
    return a;
}

}  // namespace gcurv
