#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tokenprune/errors.hpp"

namespace tokenprune {

// Shortest round-trip decimal form via std::to_chars: '.' decimal point,
// locale-free, deterministic.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_number(std::size_t v) { return std::to_string(v); }
inline std::string format_number(long long v) { return std::to_string(v); }

// Comma-separated rows, header first, no quoting (cells never contain commas
// here).
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::trunc) {
        if (!out_) throw UnwritablePathError("cannot write " + path.string());
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        if (!out_) throw UnwritablePathError("csv write failed");
    }

private:
    std::ofstream out_;
};

}  // namespace tokenprune
