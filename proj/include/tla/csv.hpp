// csv.hpp — Deterministic CSV emission: 17-significant-digit floats, plain integers

#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace tla::csv {

using Cell = std::variant<long long, double, std::string>;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    return std::get<std::string>(c);
}

class Writer {
  public:
    Writer(const std::string& path, const std::string& units_note,
           const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw std::runtime_error("csv: cannot open " + path);
        if (!units_note.empty()) out_ << "# " << units_note << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }

    void row(const std::vector<Cell>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << format_cell(cells[i]) << (i + 1 < cells.size() ? "," : "\n");
    }

  private:
    std::ofstream out_;
};

} // namespace tla::csv
