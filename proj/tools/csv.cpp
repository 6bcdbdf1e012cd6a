#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace thermoqfi::cli {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    width_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) {
        throw std::logic_error("CSV row width " + std::to_string(cells.size()) +
                               " does not match header width " + std::to_string(width_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::footer(const std::string& comment) {
    out_ << "# " << comment << '\n';
}

} // namespace thermoqfi::cli
