#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace thermoqfi::cli {

// Fixed 17-significant-digit lowercase scientific notation so identical
// inputs always produce byte-identical output. Non-finite values render as
// "nan", "inf", "-inf".
std::string format_double(double x);

// One header line, comma-separated rows, '#'-prefixed footer comment lines.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    void footer(const std::string& comment);

private:
    std::ostream& out_;
    std::size_t width_ = 0;
};

} // namespace thermoqfi::cli
