#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "entroflow/entropy.hpp"

namespace entroflow {

/// Shortest-exact decimal for CSV cells: 17 significant digits, period
/// decimal separator, locale independent.
std::string format_double(double v);

/// Minimal CSV writer with the locale-independent number format above.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    static std::string cell(double v) { return format_double(v); }

private:
    std::ofstream out_;
};

/// Flat binary density snapshot: u64 dimension, u64 N per axis, then per-axis
/// double (min, max), then row-major 8-byte values.
void write_density_binary(const DensityGrid& density, const std::string& path);
DensityGrid read_density_binary(const std::string& path);

}  // namespace entroflow
