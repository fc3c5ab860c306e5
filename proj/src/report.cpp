#include "entroflow/report.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>

#include "entroflow/errors.hpp"

namespace entroflow {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError("cannot open CSV output: " + path);
}

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void write_density_binary(const DensityGrid& density, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open binary output: " + path);
    const SpatialGrid& g = density.grid();
    const auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    const auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u64(static_cast<std::uint64_t>(g.dimension));
    for (int a = 0; a < g.dimension; ++a) put_u64(g.n[a]);
    for (int a = 0; a < g.dimension; ++a) {
        put_f64(g.min[a]);
        put_f64(g.max[a]);
    }
    out.write(reinterpret_cast<const char*>(density.values().data()),
              static_cast<std::streamsize>(density.values().size() * sizeof(double)));
}

DensityGrid read_density_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open binary input: " + path);
    const auto get_u64 = [&] {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const auto get_f64 = [&] {
        double v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const auto dim = static_cast<int>(get_u64());
    if (dim != 1 && dim != 2) throw ConfigError("binary density: bad dimension");
    std::uint64_t n[2] = {1, 1};
    for (int a = 0; a < dim; ++a) n[a] = get_u64();
    double lo[2] = {0.0, 1.0}, hi[2] = {1.0, 1.0};
    for (int a = 0; a < dim; ++a) {
        lo[a] = get_f64();
        hi[a] = get_f64();
    }
    SpatialGrid grid = dim == 1 ? SpatialGrid::make_1d(lo[0], hi[0], n[0])
                                : SpatialGrid::make_2d(lo[0], hi[0], lo[1], hi[1], n[0], n[1]);
    std::vector<double> vals(grid.cell_count());
    in.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!in) throw ConfigError("binary density: truncated file");
    return DensityGrid(grid, std::move(vals));
}

}  // namespace entroflow
