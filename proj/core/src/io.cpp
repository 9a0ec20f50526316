#include "fraclab/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "fraclab/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "FRS1/FRM1 writers assume a little-endian host");

namespace fraclab {

namespace {

using nlohmann::json;

json header_json(const GridSet& s, const char* format) {
    json h;
    h["format"] = format;
    h["dim"] = s.dim;
    h["resolution"] = s.resolution;
    h["origin"] = s.origin;
    h["extent"] = s.extent;
    h["count"] = s.cells.size();
    return h;
}

GridSet set_from_header(const json& h) {
    GridSet s;
    s.dim = h.at("dim").get<int>();
    s.resolution = h.at("resolution").get<std::int64_t>();
    s.origin = h.at("origin").get<std::vector<std::int64_t>>();
    s.extent = h.at("extent").get<std::vector<std::int64_t>>();
    return s;
}

void write_u64(std::ostream& out, const std::vector<std::uint64_t>& xs) {
    out.write(reinterpret_cast<const char*>(xs.data()),
              static_cast<std::streamsize>(xs.size() * sizeof(std::uint64_t)));
}

void write_f64(std::ostream& out, const std::vector<double>& xs) {
    out.write(reinterpret_cast<const char*>(xs.data()),
              static_cast<std::streamsize>(xs.size() * sizeof(double)));
}

json read_header_line(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw io_error("cannot read header from " + path);
    json h = json::parse(line, nullptr, false);
    if (h.is_discarded()) throw io_error("malformed header in " + path);
    return h;
}

std::vector<std::uint64_t> read_u64(std::istream& in, std::size_t n, const std::string& path) {
    std::vector<std::uint64_t> xs(n);
    in.read(reinterpret_cast<char*>(xs.data()), static_cast<std::streamsize>(n * sizeof(std::uint64_t)));
    if (!in) throw io_error("truncated cell data in " + path);
    return xs;
}

}  // namespace

void save_grid_set(const GridSet& s, const std::string& path, SetFormat format) {
    s.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    if (format == SetFormat::FRS1) {
        out << header_json(s, "FRS1").dump() << '\n';
        write_u64(out, s.cells);
    } else {
        json h = header_json(s, "FRSJ");
        json cells = json::array();
        for (std::uint64_t flat : s.cells) cells.push_back(s.cell_index(flat));
        h["cells"] = std::move(cells);
        out << h.dump() << '\n';
    }
    if (!out) throw io_error("failed writing " + path);
}

void save_measure(const WeightedMeasure& m, const std::string& path) {
    m.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << header_json(m.support, "FRM1").dump() << '\n';
    write_u64(out, m.support.cells);
    write_f64(out, m.weights);
    if (!out) throw io_error("failed writing " + path);
}

GridSet load_grid_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    const json h = read_header_line(in, path);
    const std::string format = h.value("format", "");
    GridSet s = set_from_header(h);
    const auto n = h.at("count").get<std::size_t>();
    if (format == "FRS1" || format == "FRM1") {
        s.cells = read_u64(in, n, path);
    } else if (format == "FRSJ") {
        for (const auto& tuple : h.at("cells")) {
            const auto idx = tuple.get<std::vector<std::int64_t>>();
            if (static_cast<int>(idx.size()) != s.dim) throw io_error("bad cell tuple in " + path);
            s.cells.push_back(s.flatten(idx));
        }
        if (s.cells.size() != n) throw io_error("cell count mismatch in " + path);
    } else {
        throw io_error("unknown set format '" + format + "' in " + path);
    }
    if (s.cells.empty()) s.filtered = true;
    s.validate();
    return s;
}

WeightedMeasure load_measure(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    const json h = read_header_line(in, path);
    if (h.value("format", "") != "FRM1") throw io_error(path + " is not an FRM1 measure file");
    WeightedMeasure m;
    m.support = set_from_header(h);
    const auto n = h.at("count").get<std::size_t>();
    m.support.cells = read_u64(in, n, path);
    m.weights.resize(n);
    in.read(reinterpret_cast<char*>(m.weights.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw io_error("truncated weight data in " + path);
    m.validate();
    return m;
}

}  // namespace fraclab
