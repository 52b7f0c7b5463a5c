#include "projmerge/io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace projmerge {

namespace {

char digit_char(unsigned v) {
    return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + (v - 10));
}

unsigned digit_value(char ch) {
    if (ch >= '0' && ch <= '9') return static_cast<unsigned>(ch - '0');
    if (ch >= 'a' && ch <= 'z') return static_cast<unsigned>(ch - 'a' + 10);
    throw std::invalid_argument("invalid digit character in table string");
}

std::string encode_digits(const std::vector<std::uint8_t>& vals, unsigned base) {
    if (base > 36) throw std::invalid_argument("digit string encoding supports base <= 36");
    std::string s;
    s.reserve(vals.size());
    for (auto v : vals) {
        if (v >= base) throw std::invalid_argument("value out of base range");
        s.push_back(digit_char(v));
    }
    return s;
}

std::vector<std::uint8_t> decode_digits(const std::string& s, unsigned base,
                                        std::size_t expected) {
    if (s.size() != expected)
        throw std::invalid_argument("digit string has wrong length");
    std::vector<std::uint8_t> vals;
    vals.reserve(s.size());
    for (char ch : s) {
        const unsigned v = digit_value(ch);
        if (v >= base) throw std::invalid_argument("digit exceeds base");
        vals.push_back(static_cast<std::uint8_t>(v));
    }
    return vals;
}

}  // namespace

std::string partition_to_json(const PartLabeling& p) {
    nlohmann::ordered_json j;
    j["t"] = p.dims().t;
    j["n"] = p.dims().side;
    j["c"] = p.parts();
    j["labels"] = encode_digits(p.labels(), p.parts());
    return j.dump();
}

PartLabeling partition_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const GridDims dims(j.at("t").get<std::uint32_t>(), j.at("n").get<std::uint64_t>());
    const auto c = j.at("c").get<std::uint32_t>();
    auto labels = decode_digits(j.at("labels").get<std::string>(), c, dims.cell_count());
    return PartLabeling(dims, c, std::move(labels));
}

std::string merger_to_json(const MergerTable& e) {
    nlohmann::ordered_json j;
    j["n_vals"] = e.n_vals;
    j["t"] = e.t;
    j["d_vals"] = e.d_vals;
    j["m_vals"] = e.m_vals;
    j["table"] = encode_digits(e.table, e.m_vals);
    return j.dump();
}

MergerTable merger_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const auto n = j.at("n_vals").get<std::uint64_t>();
    const auto t = j.at("t").get<std::uint32_t>();
    const auto d = j.at("d_vals").get<std::uint64_t>();
    const auto m = j.at("m_vals").get<std::uint32_t>();
    auto table = decode_digits(j.at("table").get<std::string>(), m,
                               GridDims(t, n).cell_count() * d);
    return MergerTable(n, t, d, m, std::move(table));
}

std::string conductor_to_json(const Conductor& c) {
    nlohmann::ordered_json j;
    j["n_vals"] = c.n_vals;
    j["t"] = 1;
    j["d_vals"] = c.d_vals;
    j["m_vals"] = c.m_vals;
    j["table"] = encode_digits(c.table, c.m_vals);
    return j.dump();
}

Conductor conductor_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("t").get<std::uint32_t>() != 1)
        throw std::invalid_argument("conductor file requires t = 1");
    const auto n = j.at("n_vals").get<std::uint64_t>();
    const auto d = j.at("d_vals").get<std::uint64_t>();
    const auto m = j.at("m_vals").get<std::uint32_t>();
    auto table = decode_digits(j.at("table").get<std::string>(), m, n * d);
    return Conductor(n, d, m, std::move(table));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::string render_projection_svg(const PartLabeling& p, const AxisSubset& axes) {
    axes.validate_for(p.dims());
    if (axes.size() != 2)
        throw std::invalid_argument("heatmap rendering requires a 2-axis subset");
    if (p.parts() > 64)
        throw std::invalid_argument("heatmap rendering supports at most 64 parts");
    const std::uint64_t n = p.dims().side;

    // part-subset bitmask per projected point (row = first axis, col = second)
    std::vector<std::uint64_t> mask(n * n, 0);
    {
        std::vector<std::uint64_t> coords(p.dims().t, 0);
        for (std::uint64_t cell = 0; cell < p.dims().cell_count(); ++cell) {
            const std::uint64_t r = coords[axes.indices[0]];
            const std::uint64_t c = coords[axes.indices[1]];
            mask[r * n + c] |= std::uint64_t{1} << p.label(cell);
            for (std::uint32_t a = p.dims().t; a-- > 0;) {
                if (++coords[a] < n) break;
                coords[a] = 0;
            }
        }
    }

    // stable palette: distinct masks in ascending order, golden-angle hues
    std::map<std::uint64_t, std::string> color;
    for (auto m : mask) color.emplace(m, "");
    std::size_t idx = 0;
    for (auto& [m, c] : color) {
        const unsigned hue = static_cast<unsigned>((idx * 137) % 360);
        std::ostringstream ss;
        ss << "hsl(" << hue << ",70%,55%)";
        c = ss.str();
        ++idx;
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << n << ' ' << n
        << "\" shape-rendering=\"crispEdges\">\n";
    for (std::uint64_t r = 0; r < n; ++r) {
        std::uint64_t c = 0;
        while (c < n) {
            const std::uint64_t m = mask[r * n + c];
            std::uint64_t run = 1;
            while (c + run < n && mask[r * n + c + run] == m) ++run;
            svg << "<rect x=\"" << c << "\" y=\"" << r << "\" width=\"" << run
                << "\" height=\"1\" fill=\"" << color[m] << "\"/>\n";
            c += run;
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace projmerge
