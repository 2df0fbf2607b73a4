#include "regfrac/field_io.hpp"

#include "regfrac/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace regfrac {

namespace {

double parse_double(const std::string& s, const std::filesystem::path& path, int line) {
    if (s == "nan") return std::nan("");
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw InvalidArgument(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    return out;
}

// PGM header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
    std::string tok;
    while (in >> tok) {
        if (tok.front() == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        return tok;
    }
    throw InvalidArgument("truncated PGM header");
}

}  // namespace

void write_field_csv(const Field& field, const std::filesystem::path& path) {
    const Grid2D& g = field.grid();
    auto out = open_out(path);
    out << "# n_cells=" << g.n_cells() << " halfwidth=" << g.halfwidth() << " farfield=" << field.farfield()
        << " rows bottom to top\n";
    char buf[32];
    for (int row = 0; row < g.n_cells(); ++row) {
        for (int col = 0; col < g.n_cells(); ++col) {
            const std::size_t i = g.box().index(row, col);
            if (col) out << ',';
            if (!g.exterior(i)) {
                out << "nan";
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", field[i]);
                out << buf;
            }
        }
        out << '\n';
    }
}

std::vector<double> read_field_csv(const std::filesystem::path& path, int n_cells) {
    auto in = open_in(path);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_cells) * n_cells);
    std::string line;
    int lineno = 0, rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        auto toks = split(line);
        if (toks.empty()) continue;
        if (static_cast<int>(toks.size()) != n_cells)
            throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(n_cells) + " values, got " + std::to_string(toks.size()));
        for (const auto& t : toks) out.push_back(parse_double(t, path, lineno));
        ++rows;
    }
    if (rows != n_cells)
        throw InvalidArgument(path.string() + ": expected " + std::to_string(n_cells) + " rows, got " +
                              std::to_string(rows));
    return out;
}

void write_field_pgm(const Field& field, const std::filesystem::path& path) {
    const Grid2D& g = field.grid();
    const int n = g.n_cells();
    auto out = open_out(path);
    out << "P5\n" << n << ' ' << n << "\n255\n";
    std::vector<unsigned char> row_bytes(static_cast<std::size_t>(n));
    for (int row = n - 1; row >= 0; --row) {
        for (int col = 0; col < n; ++col) {
            const std::size_t i = g.box().index(row, col);
            const double u = g.exterior(i) ? std::clamp(field[i], 0.0, 1.0) : 0.0;
            row_bytes[col] = static_cast<unsigned char>(std::lround(255.0 * u));
        }
        out.write(reinterpret_cast<const char*>(row_bytes.data()), n);
    }
}

RasterMask read_mask_pgm(const std::filesystem::path& path, double halfwidth) {
    auto in = open_in(path);
    const std::string magic = pgm_token(in);
    if (magic != "P5" && magic != "P2") throw InvalidArgument(path.string() + ": not a PGM file");
    const int w = std::stoi(pgm_token(in));
    const int h = std::stoi(pgm_token(in));
    const int maxval = std::stoi(pgm_token(in));
    if (w != h || w <= 0) throw InvalidArgument(path.string() + ": mask must be square");
    if (maxval <= 0 || maxval > 255) throw InvalidArgument(path.string() + ": only 8-bit PGM is supported");

    std::vector<int> pix(static_cast<std::size_t>(w) * h);
    if (magic == "P5") {
        in.get();  // single whitespace after maxval
        std::vector<unsigned char> raw(pix.size());
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            throw InvalidArgument(path.string() + ": truncated pixel data");
        for (std::size_t i = 0; i < raw.size(); ++i) pix[i] = raw[i];
    } else {
        for (auto& p : pix) p = std::stoi(pgm_token(in));
    }

    RasterMask m;
    m.grid = BoxGrid{halfwidth, w};
    m.cells.assign(pix.size(), 0);
    // image row 0 is the top of the box
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            m.cells[m.grid.index(h - 1 - r, c)] = pix[static_cast<std::size_t>(r) * w + c] * 255 / maxval >= 128;
    return m;
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<std::pair<double, double>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        auto toks = split(line);
        if (toks.empty()) continue;
        if (toks.size() != 2)
            throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
        out.emplace_back(parse_double(toks[0], path, lineno), parse_double(toks[1], path, lineno));
    }
    return out;
}

}  // namespace regfrac
