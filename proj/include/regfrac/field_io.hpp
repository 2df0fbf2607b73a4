#pragma once

#include "regfrac/geometry.hpp"
#include "regfrac/grid.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace regfrac {

/// CSV with a '#' header line; one grid row per line starting at the bottom
/// row (y = -L + h/2), values left to right in x; obstacle cells are written
/// as "nan". Values use 17 significant digits, so a write/read round trip is
/// exact.
void write_field_csv(const Field& field, const std::filesystem::path& path);
std::vector<double> read_field_csv(const std::filesystem::path& path, int n_cells);

/// 8-bit binary PGM (P5), value u in [0,1] mapped to round(255 u), top image
/// row = largest y. Obstacle cells are black.
void write_field_pgm(const Field& field, const std::filesystem::path& path);

/// Raster obstacle from a square PGM covering [-L, L]^2: pixels >= 128 are
/// in K.
RasterMask read_mask_pgm(const std::filesystem::path& path, double halfwidth);

/// Two numeric columns (comma or whitespace separated); '#' lines skipped.
std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path);

}  // namespace regfrac
