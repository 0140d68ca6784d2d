#ifndef MLGRF_IO_HPP
#define MLGRF_IO_HPP

#include <string>

#include "mlgrf/mesh.hpp"

namespace mlgrf
{

/// Shortest round-trippable decimal form of a double; deterministic.
std::string format_double(double v);

/**
   Writes a cell field as CSV: `#`-prefixed header lines carrying the
   resolved configuration, seed and level, then one mesh row of
   comma-separated values per line (x fastest).
*/
void write_field_csv(const std::string& path, const CartesianMesh& mesh, Span values,
                     int level, std::uint64_t seed,
                     const std::vector<std::string>& header_lines);

/**
   Binary dump: little-endian header (magic "GRF1", u32 dim, u32 counts[3],
   u32 level, u64 seed, u64 cell count) followed by the cell values as
   64-bit floats in row-major order.
*/
void write_field_binary(const std::string& path, const CartesianMesh& mesh, Span values,
                        int level, std::uint64_t seed);

struct BinaryFieldHeader
{
    int dim = 0;
    std::array<int, 3> counts{};
    int level = 0;
    std::uint64_t seed = 0;
};

/// Reads a binary dump written by write_field_binary.
std::pair<BinaryFieldHeader, Vector> read_field_binary(const std::string& path);

/// Dense row-major block with a minimal binary header (magic "GRM1",
/// u32 rows, u32 cols), for eigenvector dumps and similar.
void write_matrix_binary(const std::string& path, int rows, int cols, Span data);

/// Generic CSV with `#` header lines, one column-name row, then rows of
/// preformatted cells.
void write_csv(const std::string& path, const std::vector<std::string>& header_lines,
               const std::vector<std::string>& column_names,
               const std::vector<std::vector<std::string>>& rows);

} // namespace mlgrf

#endif
