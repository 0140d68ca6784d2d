#include "mlgrf/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace mlgrf
{

std::string format_double(double v)
{
    char buf[48];
    for (int precision = 15; precision <= 17; ++precision)
    {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v)
            break;
    }
    return buf;
}

namespace
{

std::ofstream open_out(const std::string& path, bool binary)
{
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out)
        throw IoError("cannot write file: " + path);
    return out;
}

void write_header(std::ofstream& out, const std::vector<std::string>& header_lines)
{
    for (const std::string& line : header_lines)
        out << "# " << line << "\n";
}

} // namespace

void write_field_csv(const std::string& path, const CartesianMesh& mesh, Span values,
                     int level, std::uint64_t seed,
                     const std::vector<std::string>& header_lines)
{
    if (static_cast<int>(values.size()) != mesh.num_cells())
        throw std::invalid_argument("write_field_csv: value count does not match mesh");
    std::ofstream out = open_out(path, false);
    write_header(out, header_lines);
    out << "# dim = " << mesh.dim() << "\n";
    out << "# counts =";
    for (int a = 0; a < mesh.dim(); ++a)
        out << " " << mesh.cell_counts()[a];
    out << "\n# level = " << level << "\n";
    out << "# seed = " << seed << "\n";

    const int nx = mesh.cell_counts()[0];
    for (int row = 0; row < mesh.num_cells() / nx; ++row)
    {
        for (int i = 0; i < nx; ++i)
            out << (i ? "," : "") << format_double(values[row * nx + i]);
        out << "\n";
    }
    if (!out)
        throw IoError("failed while writing: " + path);
}

void write_field_binary(const std::string& path, const CartesianMesh& mesh, Span values,
                        int level, std::uint64_t seed)
{
    if (static_cast<int>(values.size()) != mesh.num_cells())
        throw std::invalid_argument("write_field_binary: value count does not match mesh");
    std::ofstream out = open_out(path, true);

    auto put_u32 = [&](std::uint32_t v)
    { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_u64 = [&](std::uint64_t v)
    { out.write(reinterpret_cast<const char*>(&v), 8); };

    out.write("GRF1", 4);
    put_u32(static_cast<std::uint32_t>(mesh.dim()));
    for (int a = 0; a < 3; ++a)
        put_u32(static_cast<std::uint32_t>(mesh.cell_counts()[a]));
    put_u32(static_cast<std::uint32_t>(level));
    put_u64(seed);
    put_u64(static_cast<std::uint64_t>(values.size()));
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!out)
        throw IoError("failed while writing: " + path);
}

std::pair<BinaryFieldHeader, Vector> read_field_binary(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open field dump: " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "GRF1", 4) != 0)
        throw IoError("not a field dump (bad magic): " + path);

    auto get_u32 = [&]() -> std::uint32_t
    {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_u64 = [&]() -> std::uint64_t
    {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };

    BinaryFieldHeader h;
    h.dim = static_cast<int>(get_u32());
    for (int a = 0; a < 3; ++a)
        h.counts[a] = static_cast<int>(get_u32());
    h.level = static_cast<int>(get_u32());
    h.seed = get_u64();
    const std::uint64_t n = get_u64();
    Vector values(n);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in)
        throw IoError("truncated field dump: " + path);
    return {h, std::move(values)};
}

void write_matrix_binary(const std::string& path, int rows, int cols, Span data)
{
    if (static_cast<std::size_t>(rows) * cols != data.size())
        throw std::invalid_argument("write_matrix_binary: shape does not match data");
    std::ofstream out = open_out(path, true);
    auto put_u32 = [&](std::uint32_t v)
    { out.write(reinterpret_cast<const char*>(&v), 4); };
    out.write("GRM1", 4);
    put_u32(static_cast<std::uint32_t>(rows));
    put_u32(static_cast<std::uint32_t>(cols));
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!out)
        throw IoError("failed while writing: " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header_lines,
               const std::vector<std::string>& column_names,
               const std::vector<std::vector<std::string>>& rows)
{
    std::ofstream out = open_out(path, false);
    write_header(out, header_lines);
    for (std::size_t i = 0; i < column_names.size(); ++i)
        out << (i ? "," : "") << column_names[i];
    out << "\n";
    for (const auto& row : rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out)
        throw IoError("failed while writing: " + path);
}

} // namespace mlgrf
