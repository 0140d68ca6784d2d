#include "mlgrf/mesh.hpp"

#include <cmath>

namespace mlgrf
{

CartesianMesh::CartesianMesh(int dim, std::array<double, 3> origin,
                             std::array<double, 3> cell_sizes, std::array<int, 3> cell_counts)
    : dim_(dim), origin_(origin), h_(cell_sizes), n_(cell_counts)
{
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("CartesianMesh: dim must be 2 or 3");
    for (int a = dim; a < 3; ++a)
    {
        n_[a] = 1;
        h_[a] = 1.0;
        origin_[a] = 0.0;
    }
    for (int a = 0; a < dim; ++a)
    {
        if (n_[a] < 1)
            throw std::invalid_argument("CartesianMesh: cell counts must be positive");
        if (!(h_[a] > 0.0))
            throw std::invalid_argument("CartesianMesh: cell sizes must be positive");
    }
    num_cells_ = n_[0] * n_[1] * n_[2];
    face_offset_[0] = 0;
    for (int a = 0; a < 3; ++a)
    {
        const int count = a < dim ? (n_[a] + 1) * (num_cells_ / n_[a]) : 0;
        face_offset_[a + 1] = face_offset_[a] + count;
    }
}

double CartesianMesh::cell_volume() const
{
    double v = 1.0;
    for (int a = 0; a < dim_; ++a)
        v *= h_[a];
    return v;
}

double CartesianMesh::face_area(int axis) const
{
    double v = 1.0;
    for (int a = 0; a < dim_; ++a)
        if (a != axis)
            v *= h_[a];
    return v;
}

int CartesianMesh::cell_index(const std::array<int, 3>& c) const
{
    return c[0] + n_[0] * (c[1] + n_[1] * c[2]);
}

std::array<int, 3> CartesianMesh::cell_coords(int cell) const
{
    std::array<int, 3> c;
    c[0] = cell % n_[0];
    c[1] = (cell / n_[0]) % n_[1];
    c[2] = cell / (n_[0] * n_[1]);
    return c;
}

std::array<double, 3> CartesianMesh::cell_centroid(int cell) const
{
    const auto c = cell_coords(cell);
    std::array<double, 3> x{};
    for (int a = 0; a < dim_; ++a)
        x[a] = origin_[a] + (c[a] + 0.5) * h_[a];
    return x;
}

int CartesianMesh::face_index(int axis, const std::array<int, 3>& c) const
{
    // Plane index runs fastest, then the transverse coordinates in axis order.
    int id = 0;
    int stride = 1;
    for (int a = 0; a < 3; ++a)
    {
        const int extent = a == axis ? n_[a] + 1 : n_[a];
        id += c[a] * stride;
        stride *= extent;
    }
    return face_offset_[axis] + id;
}

std::pair<int, int> CartesianMesh::cell_faces(int axis, int cell) const
{
    auto c = cell_coords(cell);
    const int lo = face_index(axis, c);
    c[axis] += 1;
    return {lo, face_index(axis, c)};
}

void CartesianMesh::face_coords(int face, int& axis, std::array<int, 3>& c) const
{
    axis = 0;
    while (face >= face_offset_[axis + 1])
        ++axis;
    int id = face - face_offset_[axis];
    for (int a = 0; a < 3; ++a)
    {
        const int extent = a == axis ? n_[a] + 1 : n_[a];
        c[a] = id % extent;
        id /= extent;
    }
}

bool CartesianMesh::is_boundary_face(int face) const
{
    int axis;
    std::array<int, 3> c;
    face_coords(face, axis, c);
    return c[axis] == 0 || c[axis] == n_[axis];
}

std::vector<int> CartesianMesh::boundary_faces() const
{
    std::vector<int> out;
    for (int a = 0; a < dim_; ++a)
        for (int side = 0; side < 2; ++side)
        {
            auto faces = boundary_faces(a, side);
            out.insert(out.end(), faces.begin(), faces.end());
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> CartesianMesh::boundary_faces(int axis, int side) const
{
    std::vector<int> out;
    std::array<int, 3> c{};
    c[axis] = side == 0 ? 0 : n_[axis];
    const int a1 = axis == 0 ? 1 : 0;
    const int a2 = axis == 2 ? 1 : 2;
    for (int j = 0; j < n_[a2]; ++j)
        for (int i = 0; i < n_[a1]; ++i)
        {
            c[a1] = i;
            c[a2] = j;
            out.push_back(face_index(axis, c));
        }
    return out;
}

CartesianMesh build_cartesian_mesh(int dim, std::array<double, 3> origin,
                                   std::array<double, 3> extents,
                                   std::array<int, 3> cell_counts)
{
    std::array<double, 3> h{1.0, 1.0, 1.0};
    for (int a = 0; a < dim; ++a)
    {
        if (!(extents[a] > 0.0))
            throw std::invalid_argument("build_cartesian_mesh: extents must be positive");
        if (cell_counts[a] < 1)
            throw std::invalid_argument("build_cartesian_mesh: cell counts must be positive");
        h[a] = extents[a] / cell_counts[a];
    }
    return CartesianMesh(dim, origin, h, cell_counts);
}

CartesianMesh refine(const CartesianMesh& mesh)
{
    std::array<int, 3> n = mesh.cell_counts();
    std::array<double, 3> h = mesh.cell_sizes();
    for (int a = 0; a < mesh.dim(); ++a)
    {
        n[a] *= 2;
        h[a] *= 0.5;
    }
    return CartesianMesh(mesh.dim(), mesh.origin(), h, n);
}

EmbeddingMap::EmbeddingMap(const CartesianMesh& mesh)
    : dim_(mesh.dim()), physical_counts_(mesh.cell_counts()),
      embedded_counts_(mesh.cell_counts())
{
}

EmbeddingMap::EmbeddingMap(const CartesianMesh& physical, const CartesianMesh& embedded,
                           std::array<int, 3> offset_cells, std::array<double, 3> padding)
    : dim_(physical.dim()), physical_counts_(physical.cell_counts()),
      embedded_counts_(embedded.cell_counts()), offset_(offset_cells), padding_(padding)
{
    for (int a = 0; a < dim_; ++a)
    {
        if (offset_[a] < 0 || offset_[a] + physical_counts_[a] > embedded_counts_[a])
            throw std::invalid_argument("EmbeddingMap: physical box not contained in host mesh");
    }
}

int EmbeddingMap::embedded_cell(int physical_cell) const
{
    const int nx = physical_counts_[0];
    const int ny = physical_counts_[1];
    const int i = physical_cell % nx + offset_[0];
    const int j = (physical_cell / nx) % ny + offset_[1];
    const int k = physical_cell / (nx * ny) + offset_[2];
    return i + embedded_counts_[0] * (j + embedded_counts_[1] * k);
}

std::vector<int> EmbeddingMap::cell_index_map() const
{
    std::vector<int> map(num_physical_cells());
    for (std::size_t p = 0; p < map.size(); ++p)
        map[p] = embedded_cell(static_cast<int>(p));
    return map;
}

Vector EmbeddingMap::restrict_cells(Span embedded_values) const
{
    Vector out(num_physical_cells());
    for (std::size_t p = 0; p < out.size(); ++p)
        out[p] = embedded_values[embedded_cell(static_cast<int>(p))];
    return out;
}

bool EmbeddingMap::is_identity() const
{
    return offset_ == std::array<int, 3>{0, 0, 0} && physical_counts_ == embedded_counts_;
}

std::pair<CartesianMesh, EmbeddingMap> embed_mesh(const CartesianMesh& physical,
                                                  std::array<double, 3> padding)
{
    std::array<int, 3> pad_cells{};
    const auto& h = physical.cell_sizes();
    for (int a = 0; a < physical.dim(); ++a)
    {
        if (padding[a] < 0.0)
            throw std::invalid_argument("embed_mesh: padding must be nonnegative");
        const double cells = padding[a] / h[a];
        pad_cells[a] = static_cast<int>(std::lround(cells));
        if (std::abs(cells - pad_cells[a]) > 1e-9 * std::max(1.0, cells))
            throw std::invalid_argument("embed_mesh: padding must be a whole number of cells");
    }

    std::array<int, 3> n = physical.cell_counts();
    std::array<double, 3> origin = physical.origin();
    for (int a = 0; a < physical.dim(); ++a)
    {
        n[a] += 2 * pad_cells[a];
        origin[a] -= pad_cells[a] * h[a];
    }
    CartesianMesh host(physical.dim(), origin, h, n);
    EmbeddingMap map(physical, host, pad_cells, padding);
    return {host, map};
}

std::pair<CartesianMesh, EmbeddingMap> embed_mesh_at_least(const CartesianMesh& physical,
                                                           std::array<double, 3> min_padding)
{
    std::array<double, 3> padding{};
    const auto& h = physical.cell_sizes();
    for (int a = 0; a < physical.dim(); ++a)
    {
        if (min_padding[a] < 0.0)
            throw std::invalid_argument("embed_mesh_at_least: padding must be nonnegative");
        const int cells = static_cast<int>(std::ceil(min_padding[a] / h[a] - 1e-9));
        padding[a] = cells * h[a];
    }
    return embed_mesh(physical, padding);
}

EmbeddingMap refine_embedding(const EmbeddingMap& map)
{
    std::array<int, 3> phys = map.physical_counts();
    std::array<int, 3> host = map.embedded_counts();
    std::array<int, 3> off = map.offset_cells();
    const int dim = map.dim();
    for (int a = 0; a < dim; ++a)
    {
        phys[a] *= 2;
        host[a] *= 2;
        off[a] *= 2;
    }
    CartesianMesh p(dim, {0, 0, 0}, {1, 1, 1}, phys);
    CartesianMesh e(dim, {0, 0, 0}, {1, 1, 1}, host);
    return EmbeddingMap(p, e, off, map.padding());
}

} // namespace mlgrf
