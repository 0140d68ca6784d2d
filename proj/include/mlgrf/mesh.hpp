#ifndef MLGRF_MESH_HPP
#define MLGRF_MESH_HPP

#include <array>

#include "mlgrf/common.hpp"

namespace mlgrf
{

/**
   Structured tensor-product grid of quadrilaterals (2D) or hexahedra (3D).

   Cells are numbered lexicographically with the x index fastest. Face
   unknowns are grouped by axis: all faces with normal e_x first, then
   e_y, then e_z; within an axis the plane index runs fastest. A face
   value is the net flux through the face in the positive axis direction.

   Immutable after construction; safe to share across threads.
*/
class CartesianMesh
{
public:
    CartesianMesh() = default;
    CartesianMesh(int dim, std::array<double, 3> origin,
                  std::array<double, 3> cell_sizes, std::array<int, 3> cell_counts);

    int dim() const { return dim_; }
    const std::array<double, 3>& origin() const { return origin_; }
    const std::array<double, 3>& cell_sizes() const { return h_; }
    const std::array<int, 3>& cell_counts() const { return n_; }

    int num_cells() const { return num_cells_; }
    int num_faces() const { return face_offset_[3]; }
    int num_faces(int axis) const { return face_offset_[axis + 1] - face_offset_[axis]; }
    int face_offset(int axis) const { return face_offset_[axis]; }

    double cell_volume() const;
    double face_area(int axis) const;
    double extent(int axis) const { return h_[axis] * n_[axis]; }

    int cell_index(const std::array<int, 3>& c) const;
    std::array<int, 3> cell_coords(int cell) const;
    std::array<double, 3> cell_centroid(int cell) const;

    /// Face with normal along `axis` at plane index i in [0, n[axis]],
    /// transverse cell coordinates in the remaining slots of `c`.
    int face_index(int axis, const std::array<int, 3>& c) const;

    /// The two face ids of `cell` along `axis`: (low side, high side).
    std::pair<int, int> cell_faces(int axis, int cell) const;

    bool is_boundary_face(int face) const;
    std::vector<int> boundary_faces() const;
    /// Boundary faces on one side of one axis (side 0 = low, 1 = high).
    std::vector<int> boundary_faces(int axis, int side) const;

    /// Axis of a global face id and its (plane, transverse) coordinates.
    void face_coords(int face, int& axis, std::array<int, 3>& c) const;

private:
    int dim_ = 0;
    std::array<double, 3> origin_{};
    std::array<double, 3> h_{1.0, 1.0, 1.0};
    std::array<int, 3> n_{1, 1, 1};
    int num_cells_ = 0;
    std::array<int, 4> face_offset_{};
};

CartesianMesh build_cartesian_mesh(int dim, std::array<double, 3> origin,
                                   std::array<double, 3> extents,
                                   std::array<int, 3> cell_counts);

/// Uniform refinement by a factor of 2 per axis.
CartesianMesh refine(const CartesianMesh& mesh);

/**
   Injection of a physical (sub-)mesh into a padded host mesh: maps every
   physical cell to the congruent host cell. Padding is a whole number of
   cells on each side.
*/
class EmbeddingMap
{
public:
    /// Identity embedding (no padding).
    explicit EmbeddingMap(const CartesianMesh& mesh);
    EmbeddingMap(const CartesianMesh& physical, const CartesianMesh& embedded,
                 std::array<int, 3> offset_cells, std::array<double, 3> padding);

    int dim() const { return dim_; }
    const std::array<int, 3>& offset_cells() const { return offset_; }
    const std::array<double, 3>& padding() const { return padding_; }
    int num_physical_cells() const { return physical_counts_[0] * physical_counts_[1] * physical_counts_[2]; }
    const std::array<int, 3>& physical_counts() const { return physical_counts_; }
    const std::array<int, 3>& embedded_counts() const { return embedded_counts_; }

    /// Host cell id of a physical cell id.
    int embedded_cell(int physical_cell) const;
    /// Explicit physical-cell -> host-cell index map.
    std::vector<int> cell_index_map() const;
    /// Restrict a host cell vector to the physical cells.
    Vector restrict_cells(Span embedded_values) const;

    bool is_identity() const;

private:
    int dim_ = 0;
    std::array<int, 3> physical_counts_{1, 1, 1};
    std::array<int, 3> embedded_counts_{1, 1, 1};
    std::array<int, 3> offset_{};
    std::array<double, 3> padding_{};
};

/// Pad a physical mesh by whole cells on every side. `padding` is a
/// physical length per axis (applied to both sides) and must be an
/// integer multiple of the cell size.
std::pair<CartesianMesh, EmbeddingMap> embed_mesh(const CartesianMesh& physical,
                                                  std::array<double, 3> padding);

/// Same, but with the padding rounded up to the next whole cell.
std::pair<CartesianMesh, EmbeddingMap> embed_mesh_at_least(const CartesianMesh& physical,
                                                           std::array<double, 3> min_padding);

/// Embedding at the next finer level (cell counts and offsets double).
EmbeddingMap refine_embedding(const EmbeddingMap& map);

} // namespace mlgrf

#endif
