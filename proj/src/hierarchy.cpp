#include "mlgrf/hierarchy.hpp"

#include <cmath>

namespace mlgrf
{

namespace
{

void check_refinement(const CartesianMesh& fine, const CartesianMesh& coarse)
{
    if (fine.dim() != coarse.dim())
        throw std::invalid_argument("prolongation: dimension mismatch");
    for (int a = 0; a < fine.dim(); ++a)
        if (fine.cell_counts()[a] != 2 * coarse.cell_counts()[a])
            throw std::invalid_argument("prolongation: fine mesh must refine coarse by 2");
}

} // namespace

CsrMatrix build_cell_prolongation(const CartesianMesh& fine, const CartesianMesh& coarse)
{
    check_refinement(fine, coarse);
    CooBuilder p(fine.num_cells(), coarse.num_cells());
    for (int cell = 0; cell < fine.num_cells(); ++cell)
    {
        auto c = fine.cell_coords(cell);
        for (int a = 0; a < fine.dim(); ++a)
            c[a] /= 2;
        p.add(cell, coarse.cell_index(c), 1.0);
    }
    return p.to_csr();
}

CsrMatrix build_flux_prolongation(const CartesianMesh& fine, const CartesianMesh& coarse)
{
    check_refinement(fine, coarse);
    const int dim = fine.dim();
    // A unit coarse flux splits evenly over the children of the coarse face,
    // and the linear normal profile of the coarse basis puts half that much
    // through each mid-cell fine face of the two adjacent coarse cells.
    const double child_weight = dim == 2 ? 0.5 : 0.25;
    const double mid_weight = 0.5 * child_weight;

    CooBuilder p(fine.num_faces(), coarse.num_faces());
    for (int face = 0; face < fine.num_faces(); ++face)
    {
        int axis;
        std::array<int, 3> c;
        fine.face_coords(face, axis, c);
        std::array<int, 3> cc;
        for (int a = 0; a < 3; ++a)
            cc[a] = a < dim ? c[a] / 2 : 0;
        if (c[axis] % 2 == 0)
        {
            cc[axis] = c[axis] / 2;
            p.add(face, coarse.face_index(axis, cc), child_weight);
        }
        else
        {
            // Mid-cell plane of coarse cell (c[axis]-1)/2 along `axis`.
            cc[axis] = (c[axis] - 1) / 2;
            p.add(face, coarse.face_index(axis, cc), mid_weight);
            cc[axis] += 1;
            p.add(face, coarse.face_index(axis, cc), mid_weight);
        }
    }
    return p.to_csr();
}

MeshHierarchy refine_hierarchy(const CartesianMesh& coarsest, int num_levels)
{
    if (num_levels < 1)
        throw std::invalid_argument("refine_hierarchy: need at least one level");

    MeshHierarchy h;
    h.levels.resize(num_levels);
    h.levels[num_levels - 1] = coarsest;
    for (int l = num_levels - 2; l >= 0; --l)
        h.levels[l] = refine(h.levels[l + 1]);

    h.cell_prolongation.reserve(num_levels - 1);
    h.flux_prolongation.reserve(num_levels - 1);
    for (int l = 0; l + 1 < num_levels; ++l)
    {
        h.cell_prolongation.push_back(build_cell_prolongation(h.levels[l], h.levels[l + 1]));
        h.flux_prolongation.push_back(build_flux_prolongation(h.levels[l], h.levels[l + 1]));
    }
    return h;
}

} // namespace mlgrf
