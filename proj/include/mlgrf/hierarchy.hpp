#ifndef MLGRF_HIERARCHY_HPP
#define MLGRF_HIERARCHY_HPP

#include "mlgrf/csr.hpp"
#include "mlgrf/mesh.hpp"

namespace mlgrf
{

/**
   Nested sequence of meshes, finest first (level 0) to coarsest (level L),
   each level refining the next by a factor of 2 per axis, together with
   the canonical inter-level operators:

   - cell_prolongation[l] injects a coarse cellwise-constant vector into
     level l (one entry of 1 per fine cell, at its parent);
   - flux_prolongation[l] interpolates a coarse face-flux vector into
     level l, reproducing the coarse lowest-order face-element field
     exactly (coarse-face fluxes are preserved).

   Immutable after construction.
*/
struct MeshHierarchy
{
    std::vector<CartesianMesh> levels;
    std::vector<CsrMatrix> cell_prolongation; // size levels-1, maps l+1 -> l
    std::vector<CsrMatrix> flux_prolongation; // size levels-1, maps l+1 -> l

    int num_levels() const { return static_cast<int>(levels.size()); }
    int coarsest() const { return num_levels() - 1; }
};

/// Builds `num_levels` meshes by uniformly refining `coarsest` upward.
MeshHierarchy refine_hierarchy(const CartesianMesh& coarsest, int num_levels);

/// Cell injection matrix from `coarse` to its refinement `fine`.
CsrMatrix build_cell_prolongation(const CartesianMesh& fine, const CartesianMesh& coarse);

/// Canonical lowest-order face-element interpolation from `coarse` to `fine`.
CsrMatrix build_flux_prolongation(const CartesianMesh& fine, const CartesianMesh& coarse);

} // namespace mlgrf

#endif
