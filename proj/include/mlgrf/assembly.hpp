#ifndef MLGRF_ASSEMBLY_HPP
#define MLGRF_ASSEMBLY_HPP

#include "mlgrf/csr.hpp"
#include "mlgrf/mesh.hpp"
#include "mlgrf/solvers.hpp"

namespace mlgrf
{

/// Diagonal mass matrix of cellwise constants: one cell volume per cell.
Vector assemble_p0_mass(const CartesianMesh& mesh);

/**
   Divergence matrix (cells x faces) in the net-flux convention: the row of
   a cell carries +1 on its high-side faces and -1 on its low-side faces,
   so (B u)_cell is the net outward flux of the cell.
*/
CsrMatrix assemble_divergence(const CartesianMesh& mesh);

/**
   Mass matrix of the lowest-order face-element space, weighted by a
   cellwise-constant coefficient, integrated exactly. For a cell of size
   h_a along the face axis and transverse area t, the local 2x2 block of
   the axis face pair is coeff * (h_a / t) * [[1/3, 1/6], [1/6, 1/3]].
*/
CsrMatrix assemble_rt_mass(const CartesianMesh& mesh, Span cell_coefficient);
CsrMatrix assemble_rt_mass(const CartesianMesh& mesh);

/**
   One level of the mixed reaction-diffusion discretization with the
   zero-normal-flux boundary handled by symmetric elimination:

     M   face mass (constrained rows/cols replaced by the identity)
     B   divergence with constrained columns dropped
     W   cell volumes
     A   M + kappa^-2 B^T W^-1 B, symmetric positive definite

   Immutable after assembly; shareable across threads.
*/
struct AssembledLevel
{
    const CartesianMesh* mesh = nullptr;
    double kappa = 0.0;
    CsrMatrix M;
    CsrMatrix B;
    CsrMatrix Bt;
    Vector W;
    CsrMatrix A;
    std::vector<int> essential_faces;

    int num_cells() const { return mesh->num_cells(); }
    int num_faces() const { return mesh->num_faces(); }
};

/// Schur operator M + kappa^-2 B^T W^-1 B from already-constrained M, B.
CsrMatrix assemble_spde_schur(const CsrMatrix& M_bc, const CsrMatrix& B_bc,
                              Span W, double kappa);

/// Assembles a level of the sampler system; essential faces default to the
/// whole boundary.
AssembledLevel assemble_level(const CartesianMesh& mesh, double kappa);
AssembledLevel assemble_level(const CartesianMesh& mesh, double kappa,
                              std::vector<int> essential_faces);

/**
   Applies the discrete gradient of a cellwise-constant field: solves
   M g = -B^T theta on the zero-normal-trace space. The result satisfies
   (g, v)_M = -(div v, theta) for every constrained-trace test vector v.
*/
Vector discrete_gradient_apply(const AssembledLevel& level, Span theta,
                               const IterSolveOptions& opts, SolveReport* report = nullptr);

} // namespace mlgrf

#endif
