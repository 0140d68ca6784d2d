#include "mlgrf/assembly.hpp"

namespace mlgrf
{

Vector assemble_p0_mass(const CartesianMesh& mesh)
{
    return Vector(mesh.num_cells(), mesh.cell_volume());
}

CsrMatrix assemble_divergence(const CartesianMesh& mesh)
{
    CooBuilder b(mesh.num_cells(), mesh.num_faces());
    for (int cell = 0; cell < mesh.num_cells(); ++cell)
        for (int axis = 0; axis < mesh.dim(); ++axis)
        {
            const auto [lo, hi] = mesh.cell_faces(axis, cell);
            b.add(cell, lo, -1.0);
            b.add(cell, hi, +1.0);
        }
    return b.to_csr();
}

CsrMatrix assemble_rt_mass(const CartesianMesh& mesh, Span cell_coefficient)
{
    if (static_cast<int>(cell_coefficient.size()) != mesh.num_cells())
        throw std::invalid_argument("assemble_rt_mass: coefficient size mismatch");
    for (double c : cell_coefficient)
        if (!(c > 0.0))
            throw std::invalid_argument("assemble_rt_mass: coefficient must be positive");

    CooBuilder m(mesh.num_faces(), mesh.num_faces());
    const double vol = mesh.cell_volume();
    for (int cell = 0; cell < mesh.num_cells(); ++cell)
    {
        const double k = cell_coefficient[cell];
        for (int axis = 0; axis < mesh.dim(); ++axis)
        {
            // Exact integral of the linear normal profile over the cell,
            // in net-flux unknowns: local block s*[[1/3,1/6],[1/6,1/3]]
            // with s = h_axis / (transverse area) = h_axis^2 / volume.
            const double s = k * mesh.cell_sizes()[axis] * mesh.cell_sizes()[axis] / vol;
            const auto [lo, hi] = mesh.cell_faces(axis, cell);
            m.add(lo, lo, s / 3.0);
            m.add(hi, hi, s / 3.0);
            m.add(lo, hi, s / 6.0);
            m.add(hi, lo, s / 6.0);
        }
    }
    return m.to_csr();
}

CsrMatrix assemble_rt_mass(const CartesianMesh& mesh)
{
    return assemble_rt_mass(mesh, Vector(mesh.num_cells(), 1.0));
}

CsrMatrix assemble_spde_schur(const CsrMatrix& M_bc, const CsrMatrix& B_bc,
                              Span W, double kappa)
{
    if (!(kappa > 0.0))
        throw std::invalid_argument("assemble_spde_schur: kappa must be positive");
    Vector winv(W.size());
    for (std::size_t i = 0; i < W.size(); ++i)
        winv[i] = 1.0 / W[i];
    CsrMatrix bw = csr_scale_rows(winv, B_bc);
    CsrMatrix btwb = csr_matmul(csr_transpose(B_bc), bw);
    return csr_add(M_bc, 1.0 / (kappa * kappa), btwb);
}

AssembledLevel assemble_level(const CartesianMesh& mesh, double kappa)
{
    return assemble_level(mesh, kappa, mesh.boundary_faces());
}

AssembledLevel assemble_level(const CartesianMesh& mesh, double kappa,
                              std::vector<int> essential_faces)
{
    if (!(kappa > 0.0))
        throw std::invalid_argument("assemble_level: kappa must be positive");

    AssembledLevel lvl;
    lvl.mesh = &mesh;
    lvl.kappa = kappa;
    lvl.essential_faces = std::move(essential_faces);
    lvl.W = assemble_p0_mass(mesh);
    lvl.M = eliminate_rows_cols(assemble_rt_mass(mesh), lvl.essential_faces);
    lvl.B = eliminate_cols(assemble_divergence(mesh), lvl.essential_faces);
    lvl.Bt = csr_transpose(lvl.B);
    lvl.A = assemble_spde_schur(lvl.M, lvl.B, lvl.W, kappa);
    return lvl;
}

Vector discrete_gradient_apply(const AssembledLevel& level, Span theta,
                               const IterSolveOptions& opts, SolveReport* report)
{
    if (static_cast<int>(theta.size()) != level.num_cells())
        throw std::invalid_argument("discrete_gradient_apply: size mismatch");

    Vector rhs(level.num_faces(), 0.0);
    level.Bt.apply(theta, rhs);
    for (double& v : rhs)
        v = -v;

    Vector g(level.num_faces(), 0.0);
    auto precond = symmetric_gauss_seidel_preconditioner(level.M);
    SolveReport rep = cg_solve(level.M, rhs, g, precond, opts);
    if (!rep.converged)
        throw SolverError("discrete_gradient_apply: inner mass solve did not converge", rep);
    if (report)
        *report = rep;
    return g;
}

} // namespace mlgrf
