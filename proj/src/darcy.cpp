#include "mlgrf/darcy.hpp"

#include <cmath>
#include <fstream>

#include "mlgrf/assembly.hpp"

namespace mlgrf
{

Coefficient build_coefficient(Span theta_phys, Span mean_log_field)
{
    if (!mean_log_field.empty() && mean_log_field.size() != theta_phys.size())
        throw std::invalid_argument("build_coefficient: mean field length mismatch");
    Coefficient c;
    c.k.resize(theta_phys.size());
    for (std::size_t i = 0; i < theta_phys.size(); ++i)
    {
        const double m = mean_log_field.empty() ? 0.0 : mean_log_field[i];
        if (!std::isfinite(theta_phys[i]) || !std::isfinite(m))
            throw std::invalid_argument("build_coefficient: non-finite log field entry");
        c.k[i] = std::exp(m + theta_phys[i]);
    }
    return c;
}

DarcySolution solve_darcy(const CartesianMesh& mesh, const Coefficient& coeff,
                          const DarcyBC& bc, const IterSolveOptions& opts)
{
    if (static_cast<int>(coeff.k.size()) != mesh.num_cells())
        throw std::invalid_argument("solve_darcy: coefficient length mismatch");
    if (bc.flow_axis < 0 || bc.flow_axis >= mesh.dim())
        throw std::invalid_argument("solve_darcy: flow axis out of range");

    // Flux form weighted by 1/k; no-flow faces are every boundary face off
    // the two pressure planes.
    Vector kinv(coeff.k.size());
    for (std::size_t i = 0; i < kinv.size(); ++i)
    {
        if (!(coeff.k[i] > 0.0))
            throw std::invalid_argument("solve_darcy: coefficient must be positive");
        kinv[i] = 1.0 / coeff.k[i];
    }

    std::vector<int> noflow;
    for (int axis = 0; axis < mesh.dim(); ++axis)
    {
        if (axis == bc.flow_axis)
            continue;
        for (int side = 0; side < 2; ++side)
        {
            auto f = mesh.boundary_faces(axis, side);
            noflow.insert(noflow.end(), f.begin(), f.end());
        }
    }

    const CsrMatrix m = eliminate_rows_cols(assemble_rt_mass(mesh, kinv), noflow);
    const CsrMatrix b = eliminate_cols(assemble_divergence(mesh), noflow);

    const int nf = mesh.num_faces();
    const int nc = mesh.num_cells();

    // Dirichlet pressure data loads the flux equation: for a boundary
    // basis field of unit outward flux the contribution is -p_D.
    Vector rhs(nf + nc, 0.0);
    for (int face : mesh.boundary_faces(bc.flow_axis, 0))
        rhs[face] = +bc.p_in; // outward normal is the negative axis
    for (int face : mesh.boundary_faces(bc.flow_axis, 1))
        rhs[face] = -bc.p_out;

    BlockSaddleOperator op(m, b);
    Preconditioner precond = block_diagonal_saddle_preconditioner(m, b);

    Vector x(nf + nc, 0.0);
    SolveReport rep = minres_solve(op, rhs, x, precond, opts);
    if (!rep.converged)
        throw SolverError("solve_darcy: saddle solve did not converge", rep);

    DarcySolution sol;
    sol.report = rep;
    sol.flux.assign(x.begin(), x.begin() + nf);
    // The symmetric form solves for the negated pressure.
    sol.pressure.resize(nc);
    for (int i = 0; i < nc; ++i)
        sol.pressure[i] = -x[nf + i];

    Vector div = b.multiply(sol.flux);
    sol.divergence_inf_norm = norm_inf(div);
    return sol;
}

double boundary_flux_density(const CartesianMesh& mesh, Span flux, int axis, int side)
{
    const std::vector<int> faces = mesh.boundary_faces(axis, side);
    if (faces.empty())
        throw std::invalid_argument("boundary_flux_density: empty boundary set");
    const double orientation = side == 0 ? -1.0 : +1.0;
    double total = 0.0;
    for (int f : faces)
        total += orientation * flux[f];
    return total / (mesh.face_area(axis) * static_cast<double>(faces.size()));
}

double effective_permeability(const CartesianMesh& mesh, const DarcySolution& sol,
                              const DarcyBC& bc)
{
    return boundary_flux_density(mesh, sol.flux, bc.flow_axis, 1);
}

Vector load_spe10_top_layer(const std::string& path, int nx, int ny)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open permeability dataset: " + path);
    const std::size_t need = static_cast<std::size_t>(nx) * ny;
    Vector values;
    values.reserve(need);
    double v;
    while (values.size() < need && in >> v)
        values.push_back(v);
    if (values.size() < need)
        throw IoError("permeability dataset too short: " + path + " (read "
                      + std::to_string(values.size()) + " of " + std::to_string(need) + ")");
    for (double x : values)
        if (!(x > 0.0))
            throw IoError("permeability dataset has nonpositive entries: " + path);
    return values;
}

} // namespace mlgrf
