#ifndef MLGRF_DARCY_HPP
#define MLGRF_DARCY_HPP

#include <optional>
#include <string>

#include "mlgrf/mesh.hpp"
#include "mlgrf/solvers.hpp"

namespace mlgrf
{

/// Cellwise conductivity k = exp(mean_log + theta), strictly positive.
struct Coefficient
{
    Vector k;
};

Coefficient build_coefficient(Span theta_phys, Span mean_log_field = {});

/**
   Pressure-drop boundary conditions: fixed pressure on the two boundary
   planes orthogonal to `flow_axis` (inflow at the low side, outflow at
   the high side) and zero normal flux everywhere else.
*/
struct DarcyBC
{
    int flow_axis = 1;
    double p_in = 1.0;
    double p_out = 0.0;
};

struct DarcySolution
{
    Vector flux;     // face unknowns, net flux in the positive axis direction
    Vector pressure; // cell unknowns
    SolveReport report;
    double divergence_inf_norm = 0.0;
};

/**
   Mixed solve of  k^-1 q + grad p = 0,  div q = 0  with the boundary
   conditions above, by block-preconditioned MINRES on the saddle system.
   The pressure Schur preconditioner is refactored per coefficient.
*/
DarcySolution solve_darcy(const CartesianMesh& mesh, const Coefficient& coeff,
                          const DarcyBC& bc, const IterSolveOptions& opts);

/// Mean outward flux density through one boundary plane (side 0 = low,
/// 1 = high): total signed outward flux divided by the plane area.
double boundary_flux_density(const CartesianMesh& mesh, Span flux, int axis, int side);

/// Effective permeability of a solved pressure-drop problem: the mean
/// outward flux density through the outflow plane.
double effective_permeability(const CartesianMesh& mesh, const DarcySolution& sol,
                              const DarcyBC& bc);

/**
   Reads the leading slice of the standard 60 x 220 x 85 reservoir
   permeability benchmark: whitespace-separated scalars, of which the
   first nx*ny (row-major, x fastest) are the top-layer horizontal
   permeability.
*/
Vector load_spe10_top_layer(const std::string& path, int nx = 60, int ny = 220);

} // namespace mlgrf

#endif
