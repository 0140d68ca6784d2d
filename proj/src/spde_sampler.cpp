#include "mlgrf/spde_sampler.hpp"

#include <cmath>

namespace mlgrf
{

int smoother_iterations_for(double nu, int dim)
{
    const double base = dim == 2 ? 1.0 : 0.5;
    const double k = 0.5 * (nu - base);
    const int ki = static_cast<int>(std::lround(k));
    if (ki < 0 || std::abs(k - ki) > 1e-12)
        throw std::invalid_argument(
            "smoothness nu must equal 2k+1 (2D) or 2k+1/2 (3D) for integer k >= 0");
    return ki;
}

SpdeSampler::SpdeSampler(const MeshHierarchy& hierarchy, std::vector<EmbeddingMap> embeddings,
                         MaternParams params, SamplerOptions options)
    : hierarchy_(&hierarchy), embeddings_(std::move(embeddings)),
      params_(params), options_(options), scaling_(matern_scaling(params))
{
    params_.validate();
    if (static_cast<int>(embeddings_.size()) != hierarchy.num_levels())
        throw std::invalid_argument("SpdeSampler: one embedding per level required");
    if (options_.smoother_iterations > 0)
        smoother_iterations_for(params_.nu, params_.dim); // validates consistency

    levels_.reserve(hierarchy.num_levels());
    preconditioners_.reserve(hierarchy.num_levels());
    for (int l = 0; l < hierarchy.num_levels(); ++l)
    {
        if (embeddings_[l].embedded_counts() != hierarchy.levels[l].cell_counts())
            throw std::invalid_argument("SpdeSampler: embedding does not match level mesh");
        levels_.push_back(assemble_level(hierarchy.levels[l], params_.kappa));
        preconditioners_.push_back(make_preconditioner(levels_.back().A));
    }
}

Preconditioner SpdeSampler::make_preconditioner(const CsrMatrix& a) const
{
    if (options_.precond == SamplerOptions::Precond::jacobi)
        return jacobi_preconditioner(a);
    return symmetric_gauss_seidel_preconditioner(a);
}

Vector SpdeSampler::white_noise_rhs(int l, Span xi) const
{
    const AssembledLevel& lvl = level(l);
    if (static_cast<int>(xi.size()) != lvl.num_cells())
        throw std::invalid_argument("white_noise_rhs: noise length mismatch");
    Vector f(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i)
        f[i] = std::sqrt(lvl.W[i]) * xi[i];
    return f;
}

Vector SpdeSampler::draw_noise(int l, const StreamKey& key) const
{
    return draw_standard_normal(key, level(l).num_cells());
}

Vector SpdeSampler::restrict_noise(int l, Span xi) const
{
    if (l + 1 >= num_levels())
        throw std::invalid_argument("restrict_noise: no coarser level");
    const AssembledLevel& fine = level(l);
    const AssembledLevel& coarse = level(l + 1);
    if (static_cast<int>(xi.size()) != fine.num_cells())
        throw std::invalid_argument("restrict_noise: noise length mismatch");

    Vector scaled(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i)
        scaled[i] = std::sqrt(fine.W[i]) * xi[i];

    const CsrMatrix& p = hierarchy_->cell_prolongation[l];
    Vector out = p.multiply_transpose(scaled);
    for (int i = 0; i < coarse.num_cells(); ++i)
        out[i] /= std::sqrt(coarse.W[i]);
    return out;
}

Vector SpdeSampler::rhs_for_noise(int l, Span f) const
{
    // Flux equation of the reduced system: A u = -g kappa^-2 B^T W^-1 f.
    const AssembledLevel& lvl = level(l);
    Vector winv_f(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        winv_f[i] = f[i] / lvl.W[i];
    Vector rhs = lvl.Bt.multiply(winv_f);
    const double c = -scaling_ / (lvl.kappa * lvl.kappa);
    for (double& v : rhs)
        v *= c;
    return rhs;
}

SpdeSampler::Solved SpdeSampler::solve_level(int l, Span xi, const Vector* flux_guess) const
{
    const AssembledLevel& lvl = level(l);
    Vector f = white_noise_rhs(l, xi);
    Vector rhs = rhs_for_noise(l, f);

    Solved out;
    out.flux.assign(lvl.num_faces(), 0.0);
    if (flux_guess)
    {
        out.flux = *flux_guess;
        for (int face : lvl.essential_faces)
            out.flux[face] = 0.0;
    }
    out.report = cg_solve(lvl.A, rhs, out.flux, preconditioners_[l], options_.solve);
    if (!out.report.converged)
        throw SolverError("sampler solve did not converge on level " + std::to_string(l),
                          out.report);

    // Back substitution: theta = kappa^-2 W^-1 (B u + g f).
    out.theta = lvl.B.multiply(out.flux);
    const double kappa2 = lvl.kappa * lvl.kappa;
    for (int i = 0; i < lvl.num_cells(); ++i)
        out.theta[i] = (out.theta[i] + scaling_ * f[i]) / (kappa2 * lvl.W[i]);
    return out;
}

FieldSample SpdeSampler::finalize(int l, Vector theta, const StreamKey& key) const
{
    const double sigma = params_.sigma();
    if (sigma != 1.0)
        for (double& v : theta)
            v *= sigma;
    FieldSample s;
    s.level = l;
    s.theta_phys = embeddings_[l].restrict_cells(theta);
    s.theta = std::move(theta);
    s.key = key;
    return s;
}

FieldSample SpdeSampler::sample_single_level(int l, Span xi) const
{
    return sample_single_level(l, xi, nullptr);
}

FieldSample SpdeSampler::sample_single_level(int l, Span xi, SolveReport* report) const
{
    Solved s = solve_level(l, xi, nullptr);
    if (report)
        *report = s.report;
    apply_recursions(l, s, options_.smoother_iterations);
    return finalize(l, std::move(s.theta), StreamKey{});
}

PairSample SpdeSampler::sample_pair(int l, Span xi) const
{
    if (l + 1 >= num_levels())
        throw std::invalid_argument("sample_pair: no coarser level below " + std::to_string(l));

    Vector xi_coarse = restrict_noise(l, xi);

    PairSample pair;
    try
    {
        Solved coarse = solve_level(l + 1, xi_coarse, nullptr);
        Vector guess = hierarchy_->flux_prolongation[l].multiply(coarse.flux);
        Solved fine = solve_level(l, xi, &guess);

        apply_recursions(l + 1, coarse, options_.smoother_iterations);
        apply_recursions(l, fine, options_.smoother_iterations);

        pair.coarse = finalize(l + 1, std::move(coarse.theta), StreamKey{});
        pair.fine = finalize(l, std::move(fine.theta), StreamKey{});
    }
    catch (SolverError& err)
    {
        throw SolverError(std::string(err.what()) + " (during coupled pair at level "
                              + std::to_string(l) + ")",
                          err.report);
    }

    const CsrMatrix& p = hierarchy_->cell_prolongation[l];
    pair.correction = pair.fine.theta;
    Vector interp = p.multiply(pair.coarse.theta);
    for (std::size_t i = 0; i < pair.correction.size(); ++i)
        pair.correction[i] -= interp[i];
    return pair;
}

FieldSample SpdeSampler::sample_smoother(int l, Span xi, int k) const
{
    if (k < 1)
        throw std::invalid_argument("sample_smoother: k must be at least 1");
    if (smoother_iterations_for(params_.nu, params_.dim) != k)
        throw std::invalid_argument("sample_smoother: k inconsistent with nu");

    Solved s = solve_level(l, xi, nullptr);
    apply_recursions(l, s, k);
    return finalize(l, std::move(s.theta), StreamKey{});
}

void SpdeSampler::apply_recursions(int l, Solved& s, int k) const
{
    const AssembledLevel& lvl = level(l);
    const double kappa2 = lvl.kappa * lvl.kappa;
    for (int step = 0; step < k; ++step)
    {
        // Next iterate solves the same operator forced by the previous
        // field: A u = -kappa^-2 B^T theta, theta' = kappa^-2 (W^-1 B u + theta).
        Vector rhs = lvl.Bt.multiply(s.theta);
        for (double& v : rhs)
            v /= -kappa2;
        Vector u(lvl.num_faces(), 0.0);
        SolveReport rep = cg_solve(lvl.A, rhs, u, preconditioners_[l], options_.solve);
        if (!rep.converged)
            throw SolverError("smoother solve did not converge on level " + std::to_string(l),
                              rep);
        Vector bu = lvl.B.multiply(u);
        for (int i = 0; i < lvl.num_cells(); ++i)
            s.theta[i] = (bu[i] / lvl.W[i] + s.theta[i]) / kappa2;
        s.flux = std::move(u);
    }
}

double SpdeSampler::block_residual_norm(int l, Span flux, Span theta_unscaled, Span xi) const
{
    const AssembledLevel& lvl = level(l);
    Vector f = white_noise_rhs(l, xi);
    const double kappa2 = lvl.kappa * lvl.kappa;

    Vector r1(lvl.num_faces());
    lvl.M.apply(flux, r1);
    lvl.Bt.apply_add(1.0, theta_unscaled, r1);

    Vector r2(lvl.num_cells());
    lvl.B.apply(flux, r2);
    for (int i = 0; i < lvl.num_cells(); ++i)
        r2[i] += -kappa2 * lvl.W[i] * theta_unscaled[i] + scaling_ * f[i];

    return std::sqrt(dot(r1, r1) + dot(r2, r2));
}

} // namespace mlgrf
