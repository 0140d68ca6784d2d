#ifndef MLGRF_SPDE_SAMPLER_HPP
#define MLGRF_SPDE_SAMPLER_HPP

#include "mlgrf/assembly.hpp"
#include "mlgrf/hierarchy.hpp"
#include "mlgrf/matern.hpp"
#include "mlgrf/rng.hpp"

namespace mlgrf
{

/// One field realization: cellwise values on the host (embedded) mesh of
/// its level and their restriction to the physical cells.
struct FieldSample
{
    int level = 0;
    Vector theta;
    Vector theta_phys;
    StreamKey key;
};

/// Coupled realization of the same field at two adjacent resolutions,
/// with the fine-minus-interpolated-coarse correction.
struct PairSample
{
    FieldSample fine;
    FieldSample coarse;
    Vector correction;
};

struct SamplerOptions
{
    IterSolveOptions solve;
    enum class Precond
    {
        jacobi,
        symmetric_gauss_seidel
    } precond = Precond::symmetric_gauss_seidel;
    /// Extra recursive solves for higher smoothness (0 = plain sampler).
    int smoother_iterations = 0;
};

/**
   Gaussian field sampler based on the mixed discretization of the
   reaction-diffusion equation with white-noise forcing. The field is
   solved on a host mesh (usually a padded enlargement of the physical
   mesh, to push the artificial boundary away) and restricted.

   All level operators are assembled once at construction; sampling calls
   only read shared state and are safe to run concurrently on distinct
   stream keys.
*/
class SpdeSampler
{
public:
    /// `hierarchy` holds the host meshes; `embeddings[l]` maps the level-l
    /// physical cells into the level-l host cells.
    SpdeSampler(const MeshHierarchy& hierarchy, std::vector<EmbeddingMap> embeddings,
                MaternParams params, SamplerOptions options = {});

    int num_levels() const { return hierarchy_->num_levels(); }
    const MaternParams& params() const { return params_; }
    double scaling() const { return scaling_; }
    const AssembledLevel& level(int l) const { return levels_.at(l); }
    const EmbeddingMap& embedding(int l) const { return embeddings_.at(l); }
    const MeshHierarchy& hierarchy() const { return *hierarchy_; }

    /// White-noise load vector f = W^(1/2) xi on level l.
    Vector white_noise_rhs(int l, Span xi) const;

    /// Fresh noise for level l drawn from the keyed stream.
    Vector draw_noise(int l, const StreamKey& key) const;

    /// Galerkin restriction of level-l noise to level l+1; the result is
    /// again i.i.d. standard normal when the input is.
    Vector restrict_noise(int l, Span xi) const;

    FieldSample sample_single_level(int l, Span xi) const;
    FieldSample sample_single_level(int l, Span xi, SolveReport* report) const;

    /// Coupled coarse/fine pair from one fine noise vector: the coarse
    /// field is the single-level solve with the restricted noise, and the
    /// fine solve starts from the interpolated coarse flux.
    PairSample sample_pair(int l, Span xi) const;

    /// Higher-smoothness sample: k extra solves reusing the level operator,
    /// each forced by the previous iterate. Requires nu = 2k+1 (2D) or
    /// nu = 2k+1/2 (3D).
    FieldSample sample_smoother(int l, Span xi, int k) const;

    /// Residual of the full mixed system at an unscaled solution pair.
    double block_residual_norm(int l, Span flux, Span theta_unscaled, Span xi) const;

private:
    struct Solved
    {
        Vector flux;
        Vector theta; // unscaled (unit marginal variance)
        SolveReport report;
    };

    Solved solve_level(int l, Span xi, const Vector* flux_guess) const;
    void apply_recursions(int l, Solved& s, int k) const;
    Vector rhs_for_noise(int l, Span f) const;
    FieldSample finalize(int l, Vector theta, const StreamKey& key) const;
    Preconditioner make_preconditioner(const CsrMatrix& a) const;

    const MeshHierarchy* hierarchy_;
    std::vector<EmbeddingMap> embeddings_;
    MaternParams params_;
    SamplerOptions options_;
    double scaling_;
    std::vector<AssembledLevel> levels_;
    std::vector<Preconditioner> preconditioners_;
};

/// Number of recursive solves needed for smoothness nu in dimension d;
/// throws if nu is not reachable (nu = 2k+1 in 2D, 2k+1/2 in 3D).
int smoother_iterations_for(double nu, int dim);

} // namespace mlgrf

#endif
