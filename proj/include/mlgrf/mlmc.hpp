#ifndef MLGRF_MLMC_HPP
#define MLGRF_MLMC_HPP

#include "mlgrf/darcy.hpp"
#include "mlgrf/spde_sampler.hpp"
#include "mlgrf/stats.hpp"

namespace mlgrf
{

/**
   A sampleable quantity of interest across a level hierarchy. Level 0 is
   the finest, num_levels()-1 the coarsest. Coupled evaluations return the
   quantity at level l and at level l+1 computed from the same underlying
   randomness, the positive coupling that shrinks the corrections.
   Implementations must key all randomness on (seed, sample, level) so
   results do not depend on scheduling.
*/
class QoiPipeline
{
public:
    virtual ~QoiPipeline() = default;
    virtual int num_levels() const = 0;
    virtual double evaluate_single(int level, std::uint64_t seed, std::uint64_t sample) const = 0;
    virtual std::pair<double, double> evaluate_pair(int level, std::uint64_t seed,
                                                    std::uint64_t sample) const = 0;
    /// Deterministic per-sample cost in work units (one unknown solved = 1).
    virtual double sample_work(int level, bool coupled) const = 0;
    /// Unknowns characterizing the level (reporting only).
    virtual long long level_dofs(int level) const = 0;
};

/// Effective-permeability pipeline: lognormal conductivity from the field
/// sampler, mixed pressure-drop solve per realization.
class DarcyQoiPipeline : public QoiPipeline
{
public:
    /// `physical_levels[l]` pairs with the sampler's level l; the optional
    /// mean log field is given on the coarsest physical mesh and injected
    /// to the finer levels.
    DarcyQoiPipeline(const SpdeSampler& sampler, std::vector<CartesianMesh> physical_levels,
                     DarcyBC bc, IterSolveOptions darcy_opts,
                     Vector coarsest_mean_log = {});

    int num_levels() const override;
    double evaluate_single(int level, std::uint64_t seed, std::uint64_t sample) const override;
    std::pair<double, double> evaluate_pair(int level, std::uint64_t seed,
                                            std::uint64_t sample) const override;
    double sample_work(int level, bool coupled) const override;
    long long level_dofs(int level) const override;

    const CartesianMesh& physical_mesh(int level) const { return physical_[level]; }

private:
    double qoi_of(int level, Span theta_phys) const;

    const SpdeSampler* sampler_;
    std::vector<CartesianMesh> physical_;
    std::vector<Vector> mean_log_; // per level, possibly empty
    DarcyBC bc_;
    IterSolveOptions darcy_opts_;
};

struct LevelStats
{
    int level = 0;
    long long dofs = 0;
    long long taken = 0;
    double cost_per_sample = 0.0; // work units
    RunningStat Y;                // correction at this level (or Q on the coarsest)
    RunningStat Q_fine;
    RunningStat Q_coarse;
};

struct MlmcConfig
{
    double target_mse = 1e-4;   // squared accuracy goal
    double split = 0.5;         // fraction of the MSE budget given to variance
    long long pilot = 32;       // initial samples per level
    long long min_samples = 2;
    long long max_total_samples = 1000000;
    int threads = 1;
};

struct MlmcResult
{
    double estimate = 0.0;
    double variance_bound = 0.0;  // sum of V_l / N_l
    double bias_proxy = 0.0;      // |mean Y| on the finest level
    double total_work = 0.0;      // work units
    double elapsed_seconds = 0.0; // informational, not reproducible
    std::vector<LevelStats> levels;
};

/// Number of samples per level that drives sum(V_l/N_l) below
/// split * target_mse at minimal model cost.
std::vector<long long> allocate_samples(const std::vector<double>& variances,
                                        const std::vector<double>& costs,
                                        double target_mse, double split,
                                        long long min_samples);

/// Plain Monte Carlo of the quantity at one level over N fresh samples.
struct McEstimate
{
    RunningStat stat;
    double work = 0.0;
};
McEstimate mc_estimate(const QoiPipeline& pipeline, int level, long long num_samples,
                       std::uint64_t seed, int threads = 1,
                       std::uint64_t first_sample = 0);

/// Correction statistics at one level over N coupled samples (both
/// resolutions from the same noise); the coarsest level falls back to the
/// plain quantity.
struct CorrectionEstimate
{
    RunningStat Y;
    RunningStat Q_fine;
    RunningStat Q_coarse;
};
CorrectionEstimate estimate_level_correction(const QoiPipeline& pipeline, int level,
                                             long long num_samples, std::uint64_t seed,
                                             int threads = 1);

/// Telescoped estimator with iterative sample allocation: pilot runs on
/// every level, then top-ups until the variance share of the MSE budget
/// is met. Fails if the allocation exceeds the sample budget.
MlmcResult mlmc_run(const QoiPipeline& pipeline, const MlmcConfig& config, std::uint64_t seed);

} // namespace mlgrf

#endif
