#include "mlgrf/mlmc.hpp"

#include <chrono>
#include <cmath>

#include "mlgrf/threading.hpp"

namespace mlgrf
{

DarcyQoiPipeline::DarcyQoiPipeline(const SpdeSampler& sampler,
                                   std::vector<CartesianMesh> physical_levels,
                                   DarcyBC bc, IterSolveOptions darcy_opts,
                                   Vector coarsest_mean_log)
    : sampler_(&sampler), physical_(std::move(physical_levels)),
      bc_(bc), darcy_opts_(darcy_opts)
{
    const int nl = sampler.num_levels();
    if (static_cast<int>(physical_.size()) != nl)
        throw std::invalid_argument("DarcyQoiPipeline: one physical mesh per level required");
    for (int l = 0; l < nl; ++l)
        if (physical_[l].num_cells() != sampler.embedding(l).num_physical_cells())
            throw std::invalid_argument("DarcyQoiPipeline: physical mesh does not match embedding");

    mean_log_.resize(nl);
    if (!coarsest_mean_log.empty())
    {
        if (static_cast<int>(coarsest_mean_log.size()) != physical_[nl - 1].num_cells())
            throw std::invalid_argument("DarcyQoiPipeline: mean log field must live on the coarsest mesh");
        mean_log_[nl - 1] = std::move(coarsest_mean_log);
        for (int l = nl - 2; l >= 0; --l)
        {
            // Cellwise-constant injection parent -> children.
            const CsrMatrix p = build_cell_prolongation(physical_[l], physical_[l + 1]);
            mean_log_[l] = p.multiply(mean_log_[l + 1]);
        }
    }
}

int DarcyQoiPipeline::num_levels() const { return sampler_->num_levels(); }

double DarcyQoiPipeline::qoi_of(int level, Span theta_phys) const
{
    const Coefficient k = build_coefficient(theta_phys, mean_log_[level]);
    const DarcySolution sol = solve_darcy(physical_[level], k, bc_, darcy_opts_);
    return effective_permeability(physical_[level], sol, bc_);
}

double DarcyQoiPipeline::evaluate_single(int level, std::uint64_t seed,
                                         std::uint64_t sample) const
{
    const StreamKey key{seed, sample, static_cast<std::uint64_t>(level), 0};
    const Vector xi = sampler_->draw_noise(level, key);
    const FieldSample field = sampler_->sample_single_level(level, xi);
    return qoi_of(level, field.theta_phys);
}

std::pair<double, double> DarcyQoiPipeline::evaluate_pair(int level, std::uint64_t seed,
                                                          std::uint64_t sample) const
{
    const StreamKey key{seed, sample, static_cast<std::uint64_t>(level), 0};
    const Vector xi = sampler_->draw_noise(level, key);
    const PairSample pair = sampler_->sample_pair(level, xi);
    return {qoi_of(level, pair.fine.theta_phys), qoi_of(level + 1, pair.coarse.theta_phys)};
}

double DarcyQoiPipeline::sample_work(int level, bool coupled) const
{
    const double w = static_cast<double>(level_dofs(level));
    if (!coupled)
        return w;
    return w + static_cast<double>(level_dofs(level + 1));
}

long long DarcyQoiPipeline::level_dofs(int level) const
{
    const CartesianMesh& host = sampler_->hierarchy().levels[level];
    const CartesianMesh& phys = physical_[level];
    return static_cast<long long>(host.num_faces()) + host.num_cells()
           + phys.num_faces() + phys.num_cells();
}

std::vector<long long> allocate_samples(const std::vector<double>& variances,
                                        const std::vector<double>& costs,
                                        double target_mse, double split,
                                        long long min_samples)
{
    if (variances.size() != costs.size() || variances.empty())
        throw std::invalid_argument("allocate_samples: shape mismatch");
    if (!(target_mse > 0.0) || !(split > 0.0 && split < 1.0))
        throw std::invalid_argument("allocate_samples: bad accuracy parameters");

    // Lagrange-multiplier optimum of sum(C_l N_l) subject to
    // sum(V_l / N_l) = split * mse: N_l = budget^-1 sqrt(V_l/C_l) sum_j sqrt(V_j C_j).
    double weighted = 0.0;
    for (std::size_t l = 0; l < variances.size(); ++l)
        weighted += std::sqrt(std::max(variances[l], 0.0) * costs[l]);

    const double budget = split * target_mse;
    std::vector<long long> n(variances.size(), min_samples);
    for (std::size_t l = 0; l < variances.size(); ++l)
    {
        if (variances[l] <= 0.0)
            continue;
        const double ideal = std::sqrt(variances[l] / costs[l]) * weighted / budget;
        n[l] = std::max<long long>(min_samples, static_cast<long long>(std::ceil(ideal)));
    }
    return n;
}

namespace
{

struct LevelSamples
{
    std::vector<double> y;
    std::vector<double> q_fine;
    std::vector<double> q_coarse;
};

void extend_level(const QoiPipeline& pipeline, int level, bool coupled,
                  std::uint64_t seed, long long target, int threads, LevelSamples& data)
{
    const long long have = static_cast<long long>(data.y.size());
    if (target <= have)
        return;
    data.y.resize(target);
    data.q_fine.resize(target);
    data.q_coarse.resize(target, 0.0);
    parallel_for(have, target, threads, [&](long long i)
    {
        if (coupled)
        {
            const auto [qf, qc] = pipeline.evaluate_pair(level, seed,
                                                         static_cast<std::uint64_t>(i));
            data.y[i] = qf - qc;
            data.q_fine[i] = qf;
            data.q_coarse[i] = qc;
        }
        else
        {
            const double q = pipeline.evaluate_single(level, seed,
                                                      static_cast<std::uint64_t>(i));
            data.y[i] = q;
            data.q_fine[i] = q;
        }
    });
}

} // namespace

McEstimate mc_estimate(const QoiPipeline& pipeline, int level, long long num_samples,
                       std::uint64_t seed, int threads, std::uint64_t first_sample)
{
    if (num_samples < 2)
        throw std::invalid_argument("mc_estimate: need at least 2 samples");
    std::vector<double> q(num_samples);
    parallel_for(0, num_samples, threads, [&](long long i)
    {
        q[i] = pipeline.evaluate_single(level, seed, first_sample + static_cast<std::uint64_t>(i));
    });
    McEstimate out;
    out.stat = pairwise_stat(q);
    out.work = pipeline.sample_work(level, false) * static_cast<double>(num_samples);
    return out;
}

CorrectionEstimate estimate_level_correction(const QoiPipeline& pipeline, int level,
                                             long long num_samples, std::uint64_t seed,
                                             int threads)
{
    if (num_samples < 2)
        throw std::invalid_argument("estimate_level_correction: need at least 2 samples");
    LevelSamples data;
    extend_level(pipeline, level, level + 1 < pipeline.num_levels(), seed, num_samples,
                 threads, data);
    CorrectionEstimate out;
    out.Y = pairwise_stat(data.y);
    out.Q_fine = pairwise_stat(data.q_fine);
    out.Q_coarse = pairwise_stat(data.q_coarse);
    return out;
}

MlmcResult mlmc_run(const QoiPipeline& pipeline, const MlmcConfig& config, std::uint64_t seed)
{
    const int nl = pipeline.num_levels();
    if (nl < 2)
        throw std::invalid_argument("mlmc_run: need a hierarchy of at least 2 levels");
    if (config.pilot < std::max<long long>(2, config.min_samples))
        throw std::invalid_argument("mlmc_run: pilot too small");

    const auto t0 = std::chrono::steady_clock::now();

    std::vector<LevelSamples> data(nl);
    std::vector<double> costs(nl);
    for (int l = 0; l < nl; ++l)
        costs[l] = pipeline.sample_work(l, l < nl - 1);

    for (int l = 0; l < nl; ++l)
        extend_level(pipeline, l, l < nl - 1, seed, config.pilot, config.threads, data[l]);

    const double budget = config.split * config.target_mse;
    std::vector<double> variances(nl);
    for (int round = 0;; ++round)
    {
        double achieved = 0.0;
        for (int l = 0; l < nl; ++l)
        {
            variances[l] = pairwise_stat(data[l].y).variance();
            achieved += variances[l] / static_cast<double>(data[l].y.size());
        }
        if (achieved <= budget)
            break;

        std::vector<long long> target = allocate_samples(variances, costs, config.target_mse,
                                                         config.split, config.min_samples);
        long long total = 0;
        bool grew = false;
        for (int l = 0; l < nl; ++l)
        {
            target[l] = std::max<long long>(target[l], static_cast<long long>(data[l].y.size()));
            total += target[l];
            grew = grew || target[l] > static_cast<long long>(data[l].y.size());
        }
        if (total > config.max_total_samples)
            throw std::runtime_error(
                "mlmc_run: allocation wants " + std::to_string(total)
                + " samples, budget is " + std::to_string(config.max_total_samples)
                + " (variance " + std::to_string(achieved) + " vs target "
                + std::to_string(budget) + ")");
        if (!grew)
        {
            // Allocation satisfied but the variance target is not; grow the
            // dominant level geometrically rather than stalling.
            int worst = 0;
            double worst_share = -1.0;
            for (int l = 0; l < nl; ++l)
            {
                const double share = variances[l] / static_cast<double>(data[l].y.size());
                if (share > worst_share)
                {
                    worst_share = share;
                    worst = l;
                }
            }
            target[worst] = static_cast<long long>(data[worst].y.size()) * 2;
            if (total + target[worst] / 2 > config.max_total_samples)
                throw std::runtime_error("mlmc_run: sample budget exhausted before variance target");
        }
        for (int l = 0; l < nl; ++l)
            extend_level(pipeline, l, l < nl - 1, seed, target[l], config.threads, data[l]);
    }

    MlmcResult result;
    result.levels.resize(nl);
    for (int l = 0; l < nl; ++l)
    {
        LevelStats& s = result.levels[l];
        s.level = l;
        s.dofs = pipeline.level_dofs(l);
        s.taken = static_cast<long long>(data[l].y.size());
        s.cost_per_sample = costs[l];
        s.Y = pairwise_stat(data[l].y);
        s.Q_fine = pairwise_stat(data[l].q_fine);
        if (l < nl - 1)
            s.Q_coarse = pairwise_stat(data[l].q_coarse);
        result.estimate += s.Y.mean();
        result.variance_bound += s.Y.variance() / static_cast<double>(s.taken);
        result.total_work += costs[l] * static_cast<double>(s.taken);
    }
    result.bias_proxy = std::abs(result.levels.front().Y.mean());
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace mlgrf
