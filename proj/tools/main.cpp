#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

#include "mlgrf/config.hpp"
#include "mlgrf/io.hpp"
#include "mlgrf/kl.hpp"
#include "mlgrf/mlmc.hpp"
#include "mlgrf/threading.hpp"

namespace fs = std::filesystem;
using namespace mlgrf;

namespace
{

struct Campaign
{
    Config cfg;
    std::string command;
    std::uint64_t seed = 0;
    int threads = 1;
    fs::path out_dir;

    int dim = 2;
    int num_levels = 1;
    MaternParams matern;
    double corr_length = 0.0;
    bool embedding_enabled = true;

    CartesianMesh physical_coarsest;
    std::vector<CartesianMesh> physical_levels; // finest first
    MeshHierarchy host_hierarchy;               // embedded meshes, finest first
    std::vector<EmbeddingMap> embeddings;

    SamplerOptions sampler_opts;
    IterSolveOptions darcy_opts;

    std::vector<std::string> header() const
    {
        std::vector<std::string> lines = cfg.resolved_lines();
        lines.insert(lines.begin(), "command = " + command);
        lines.insert(lines.begin() + 1, "seed = " + std::to_string(seed));
        return lines;
    }
};

std::array<double, 3> to_array3(const std::vector<double>& v, const std::string& what)
{
    if (v.size() > 3)
        throw ConfigError(what + ": at most 3 components");
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = v[i];
    return out;
}

Campaign build_campaign(Config cfg, const std::string& command,
                        std::uint64_t seed, int threads, const std::string& out_dir)
{
    Campaign c;
    c.command = command;
    c.seed = seed;
    c.threads = threads;
    c.out_dir = out_dir;

    c.dim = static_cast<int>(cfg.get_int("mesh.dim"));
    const auto extents_v = cfg.get_doubles("mesh.extents");
    const auto counts_v = cfg.get_ints("mesh.counts");
    if (static_cast<int>(extents_v.size()) != c.dim || static_cast<int>(counts_v.size()) != c.dim)
        throw ConfigError("mesh.extents and mesh.counts must have dim components");
    std::array<double, 3> origin{0, 0, 0};
    if (cfg.has("mesh.origin"))
        origin = to_array3(cfg.get_doubles("mesh.origin"), "mesh.origin");
    std::array<int, 3> counts{1, 1, 1};
    for (int a = 0; a < c.dim; ++a)
        counts[a] = static_cast<int>(counts_v[a]);
    c.physical_coarsest =
        build_cartesian_mesh(c.dim, origin, to_array3(extents_v, "mesh.extents"), counts);

    c.num_levels = static_cast<int>(cfg.get_int("hierarchy.num_levels", 1));
    if (c.num_levels < 1)
        throw ConfigError("hierarchy.num_levels must be at least 1");

    c.matern.dim = c.dim;
    c.matern.nu = cfg.get_double("matern.nu", 1.0);
    c.matern.sigma2 = cfg.get_double("matern.sigma2", 1.0);
    if (cfg.has("matern.kappa"))
    {
        c.matern.kappa = cfg.get_double("matern.kappa");
        c.corr_length = cfg.get_double("matern.corr_length",
                                       std::sqrt(8.0 * c.matern.nu) / c.matern.kappa);
    }
    else
    {
        c.corr_length = cfg.get_double("matern.corr_length");
        c.matern.kappa = kappa_from_correlation_length(c.corr_length, c.matern.nu);
    }
    c.matern.validate();

    c.embedding_enabled = cfg.get_bool("embedding.enabled", true);
    CartesianMesh host_coarsest = c.physical_coarsest;
    EmbeddingMap coarse_map(c.physical_coarsest);
    if (c.embedding_enabled)
    {
        std::array<double, 3> pad{0, 0, 0};
        if (cfg.has("embedding.padding"))
        {
            const auto pv = cfg.get_doubles("embedding.padding");
            pad = pv.size() == 1 ? std::array<double, 3>{pv[0], pv[0], pv[0]}
                                 : to_array3(pv, "embedding.padding");
            std::tie(host_coarsest, coarse_map) = embed_mesh(c.physical_coarsest, pad);
        }
        else
        {
            for (int a = 0; a < c.dim; ++a)
                pad[a] = c.corr_length;
            std::tie(host_coarsest, coarse_map) = embed_mesh_at_least(c.physical_coarsest, pad);
        }
    }

    c.host_hierarchy = refine_hierarchy(host_coarsest, c.num_levels);
    MeshHierarchy phys = refine_hierarchy(c.physical_coarsest, c.num_levels);
    c.physical_levels = phys.levels;

    c.embeddings.assign(c.num_levels, coarse_map);
    for (int l = c.num_levels - 2; l >= 0; --l)
        c.embeddings[l] = refine_embedding(c.embeddings[l + 1]);

    c.sampler_opts.solve.rtol = cfg.get_double("solver.rtol", 1e-6);
    c.sampler_opts.solve.atol = cfg.get_double("solver.atol", 1e-12);
    c.sampler_opts.solve.max_iterations =
        static_cast<int>(cfg.get_int("solver.maxit", 100000));
    const std::string precond = cfg.get_string("solver.precond", "sgs");
    if (precond == "jacobi")
        c.sampler_opts.precond = SamplerOptions::Precond::jacobi;
    else if (precond == "sgs")
        c.sampler_opts.precond = SamplerOptions::Precond::symmetric_gauss_seidel;
    else
        throw ConfigError("solver.precond must be 'sgs' or 'jacobi'");
    if (c.matern.nu > (c.dim == 2 ? 1.0 : 0.5) + 1e-12)
        c.sampler_opts.smoother_iterations = smoother_iterations_for(c.matern.nu, c.dim);
    c.darcy_opts = c.sampler_opts.solve;

    fs::create_directories(c.out_dir);
    c.cfg = std::move(cfg);
    return c;
}

DarcyBC darcy_bc_from(const Campaign& c)
{
    DarcyBC bc;
    bc.flow_axis = static_cast<int>(c.cfg.get_int("darcy.flow_axis", c.dim - 1));
    bc.p_in = c.cfg.get_double("darcy.p_in", 1.0);
    bc.p_out = c.cfg.get_double("darcy.p_out", 0.0);
    if (bc.flow_axis < 0 || bc.flow_axis >= c.dim)
        throw ConfigError("darcy.flow_axis out of range");
    return bc;
}

/// Loads the dataset mean log field if configured. Returns false if the
/// run should be skipped (path configured but file absent).
bool resolve_mean_log(const Campaign& c, Vector& mean_log)
{
    if (!c.cfg.has("spe10.path"))
        return true;
    const std::string path = c.cfg.get_string("spe10.path");
    if (!fs::exists(path))
    {
        std::cout << "dataset not found, skipping dataset-dependent run: " << path << "\n";
        return false;
    }
    const auto& counts = c.physical_coarsest.cell_counts();
    Vector k = load_spe10_top_layer(path, counts[0], counts[1]);
    mean_log.resize(k.size());
    for (std::size_t i = 0; i < k.size(); ++i)
        mean_log[i] = std::log(k[i]);
    return true;
}

std::string sample_file_name(std::uint64_t index, int level, bool binary)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "field_%06llu_l%d.%s",
                  static_cast<unsigned long long>(index), level, binary ? "bin" : "csv");
    return buf;
}

int cmd_sample(Campaign& c)
{
    const auto n = static_cast<std::uint64_t>(c.cfg.get_int("sampling.num_samples", 1));
    const int level = static_cast<int>(c.cfg.get_int("sampling.level", 0));
    const bool pair = c.cfg.get_bool("sampling.pair", false);
    const bool binary = c.cfg.get_string("sampling.format", "csv") == "bin";
    if (level < 0 || level >= c.num_levels || (pair && level + 1 >= c.num_levels))
        throw ConfigError("sampling.level out of range for the configured hierarchy");
    c.cfg.reject_unknown_keys();

    SpdeSampler sampler(c.host_hierarchy, c.embeddings, c.matern, c.sampler_opts);
    const auto header = c.header();

    auto write = [&](const FieldSample& s, std::uint64_t index)
    {
        const CartesianMesh& mesh = c.physical_levels[s.level];
        const fs::path path = c.out_dir / sample_file_name(index, s.level, binary);
        if (binary)
            write_field_binary(path.string(), mesh, s.theta_phys, s.level, c.seed);
        else
            write_field_csv(path.string(), mesh, s.theta_phys, s.level, c.seed, header);
    };

    parallel_for(0, static_cast<long long>(n), c.threads, [&](long long i)
    {
        const StreamKey key{c.seed, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(level), 0};
        const Vector xi = sampler.draw_noise(level, key);
        if (pair)
        {
            PairSample p = sampler.sample_pair(level, xi);
            write(p.fine, i);
            write(p.coarse, i);
        }
        else
        {
            write(sampler.sample_single_level(level, xi), i);
        }
    });
    std::cout << "wrote " << n * (pair ? 2 : 1) << " field dump(s) to " << c.out_dir << "\n";
    return 0;
}

int cmd_variance_map(Campaign& c)
{
    const auto n = static_cast<long long>(c.cfg.get_int("sampling.num_samples", 2000));
    const int level = static_cast<int>(c.cfg.get_int("sampling.level", 0));
    if (n < 2)
        throw ConfigError("sampling.num_samples must be at least 2 for a variance map");
    if (level < 0 || level >= c.num_levels)
        throw ConfigError("sampling.level out of range");
    c.cfg.reject_unknown_keys();

    SpdeSampler sampler(c.host_hierarchy, c.embeddings, c.matern, c.sampler_opts);
    const CartesianMesh& mesh = c.physical_levels[level];
    const int cells = mesh.num_cells();

    std::vector<Vector> samples(n);
    parallel_for(0, n, c.threads, [&](long long i)
    {
        const StreamKey key{c.seed, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(level), 0};
        samples[i] = sampler.sample_single_level(level, sampler.draw_noise(level, key)).theta_phys;
    });

    Vector mean(cells, 0.0), var(cells, 0.0);
    for (const Vector& s : samples)
        for (int i = 0; i < cells; ++i)
            mean[i] += s[i];
    for (double& m : mean)
        m /= static_cast<double>(n);
    for (const Vector& s : samples)
        for (int i = 0; i < cells; ++i)
        {
            const double d = s[i] - mean[i];
            var[i] += d * d;
        }
    for (double& v : var)
        v /= static_cast<double>(n - 1);

    const fs::path path = c.out_dir / "variance_map.csv";
    write_field_csv(path.string(), mesh, var, level, c.seed, c.header());

    double total = 0.0;
    for (double v : var)
        total += v;
    std::cout << "variance map over " << n << " samples -> " << path
              << " (mean cell variance " << format_double(total / cells) << ")\n";
    return 0;
}

int cmd_covariance_check(Campaign& c)
{
    const auto n = static_cast<long long>(c.cfg.get_int("sampling.num_samples", 5000));
    const int guard = static_cast<int>(c.cfg.get_int("kl.max_cells", 10000));
    if (n < 30)
        throw ConfigError("covariance check: insufficient samples (need at least 30)");
    c.cfg.reject_unknown_keys();

    const CartesianMesh& mesh = c.physical_levels[0];
    const CovarianceModel model(c.matern);
    const DenseMatrix analytic = centroid_covariance_matrix(mesh, model, guard);

    // Field sampler, embedded and restricted to the physical cells.
    SpdeSampler sampler(c.host_hierarchy, c.embeddings, c.matern, c.sampler_opts);
    std::vector<Vector> spde_samples(n);
    parallel_for(0, n, c.threads, [&](long long i)
    {
        const StreamKey key{c.seed, static_cast<std::uint64_t>(i), 0, 0};
        spde_samples[i] = sampler.sample_single_level(0, sampler.draw_noise(0, key)).theta_phys;
    });
    const double spde_err = relative_frobenius_error(empirical_covariance(spde_samples), analytic);

    // Spectral oracle on the same mesh: full expansion of the covariance
    // operator, reconstruction identity, and an empirical cross-check.
    const DenseMatrix c_h = assemble_covariance_matrix(mesh, model, guard);
    const Vector w = assemble_p0_mass(mesh);
    const KlBasis basis = kl_decompose(c_h, w, mesh.num_cells());

    DenseMatrix recon = kl_reconstruct_covariance(basis);
    for (int i = 0; i < recon.rows; ++i)
        for (int j = 0; j < recon.cols; ++j)
            recon.at(i, j) *= w[i] * w[j];
    const double recon_err = relative_frobenius_error(recon, c_h);

    std::vector<Vector> kl_samples(n);
    parallel_for(0, n, c.threads, [&](long long i)
    {
        const StreamKey key{c.seed, static_cast<std::uint64_t>(i), 0, 1};
        kl_samples[i] = kl_sample(basis, draw_standard_normal(key, basis.truncation));
    });
    const double kl_err = relative_frobenius_error(empirical_covariance(kl_samples), analytic);

    std::vector<std::vector<std::string>> rows = {
        {"spde_empirical_vs_analytic_relF", format_double(spde_err)},
        {"kl_empirical_vs_analytic_relF", format_double(kl_err)},
        {"kl_spectral_reconstruction_relF", format_double(recon_err)},
        {"samples", std::to_string(n)},
    };
    write_csv((c.out_dir / "covariance_check.csv").string(), c.header(), {"metric", "value"}, rows);

    // Spectrum and basis dump for inspection.
    std::vector<std::vector<std::string>> spectrum;
    for (int i = 0; i < basis.truncation; ++i)
        spectrum.push_back({std::to_string(i), format_double(basis.eigenvalues[i])});
    write_csv((c.out_dir / "kl_spectrum.csv").string(), c.header(), {"index", "eigenvalue"},
              spectrum);
    write_matrix_binary((c.out_dir / "kl_basis.bin").string(), mesh.num_cells(),
                        basis.truncation, basis.vectors.data);

    std::cout << "spde empirical vs analytic rel Frobenius error: " << format_double(spde_err)
              << "\nkl empirical vs analytic rel Frobenius error:   " << format_double(kl_err)
              << "\nkl spectral reconstruction rel error:           " << format_double(recon_err)
              << "\n";
    return 0;
}

int cmd_darcy(Campaign& c)
{
    const bool sample_field = c.cfg.get_bool("darcy.sample_field", false);
    const DarcyBC bc = darcy_bc_from(c);
    Vector mean_log;
    if (!resolve_mean_log(c, mean_log))
        return 0;
    c.cfg.reject_unknown_keys();

    const CartesianMesh& mesh = c.physical_levels[0];
    Vector mean_fine;
    if (!mean_log.empty())
        mean_fine = mean_log;
    for (int l = c.num_levels - 2; l >= 0 && !mean_fine.empty(); --l)
        mean_fine = build_cell_prolongation(c.physical_levels[l], c.physical_levels[l + 1])
                        .multiply(mean_fine);

    Vector theta(mesh.num_cells(), 0.0);
    if (sample_field)
    {
        SpdeSampler sampler(c.host_hierarchy, c.embeddings, c.matern, c.sampler_opts);
        const StreamKey key{c.seed, 0, 0, 0};
        theta = sampler.sample_single_level(0, sampler.draw_noise(0, key)).theta_phys;
    }

    const Coefficient k = build_coefficient(theta, mean_fine);
    const DarcySolution sol = solve_darcy(mesh, k, bc, c.darcy_opts);
    const double keff = effective_permeability(mesh, sol, bc);

    write_field_csv((c.out_dir / "darcy_pressure.csv").string(), mesh, sol.pressure, 0,
                    c.seed, c.header());
    std::vector<std::vector<std::string>> rows = {
        {"effective_permeability", format_double(keff)},
        {"minres_iterations", std::to_string(sol.report.iterations)},
        {"divergence_inf_norm", format_double(sol.divergence_inf_norm)},
    };
    write_csv((c.out_dir / "darcy_summary.csv").string(), c.header(), {"metric", "value"}, rows);
    std::cout << "effective permeability: " << format_double(keff) << "\n";
    return 0;
}

int cmd_mlmc(Campaign& c)
{
    MlmcConfig mc;
    mc.target_mse = c.cfg.get_double("mlmc.target_mse");
    mc.split = c.cfg.get_double("mlmc.split", 0.5);
    mc.pilot = c.cfg.get_int("mlmc.pilot", 32);
    mc.min_samples = c.cfg.get_int("mlmc.min_samples", 2);
    mc.max_total_samples = c.cfg.get_int("mlmc.max_total_samples", 1000000);
    mc.threads = c.threads;
    const std::string cost_model = c.cfg.get_string("mlmc.cost_model", "dofs");
    if (cost_model != "dofs" && cost_model != "measured")
        throw ConfigError("mlmc.cost_model must be 'dofs' or 'measured'");
    // Nominal seconds per unknown; keeps the cost column reproducible.
    const double nominal_rate = c.cfg.get_double("mlmc.nominal_seconds_per_dof", 2e-8);
    const DarcyBC bc = darcy_bc_from(c);

    Vector mean_log;
    if (!resolve_mean_log(c, mean_log))
        return 0;
    c.cfg.reject_unknown_keys();

    if (c.num_levels < 2)
        throw ConfigError("mlmc needs hierarchy.num_levels >= 2");

    SpdeSampler sampler(c.host_hierarchy, c.embeddings, c.matern, c.sampler_opts);
    DarcyQoiPipeline pipeline(sampler, c.physical_levels, bc, c.darcy_opts, std::move(mean_log));

    const auto t0 = std::chrono::steady_clock::now();
    MlmcResult result = mlmc_run(pipeline, mc, c.seed);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<std::vector<std::string>> rows;
    for (const LevelStats& s : result.levels)
    {
        const bool coupled = s.level + 1 < static_cast<int>(result.levels.size());
        const double mean_q = s.Q_fine.mean();
        const double var_q = s.Q_fine.variance();
        rows.push_back({std::to_string(s.level),
                        std::to_string(s.dofs),
                        std::to_string(s.taken),
                        format_double(s.Y.mean()),
                        format_double(s.Y.variance()),
                        format_double(mean_q),
                        format_double(var_q),
                        format_double(s.cost_per_sample * nominal_rate)});
        (void)coupled;
    }
    write_csv((c.out_dir / "mlmc_levels.csv").string(), c.header(),
              {"level", "dofs", "N", "mean_Y", "var_Y", "mean_Q", "var_Q", "cost_sec"}, rows);

    std::vector<std::vector<std::string>> summary = {
        {"estimate", format_double(result.estimate)},
        {"variance_bound", format_double(result.variance_bound)},
        {"variance_budget", format_double(mc.split * mc.target_mse)},
        {"bias_proxy_finest_mean_Y", format_double(result.bias_proxy)},
        {"bias_budget", format_double((1.0 - mc.split) * mc.target_mse)},
        {"total_cost_sec", format_double(result.total_work * nominal_rate)},
    };
    write_csv((c.out_dir / "mlmc_summary.csv").string(), c.header(), {"metric", "value"}, summary);

    std::cout << "mlmc estimate: " << format_double(result.estimate)
              << "\n  variance bound " << format_double(result.variance_bound)
              << " (budget " << format_double(mc.split * mc.target_mse) << ")"
              << "\n  bias proxy " << format_double(result.bias_proxy)
              << " (budget " << format_double((1.0 - mc.split) * mc.target_mse) << ")\n  N per level:";
    for (const LevelStats& s : result.levels)
        std::cout << " " << s.taken;
    std::cout << "\n  wall time " << format_double(wall) << " s\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hierarchical Gaussian field sampling and multilevel Monte Carlo"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 1;

    app.add_option("--config", config_path, "campaign configuration file")->required();
    app.add_option("--seed", seed, "campaign seed (default 0)");
    app.add_option("--threads", threads, "worker threads (default 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "output directory (default .)");

    auto* c_sample = app.add_subcommand("sample", "write field realizations");
    auto* c_varmap = app.add_subcommand("variance-map", "cellwise variance over many samples");
    auto* c_mlmc = app.add_subcommand("mlmc", "multilevel estimate of the effective permeability");
    auto* c_cov = app.add_subcommand("covariance-check",
                                     "compare sampler and oracle against the analytic covariance");
    auto* c_darcy = app.add_subcommand("darcy", "single pressure-drop solve");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        Campaign campaign = build_campaign(Config::parse_file(config_path),
                                           app.get_subcommands().front()->get_name(),
                                           seed, threads, out_dir);
        if (c_sample->parsed())
            return cmd_sample(campaign);
        if (c_varmap->parsed())
            return cmd_variance_map(campaign);
        if (c_mlmc->parsed())
            return cmd_mlmc(campaign);
        if (c_cov->parsed())
            return cmd_covariance_check(campaign);
        if (c_darcy->parsed())
            return cmd_darcy(campaign);
        return 2;
    }
    catch (const ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const SolverError& e)
    {
        std::cerr << "solver failure: " << e.what()
                  << " (iterations " << e.report.iterations
                  << ", residual " << e.report.abs_residual << ")\n";
        return 3;
    }
    catch (const IoError& e)
    {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
