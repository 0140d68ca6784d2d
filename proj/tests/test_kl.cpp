#include <doctest.h>

#include "mlgrf/assembly.hpp"
#include "mlgrf/kl.hpp"
#include "mlgrf/rng.hpp"

using namespace mlgrf;

TEST_CASE("covariance matrix assembly basics")
{
    const CovarianceModel model(MaternParams{0.5, 2.0, 1.0, 2});

    const CartesianMesh one = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {1, 1, 1});
    const DenseMatrix c = assemble_covariance_matrix(one, model);
    CHECK(c.rows == 1);
    CHECK(c.at(0, 0) == 1.0);

    // Two unit cells a known distance apart.
    const CartesianMesh two = build_cartesian_mesh(2, {0, 0, 0}, {2, 1, 0}, {2, 1, 1});
    const DenseMatrix c2 = assemble_covariance_matrix(two, model);
    const double r = 1.0; // centroid distance, cells are 1 x 1
    CHECK(c2.at(0, 1) == doctest::Approx(std::exp(-2.0 * r)).epsilon(1e-14));
    CHECK(c2.at(0, 1) == c2.at(1, 0));

    // Dense guard.
    const CartesianMesh big = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {200, 200, 1});
    CHECK_THROWS_AS(assemble_covariance_matrix(big, model, 10000), std::invalid_argument);
}

TEST_CASE("identity covariance gives unit spectrum")
{
    // C = W: every generalized eigenvalue is 1.
    const CartesianMesh m = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {3, 3, 1});
    const Vector w = assemble_p0_mass(m);
    DenseMatrix c(9, 9);
    for (int i = 0; i < 9; ++i)
        c.at(i, i) = w[i];
    const KlBasis basis = kl_decompose(c, w, 9);
    for (double lam : basis.eigenvalues)
        CHECK(lam == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("two-cell generalized problem against hand algebra")
{
    // Equal half-volume cells, exponential covariance at distance 1/2 with
    // kappa = 2: eigenvalues v (1 +- e^-1).
    const CartesianMesh m = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {2, 1, 1});
    const CovarianceModel model(MaternParams{0.5, 2.0, 1.0, 2});
    const DenseMatrix c = assemble_covariance_matrix(m, model);
    const Vector w = assemble_p0_mass(m);
    const KlBasis basis = kl_decompose(c, w, 2);

    CHECK(basis.eigenvalues[0] == doctest::Approx(0.5 * (1.0 + std::exp(-1.0))).epsilon(1e-12));
    CHECK(basis.eigenvalues[1] == doctest::Approx(0.5 * (1.0 - std::exp(-1.0))).epsilon(1e-12));
    CHECK(basis.eigenvalues[0] == doctest::Approx(0.68393972058572).epsilon(1e-12));
    CHECK(basis.eigenvalues[1] == doctest::Approx(0.31606027941428).epsilon(1e-12));

    // W-orthonormality.
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
        {
            double s = 0.0;
            for (int i = 0; i < 2; ++i)
                s += basis.vectors.at(i, a) * w[i] * basis.vectors.at(i, b);
            CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("spectrum is nonincreasing and the trace budget holds")
{
    const CartesianMesh m = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {8, 8, 1});
    const CovarianceModel model(MaternParams{1.0, 10.0, 1.0, 2});
    const DenseMatrix c = assemble_covariance_matrix(m, model);
    const Vector w = assemble_p0_mass(m);
    const KlBasis basis = kl_decompose(c, w, 64);

    double sum = 0.0;
    for (std::size_t i = 1; i < basis.eigenvalues.size(); ++i)
        CHECK(basis.eigenvalues[i] <= basis.eigenvalues[i - 1]);
    for (double lam : basis.eigenvalues)
    {
        CHECK(lam >= 0.0);
        sum += lam;
    }
    // Trace identity: sum of generalized eigenvalues = sum_i C_ii / W_ii.
    double trace = 0.0;
    for (int i = 0; i < 64; ++i)
        trace += c.at(i, i) / w[i];
    CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
}

TEST_CASE("indefinite operators are refused")
{
    DenseMatrix c(2, 2);
    c.at(0, 1) = 1.0;
    c.at(1, 0) = 1.0; // eigenvalues +-1
    CHECK_THROWS_AS(kl_decompose(c, Vector{1.0, 1.0}, 2), NumericError);
}

TEST_CASE("full expansion reconstructs its own covariance operator")
{
    const CartesianMesh m = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {6, 6, 1});
    const CovarianceModel model(MaternParams{1.0, 8.0, 1.5, 2});
    const DenseMatrix c = assemble_covariance_matrix(m, model);
    const Vector w = assemble_p0_mass(m);
    const KlBasis basis = kl_decompose(c, w, m.num_cells());

    DenseMatrix recon = kl_reconstruct_covariance(basis);
    for (int i = 0; i < recon.rows; ++i)
        for (int j = 0; j < recon.cols; ++j)
            recon.at(i, j) *= w[i] * w[j];
    CHECK(relative_frobenius_error(recon, c) <= 1e-10);
}

TEST_CASE("expansion samples: zero, single mode, moment check")
{
    const CartesianMesh m = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {4, 4, 1});
    const CovarianceModel model(MaternParams{0.5, 5.0, 1.0, 2});
    const DenseMatrix c = assemble_covariance_matrix(m, model);
    const Vector w = assemble_p0_mass(m);
    const KlBasis full = kl_decompose(c, w, 16);

    CHECK(norm_inf(kl_sample(full, Vector(16, 0.0))) == 0.0);
    CHECK_THROWS_AS(kl_sample(full, Vector(3, 1.0)), std::invalid_argument);

    const KlBasis single = kl_decompose(c, w, 1);
    const Vector theta = kl_sample(single, Vector{2.0});
    for (int i = 0; i < 16; ++i)
        CHECK(theta[i] == doctest::Approx(2.0 * std::sqrt(single.eigenvalues[0])
                                          * single.vectors.at(i, 0)).epsilon(1e-13));
}

TEST_CASE("empirical covariance of iid normal vectors approaches the identity")
{
    const int n = 16;
    const int samples = 5000;
    std::vector<Vector> draws(samples);
    for (int i = 0; i < samples; ++i)
        draws[i] = draw_standard_normal({61, static_cast<std::uint64_t>(i), 0, 0}, n);
    const DenseMatrix cov = empirical_covariance(draws);
    DenseMatrix eye(n, n);
    for (int i = 0; i < n; ++i)
        eye.at(i, i) = 1.0;
    const double err = relative_frobenius_error(cov, eye);
    CHECK(err <= 3.0 * std::sqrt(2.0 / samples) * std::sqrt(static_cast<double>(n)));

    CHECK_THROWS_AS(empirical_covariance({Vector{1.0}}), std::invalid_argument);

    // Identical constant samples: zero covariance.
    std::vector<Vector> constant(10, Vector(4, 2.5));
    const DenseMatrix zero = empirical_covariance(constant);
    CHECK(zero.frobenius_norm() == 0.0);
}
