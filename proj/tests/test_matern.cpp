#include <doctest.h>

#include "mlgrf/matern.hpp"

using namespace mlgrf;

TEST_CASE("white-noise scaling closed forms")
{
    // 2D, nu = 1: integer gamma values collapse to 2 sqrt(pi) kappa.
    MaternParams p{1.0, 3.0, 1.0, 2};
    CHECK(matern_scaling(p) == doctest::Approx(2.0 * std::sqrt(M_PI) * 3.0).epsilon(1e-14));

    // 3D, nu = 1/2: (4 pi)^(3/4) sqrt(kappa) / pi^(1/4).
    MaternParams q{0.5, 2.0, 1.0, 3};
    const double expect = std::pow(4.0 * M_PI, 0.75) * std::sqrt(2.0) / std::pow(M_PI, 0.25);
    CHECK(matern_scaling(q) == doctest::Approx(expect).epsilon(1e-14));

    // Doubling kappa scales g by 2^nu.
    MaternParams a{1.5, 1.0, 1.0, 2};
    MaternParams b{1.5, 2.0, 1.0, 2};
    CHECK(matern_scaling(b) / matern_scaling(a) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-14));

    CHECK_THROWS_AS(matern_scaling(MaternParams{0.0, 1.0, 1.0, 2}), std::invalid_argument);
}

TEST_CASE("covariance limits and closed forms")
{
    const CovarianceModel exp_model(MaternParams{0.5, 1.0, 1.0, 2});
    CHECK(exp_model.at_distance(0.0) == 1.0);
    CHECK(exp_model.at_distance(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

    const CovarianceModel nu32(MaternParams{1.5, 1.0, 1.0, 2});
    CHECK(nu32.at_distance(1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(nu32.at_distance(1.0) == doctest::Approx(0.7357588823428847).epsilon(1e-13));

    // Symmetry in the arguments and the sigma^2 bound.
    const std::array<double, 3> x{0.2, 0.7, 0.0};
    const std::array<double, 3> y{0.9, 0.1, 0.0};
    CHECK(nu32(x, y) == nu32(y, x));
    CHECK(nu32(x, y) <= 1.0);
    CHECK(nu32(x, x) == 1.0);
}

TEST_CASE("general order against frozen reference values")
{
    // Independent reference evaluations of the covariance at kappa r = x.
    MaternParams nu1{1.0, 1.0, 1.0, 2};
    CHECK(matern_covariance(1.0, nu1) == doctest::Approx(0.6019072301972346).epsilon(1e-12));
    CHECK(matern_covariance(0.5, nu1) == doctest::Approx(0.8282205600016503).epsilon(1e-12));

    MaternParams nu52{2.5, 1.0, 1.0, 2};
    CHECK(matern_covariance(1.3, nu52) == doctest::Approx(0.7803493673873894).epsilon(1e-12));

    MaternParams nu2{2.0, 1.0, 1.0, 2};
    CHECK(matern_covariance(0.7, nu2) == doctest::Approx(0.8970258403982425).epsilon(1e-12));
}

TEST_CASE("half-integer evaluation matches the exponential closed form")
{
    MaternParams p{0.5, 4.0, 2.25, 2};
    for (double r = 0.0; r <= 10.0 / p.kappa; r += 0.07 / p.kappa)
    {
        const double general = matern_covariance(r, p);
        const double closed = p.sigma2 * std::exp(-p.kappa * r);
        CHECK(general == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("correlation length convention")
{
    CHECK(kappa_from_correlation_length(0.1, 1.0) == doctest::Approx(std::sqrt(8.0) / 0.1));
    // The correlation at one correlation length is near 0.14 for nu = 1.
    MaternParams p{1.0, kappa_from_correlation_length(0.25, 1.0), 1.0, 2};
    const double rho = matern_covariance(0.25, p);
    CHECK(rho > 0.10);
    CHECK(rho < 0.17);
    CHECK_THROWS_AS(kappa_from_correlation_length(0.0, 1.0), std::invalid_argument);
}
