#include "mlgrf/matern.hpp"

#include <cmath>
#include <numbers>

namespace mlgrf
{

void MaternParams::validate() const
{
    if (!(nu > 0.0))
        throw std::invalid_argument("MaternParams: nu must be positive");
    if (!(kappa > 0.0))
        throw std::invalid_argument("MaternParams: kappa must be positive");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("MaternParams: sigma2 must be positive");
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("MaternParams: dim must be 2 or 3");
}

double matern_scaling(const MaternParams& p)
{
    p.validate();
    const double d = static_cast<double>(p.dim);
    return std::pow(4.0 * std::numbers::pi, 0.25 * d) * std::pow(p.kappa, p.nu)
           * std::sqrt(std::tgamma(p.nu + 0.5 * d) / std::tgamma(p.nu));
}

double kappa_from_correlation_length(double corr_length, double nu)
{
    if (!(corr_length > 0.0))
        throw std::invalid_argument("correlation length must be positive");
    if (!(nu > 0.0))
        throw std::invalid_argument("nu must be positive");
    return std::sqrt(8.0 * nu) / corr_length;
}

double bessel_k(double nu, double x)
{
    if (!(x > 0.0))
        throw std::invalid_argument("bessel_k: x must be positive");
    if (nu < 0.0)
        nu = -nu;

    const double half = nu - std::floor(nu);
    if (std::abs(half - 0.5) < 1e-14)
    {
        // K_{1/2}(x) = sqrt(pi/(2x)) e^-x; upward recurrence
        // K_{n+1/2} = K_{n-3/2} + (2n-1)/x K_{n-1/2}.
        const double base = std::sqrt(0.5 * std::numbers::pi / x) * std::exp(-x);
        double km = base;            // K_{1/2}
        if (nu < 1.0)
            return km;
        double k = base * (1.0 + 1.0 / x); // K_{3/2}
        double order = 1.5;
        while (order < nu - 1e-12)
        {
            const double next = km + (2.0 * order / x) * k;
            km = k;
            k = next;
            order += 1.0;
        }
        return k;
    }
    return std::cyl_bessel_k(nu, x);
}

double matern_covariance(double r, const MaternParams& p)
{
    if (r < 0.0)
        throw std::invalid_argument("matern_covariance: distance must be nonnegative");
    if (r == 0.0)
        return p.sigma2;
    const double x = p.kappa * r;
    return p.sigma2 * std::pow(2.0, 1.0 - p.nu) / std::tgamma(p.nu)
           * std::pow(x, p.nu) * bessel_k(p.nu, x);
}

CovarianceModel::CovarianceModel(MaternParams p) : params_(p)
{
    params_.validate();
}

double CovarianceModel::at_distance(double r) const
{
    if (r == 0.0)
        return params_.sigma2;
    const double x = params_.kappa * r;
    if (params_.nu == 0.5)
        return params_.sigma2 * std::exp(-x);
    if (params_.nu == 1.5)
        return params_.sigma2 * (1.0 + x) * std::exp(-x);
    return matern_covariance(r, params_);
}

double CovarianceModel::operator()(const std::array<double, 3>& x,
                                   const std::array<double, 3>& y) const
{
    double r2 = 0.0;
    for (int a = 0; a < 3; ++a)
    {
        const double d = x[a] - y[a];
        r2 += d * d;
    }
    return at_distance(std::sqrt(r2));
}

} // namespace mlgrf
