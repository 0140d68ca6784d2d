#ifndef MLGRF_MATERN_HPP
#define MLGRF_MATERN_HPP

#include <array>

#include "mlgrf/common.hpp"

namespace mlgrf
{

/**
   Parameters of a stationary Matern field: smoothness nu, inverse length
   scale kappa, marginal variance sigma2, spatial dimension. The white-noise
   scaling that imposes unit marginal variance on the whole-space solution
   is derived, g = (4 pi)^(d/4) kappa^nu sqrt(Gamma(nu + d/2) / Gamma(nu)).
*/
struct MaternParams
{
    double nu = 1.0;
    double kappa = 1.0;
    double sigma2 = 1.0;
    int dim = 2;

    double alpha() const { return nu + 0.5 * dim; }
    double sigma() const { return std::sqrt(sigma2); }

    void validate() const;
};

/// White-noise scaling g for unit marginal variance.
double matern_scaling(const MaternParams& p);

/// kappa from a correlation length b, using kappa = sqrt(8 nu) / b
/// (the length at which the correlation has decayed to about 0.14).
double kappa_from_correlation_length(double corr_length, double nu);

/// Modified Bessel function of the second kind for real nonnegative order;
/// half-integer orders use the closed-form recurrence.
double bessel_k(double nu, double x);

/// Matern covariance of two points at distance r; returns sigma2 at r = 0.
double matern_covariance(double r, const MaternParams& p);

/// Covariance model evaluated at point pairs; closed forms for
/// nu = 1/2 (exponential) and nu = 3/2.
class CovarianceModel
{
public:
    explicit CovarianceModel(MaternParams p);

    const MaternParams& params() const { return params_; }
    double at_distance(double r) const;
    double operator()(const std::array<double, 3>& x, const std::array<double, 3>& y) const;

private:
    MaternParams params_;
};

} // namespace mlgrf

#endif
