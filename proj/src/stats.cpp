#include "mlgrf/stats.hpp"

#include <algorithm>
#include <cmath>

namespace mlgrf
{

namespace
{

RunningStat pairwise_range(Span v, std::size_t lo, std::size_t hi)
{
    RunningStat s;
    if (hi - lo <= 16)
    {
        for (std::size_t i = lo; i < hi; ++i)
            s.add(v[i]);
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    s = pairwise_range(v, lo, mid);
    s.merge(pairwise_range(v, mid, hi));
    return s;
}

} // namespace

RunningStat pairwise_stat(Span values)
{
    if (values.empty())
        return RunningStat{};
    return pairwise_range(values, 0, values.size());
}

double ks_statistic_standard_normal(Span sample)
{
    if (sample.empty())
        throw std::invalid_argument("ks statistic: empty sample");
    Vector x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double cdf = 0.5 * std::erfc(-x[i] / std::sqrt(2.0));
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(cdf - lo, hi - cdf));
    }
    return d;
}

} // namespace mlgrf
