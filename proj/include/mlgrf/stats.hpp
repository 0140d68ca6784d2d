#ifndef MLGRF_STATS_HPP
#define MLGRF_STATS_HPP

#include <cstddef>

#include "mlgrf/common.hpp"

namespace mlgrf
{

/**
   Streaming count / mean / M2 accumulator (Welford) with an exact
   merge rule, so partial results from independent batches combine
   into the same statistics a single pass would produce.
*/
class RunningStat
{
public:
    void add(double x)
    {
        count_ += 1;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(count_);
        m2_ += d * (x - mean_);
    }

    void merge(const RunningStat& other)
    {
        if (other.count_ == 0)
            return;
        if (count_ == 0)
        {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count_);
        const double nb = static_cast<double>(other.count_);
        const double d = other.mean_ - mean_;
        mean_ += d * nb / (na + nb);
        m2_ += other.m2_ + d * d * na * nb / (na + nb);
        count_ += other.count_;
    }

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }

    /// Unbiased sample variance; requires count >= 2.
    double variance() const
    {
        if (count_ < 2)
            throw std::logic_error("RunningStat: variance needs at least 2 samples");
        double v = m2_ / static_cast<double>(count_ - 1);
        return v < 0.0 ? 0.0 : v;
    }

    /// Standard error of the mean.
    double std_error() const
    {
        return std::sqrt(variance() / static_cast<double>(count_));
    }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Deterministic pairwise reduction of a value array into a RunningStat.
/// The tree shape depends only on the array length, never on thread count.
RunningStat pairwise_stat(Span values);

/// Kolmogorov-Smirnov distance of a sample against the standard normal CDF.
/// Sorts a copy of the input.
double ks_statistic_standard_normal(Span sample);

} // namespace mlgrf

#endif
