#ifndef MLGRF_COMMON_HPP
#define MLGRF_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlgrf
{

using Vector = std::vector<double>;
using Span = std::span<const double>;

/// Raised for malformed configuration files or CLI arguments.
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a file cannot be read or written.
class IoError : public std::runtime_error
{
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on eigensolver or factorization breakdown.
class NumericError : public std::runtime_error
{
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

inline double dot(Span a, Span b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm2(Span a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(Span a)
{
    double s = 0.0;
    for (double v : a)
        s = std::max(s, std::abs(v));
    return s;
}

inline void axpy(double alpha, Span x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += alpha * x[i];
}

} // namespace mlgrf

#endif
