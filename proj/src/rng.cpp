#include "mlgrf/rng.hpp"

#include <cmath>

namespace mlgrf
{

namespace
{

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mul_hi_lo(std::uint64_t a, std::uint64_t b,
                      std::uint64_t& hi, std::uint64_t& lo)
{
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    lo = static_cast<std::uint64_t>(p);
    hi = static_cast<std::uint64_t>(p >> 64);
}

inline void philox_round(std::array<std::uint64_t, 4>& c,
                         const std::array<std::uint64_t, 2>& k)
{
    std::uint64_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kPhiloxM0, c[0], hi0, lo0);
    mul_hi_lo(kPhiloxM1, c[2], hi1, lo1);
    c[0] = hi1 ^ c[1] ^ k[0];
    c[1] = lo1;
    c[2] = hi0 ^ c[3] ^ k[1];
    c[3] = lo0;
}

inline double to_open_unit(std::uint64_t x)
{
    // 53 significant bits, centered so neither endpoint is reachable.
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key)
{
    std::array<std::uint64_t, 4> c = counter;
    std::array<std::uint64_t, 2> k = key;
    for (int round = 0; round < 10; ++round)
    {
        philox_round(c, k);
        if (round < 9)
        {
            k[0] += kPhiloxW0;
            k[1] += kPhiloxW1;
        }
    }
    return c;
}

double inverse_normal_cdf(double p)
{
    // Wichura, Applied Statistics 37 (1988), algorithm PPND16.
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1)");

    static constexpr double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2,
        1.9715909503065514427e3,  1.3731693765509461125e4,
        4.5921953931549871457e4,  6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static constexpr double b[8] = {
        1.0,                      4.2313330701600911252e1,
        6.8718700749205790830e2,  5.3941960214247511077e3,
        2.1213794301586595867e4,  3.9307895800092710610e4,
        2.8729085735721942674e4,  5.2264952788528545610e3};
    static constexpr double c[8] = {
        1.42343711074968357734e0,  4.63033784615654529590e0,
        5.76949722146069140550e0,  3.64784832476320460504e0,
        1.27045825245236838258e0,  2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {
        1.0,                       2.05319162663775882187e0,
        1.67638483018380384940e0,  6.89767334985100004550e-1,
        1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static constexpr double e[8] = {
        6.65790464350110377720e0,  5.46378491116411436990e0,
        1.78482653991729133580e0,  2.96560571828504891230e-1,
        2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {
        1.0,                       5.99832206555887937690e-1,
        1.36929880922735805310e-1, 1.48753612908506148525e-2,
        7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    auto ratio = [](const double* num, const double* den, double r)
    {
        double n = num[7], m = den[7];
        for (int i = 6; i >= 0; --i)
        {
            n = n * r + num[i];
            m = m * r + den[i];
        }
        return n / m;
    };

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425)
    {
        const double r = 0.180625 - q * q;
        return q * ratio(a, b, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0)
        val = ratio(c, d, r - 1.6);
    else
        val = ratio(e, f, r - 5.0);
    return q < 0.0 ? -val : val;
}

Vector draw_uniform(const StreamKey& key, std::size_t n)
{
    Vector out(n);
    const std::array<std::uint64_t, 2> k = {key.seed, key.sample};
    std::array<std::uint64_t, 4> block{};
    for (std::size_t i = 0; i < n; ++i)
    {
        if (i % 4 == 0)
            block = philox4x64({i / 4, key.level, key.draw, 0}, k);
        out[i] = to_open_unit(block[i % 4]);
    }
    return out;
}

Vector draw_standard_normal(const StreamKey& key, std::size_t n)
{
    Vector out = draw_uniform(key, n);
    for (double& u : out)
        u = inverse_normal_cdf(u);
    return out;
}

} // namespace mlgrf
