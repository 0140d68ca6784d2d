#include <doctest.h>

#include "mlgrf/rng.hpp"
#include "mlgrf/stats.hpp"

using namespace mlgrf;

namespace
{

void two_pass(Span v, double& mean, double& var)
{
    mean = 0.0;
    for (double x : v)
        mean += x;
    mean /= static_cast<double>(v.size());
    var = 0.0;
    for (double x : v)
        var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size() - 1);
}

} // namespace

TEST_CASE("streaming statistics equal the two-pass computation")
{
    const Vector v = draw_standard_normal({11, 0, 0, 0}, 10001);
    RunningStat s;
    for (double x : v)
        s.add(x);
    double mean, var;
    two_pass(v, mean, var);
    CHECK(s.mean() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(s.variance() == doctest::Approx(var).epsilon(1e-12));

    RunningStat p = pairwise_stat(v);
    CHECK(p.count() == v.size());
    CHECK(p.mean() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(p.variance() == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("merge is exact for any split point")
{
    const Vector v = draw_standard_normal({12, 0, 0, 0}, 997);
    RunningStat whole = pairwise_stat(v);
    for (std::size_t cut : {1UL, 13UL, 500UL, 996UL})
    {
        RunningStat a = pairwise_stat(Span(v).subspan(0, cut));
        RunningStat b = pairwise_stat(Span(v).subspan(cut));
        a.merge(b);
        CHECK(a.count() == whole.count());
        CHECK(a.mean() == doctest::Approx(whole.mean()).epsilon(1e-13));
        CHECK(a.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));
    }
}

TEST_CASE("degenerate statistics")
{
    RunningStat s;
    CHECK(s.count() == 0);
    s.add(3.5);
    CHECK(s.mean() == 3.5);
    CHECK_THROWS(s.variance());
    s.add(3.5);
    CHECK(s.variance() == 0.0);

    RunningStat empty;
    s.merge(empty);
    CHECK(s.count() == 2);
}
