#include "idim/formula.hpp"

#include "support.hpp"

#include <boost/rational.hpp>
#include <doctest.h>

#include <cmath>
#include <functional>

using namespace idim;
using testing_support::for_all;
using testing_support::Gen;
using Q = boost::rational<long long>;

namespace {

double to_double(Q q) { return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator()); }

// C_p^d from the rational form, cleared of denominators.
Q concentric_exact(long long d, Q p, Q th)
{
    if (th.numerator() == 0 || p * Q(d - 1) >= Q(1)) return Q(d - 1);
    const Q gap = 1 - p * (d - 1);
    return (d * p * (d - 1) + d * th * gap) / (d * p + th * gap);
}

} // namespace

TEST_CASE("closed-form examples")
{
    CHECK(dim_fp(1, 1) == doctest::Approx(0.5));
    CHECK(dim_fp(2, 0) == 0.0);
    CHECK(dim_fp(0.5, 0.5) == doctest::Approx(0.5));
    CHECK(dim_concentric(2, 1, 0.7) == 1.0);
    CHECK(dim_concentric(2, 0.5, 1) == doctest::Approx(4.0 / 3));
    CHECK(dim_concentric(3, 0.2, 0) == 2.0);
    CHECK(dim_spiral(0.5, 1) == doctest::Approx(4.0 / 3));
    CHECK(dim_spiral(2, 0.3) == 1.0);
    CHECK(dim_spiral(0.5, 0) == 1.0);
    CHECK(dim_elliptical(1, 2, 0.5) == 1.0);
    CHECK(dim_elliptical(0.5, 0.5, 1) == doctest::Approx(4.0 / 3));
    CHECK(dim_elliptical(0.5, 1.5, 1) == doctest::Approx(1.2));
    CHECK(dim_product_sine(1, 1) == doctest::Approx(1.5));
    CHECK(dim_product_sine(1, 0) == 1.0);
    CHECK(dim_product_sine(3, 1) == doctest::Approx(1.25));
    CHECK(dim_attenuated(1, 0.5, 1) == doctest::Approx(1.25));
    CHECK(dim_attenuated(1, 2, 0.8) == 1.0);
    CHECK(dim_attenuated(0.5, 1, 0) == 1.0);
}

TEST_CASE("concentric values match exact rationals")
{
    for (int k = 0; k <= 4; ++k) {
        const Q th(k, 4);
        const double expect = to_double((1 + th) / (1 + th / 2));
        CHECK(std::abs(dim_concentric(2, 0.5, to_double(th)) - expect) <= 1e-12);
        CHECK(to_double(concentric_exact(2, Q(1, 2), th)) == doctest::Approx(expect).epsilon(1e-15));
    }
    for (long long d = 2; d <= 6; ++d)
        for (int a = 1; a <= 9; ++a)
            for (int b = 0; b <= 8; ++b) {
                const Q p(a, 10), th(b, 8);
                CHECK(std::abs(dim_concentric(static_cast<int>(d), to_double(p), to_double(th)) - to_double(concentric_exact(d, p, th))) <= 1e-12);
            }
}

TEST_CASE("bounds for general radii")
{
    auto b = bounds_general_concentric(2, 0);
    CHECK(b.lower == 0.0);
    CHECK(b.upper == 1.0);
    b = bounds_general_concentric(2, 1);
    CHECK(b.lower == 1.0);
    CHECK(b.upper == 2.0);
    b = bounds_general_concentric(3, 0.5);
    CHECK(b.lower == doctest::Approx(1.5));
    CHECK(b.upper == doctest::Approx(2.5));
}

TEST_CASE("comparison conditions at a finite horizon")
{
    const auto geo = check_comparison_conditions(RadiusSequence::geometric(2), 1, 10000);
    CHECK(geo.upper_applies);
    CHECK_FALSE(geo.lower_applies);
    const auto pw = check_comparison_conditions(RadiusSequence::power(0.7), 0.7, 10000);
    CHECK_FALSE(pw.upper_applies);
    CHECK(pw.lower_applies);
    const auto lg = check_comparison_conditions(RadiusSequence::logarithmic(), 1, 10000);
    CHECK_FALSE(lg.upper_applies);
    CHECK(lg.lower_applies);
    CHECK(lg.label == "empirical at horizon");

    // Some 1/log(m+1) lies in (1/(n+1), 1/n] iff [e^n, e^(n+1)) holds an integer >= 2.
    int hits = 0;
    double inf = INFINITY;
    for (std::int64_t n = 1; n <= 10000; ++n) {
        const long double lo = std::exp(static_cast<long double>(n)), hi = std::exp(static_cast<long double>(n + 1));
        hits += std::max(std::ceil(lo), 2.0L) < hi;
        if (n >= 5000) inf = std::min(inf, hits / static_cast<double>(n));
    }
    CHECK(lg.tail_density_inf == doctest::Approx(inf));
}

TEST_CASE("isolated point bounds")
{
    CHECK(dim_isolated_upper(2, 1, 1, 1) == doctest::Approx(2.0 / 3));
    CHECK(dim_isolated_upper(2, 1, 1, 0) == 0.0);
    CHECK(dim_isolated_upper(3, 2, 2, 1) == doctest::Approx(0.75));
    CHECK(dim_isolated_lower_density(1, 1) == doctest::Approx(0.5));
    CHECK(dim_isolated_lower_density(1, 0) == 0.0);
    CHECK(dim_isolated_lower_density(0.25, 0.25) == doctest::Approx(0.5));
}

TEST_CASE("identity examples")
{
    CHECK(identity_checks(0.5, 1, 2, ThetaGrid({0, 0.5, 1})));
    CHECK(identity_checks(1, 2, 3, ThetaGrid({0, 1})));
    CHECK(identity_checks(0.3, 0.3, 2, ThetaGrid::uniform(11)));
}

TEST_CASE("property: identities hold for random parameters")
{
    for_all(1000, 21, [](Gen& g) {
        const double p = g.log_uniform(0.05, 5), q = p * g.uniform(1, 4), th = g.theta();
        const int d = g.integer(2, 7);
        CHECK(std::abs((dim_concentric(d, p, th) - (d - 1)) - (dim_attenuated(p, d - 1, th) - 1)) <= 1e-10);
        CHECK(std::abs(dim_elliptical(p, q, th) - dim_attenuated(q, p / q, th)) <= 1e-10);
    });
}

TEST_CASE("property: every formula is non-decreasing in theta")
{
    const auto grid = ThetaGrid::uniform(101).values();
    REQUIRE(grid.size() == 101);
    for_all(200, 3, [&](Gen& g) {
        const double p = g.log_uniform(0.05, 5), q = g.log_uniform(0.05, 5);
        const int d = g.integer(2, 6);
        const double qe = p * g.uniform(1, 3);
        const std::vector<std::function<double(double)>> fs = {
            [&](double t) { return dim_fp(p, t); },
            [&](double t) { return dim_concentric(d, p, t); },
            [&](double t) { return dim_spiral(p, t); },
            [&](double t) { return dim_elliptical(p, qe, t); },
            [&](double t) { return dim_product_sine(p, t); },
            [&](double t) { return dim_attenuated(p, q, t); },
            [&](double t) { return dim_isolated_upper(d, p, q + 1, t); },
            [&](double t) { return dim_isolated_lower_density(p, t); },
        };
        for (const auto& f : fs)
            for (std::size_t i = 1; i < grid.size(); ++i) CHECK(f(grid[i]) >= f(grid[i - 1]) - 1e-15);
    });
}

TEST_CASE("property: ranges and endpoints")
{
    for_all(500, 4, [](Gen& g) {
        const double p = g.log_uniform(0.05, 5), q = g.log_uniform(0.05, 5), th = g.theta();
        const int d = g.integer(2, 6);
        const double c = dim_concentric(d, p, th);
        CHECK(c >= d - 1.0);
        CHECK(c <= d);
        for (double v : {dim_spiral(p, th), dim_attenuated(p, q, th), dim_elliptical(p, p + q, th), dim_product_sine(p, th)}) {
            CHECK(v >= 1.0);
            CHECK(v <= 2.0);
        }
        CHECK(dim_fp(p, th) >= 0.0);
        CHECK(dim_fp(p, th) <= 1.0);
        CHECK(dim_concentric(d, p, 0) == d - 1.0);
        CHECK(dim_fp(p, 0) == 0.0);
        // theta = 1 gives the box-dimension form d p (d-1) + d(1 - p(d-1)) over d p + 1 - p(d-1).
        if (p * (d - 1) < 1) {
            const double gap = 1 - p * (d - 1);
            CHECK(dim_concentric(d, p, 1) == doctest::Approx((d * p * (d - 1) + d * gap) / (d * p + gap)));
        }
    });
}

TEST_CASE("property: branches agree at their boundaries")
{
    for_all(200, 8, [](Gen& g) {
        const double th = g.theta();
        const int d = g.integer(2, 6);
        const double pc = 1.0 / (d - 1);
        const double gap = 1e-13;
        CHECK(dim_concentric(d, pc * (1 - gap), th) == doctest::Approx(d - 1.0).epsilon(1e-9));
        const double p = g.log_uniform(0.1, 10);
        CHECK(dim_attenuated(p, (1 - gap) / p, th) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(dim_spiral(1 - gap, th) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(dim_attenuated(p, g.uniform(1, 5) / p, th) == 1.0);
        CHECK(std::abs(dim_attenuated(p, 1e-9, th) - dim_product_sine(p, th)) <= 1e-6);
    });
}

TEST_CASE("theta grids")
{
    const ThetaGrid g = ThetaGrid::range(0, 1, 0.1);
    REQUIRE(g.size() == 11);
    CHECK(g.values()[3] == 0.3);
    CHECK(ThetaGrid({0.5}).size() == 3);
    CHECK_THROWS_AS(ThetaGrid({1.5}), std::invalid_argument);
    const auto prof = formula_profile(SetSpec::concentric(2, 0.5), g);
    CHECK(prof.values.back() == doctest::Approx(4.0 / 3));
    CHECK_THROWS_AS(formula_profile(SetSpec::isolated(1, CountRule::constant(2)), g), std::invalid_argument);
}
