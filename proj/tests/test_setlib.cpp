#include "idim/setlib.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace idim;
using testing_support::for_all;
using testing_support::Gen;

namespace {

// Largest distance from a point of `from` to its nearest point of `to`.
double directed_hausdorff(const PointCloud& from, const PointCloud& to)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
        double best = INFINITY;
        const auto a = from.point(i);
        for (std::size_t j = 0; j < to.size(); ++j) {
            const auto b = to.point(j);
            double s = 0.0;
            for (int k = 0; k < from.d; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
            best = std::min(best, s);
        }
        worst = std::max(worst, std::sqrt(best));
    }
    return worst;
}

std::vector<SetSpec> continuous_specs()
{
    return {SetSpec::concentric(2, 0.5), SetSpec::concentric(3, 0.7), SetSpec::spiral(0.5), SetSpec::elliptical(0.5, 1.5),
            SetSpec::product_sine(1.0),  SetSpec::attenuated(1.0, 0.5), SetSpec::attenuated(0.5, 2.0)};
}

} // namespace

TEST_CASE("radius terms")
{
    CHECK(radius_term(RadiusSequence::power(1.0), 4) == 0.25);
    CHECK(radius_term(RadiusSequence::power(2.0), 1) == 1.0);
    CHECK(radius_term(RadiusSequence::geometric(2.0), 3) == 0.125);
    CHECK(radius_term(RadiusSequence::logarithmic(), 1) == doctest::Approx(1.0 / std::log(2.0)));
    CHECK(radius_term(RadiusSequence::table({0.5, 0.25}), 2) == 0.25);
    CHECK_THROWS_AS(radius_term(RadiusSequence::power(1.0), 0), std::invalid_argument);
}

TEST_CASE("first_index_at_most agrees with a linear scan")
{
    for_all(200, 11, [](Gen& g) {
        const RadiusSequence seq = g.coin() ? RadiusSequence::power(g.uniform(0.5, 3.0)) : RadiusSequence::geometric(g.uniform(1.1, 4.0));
        const double x = g.log_uniform(1e-3, 0.9);
        std::int64_t n = 1;
        while (radius_term(seq, n) > x) ++n;
        CHECK(first_index_at_most(seq, x) == n);
    });
}

TEST_CASE("sample: fp above truncation is the exact point list")
{
    const PointCloud c = sample(SetSpec::fp(1.0), 10, 0.09);
    REQUIRE(c.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(c.point(i)[0] == doctest::Approx(1.0 / static_cast<double>(i + 1)));
}

TEST_CASE("sample: isolated points on three circles")
{
    const PointCloud c = sample(SetSpec::isolated(1.0, CountRule::constant(4)), 1000, 0.3);
    REQUIRE(c.size() == 12);
    std::vector<int> per(4, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double r = std::hypot(c.point(i)[0], c.point(i)[1]);
        const int k = static_cast<int>(std::lround(1.0 / r));
        REQUIRE(k >= 1);
        REQUIRE(k <= 3);
        CHECK(r == doctest::Approx(1.0 / k));
        ++per[k];
    }
    CHECK(per[1] == 4);
    CHECK(per[2] == 4);
    CHECK(per[3] == 4);
}

TEST_CASE("sample: attenuated sine points lie on the graph")
{
    const PointCloud c = sample(SetSpec::attenuated(1.0, 0.5), 100000, 1e-3);
    REQUIRE(c.size() > 1000);
    double worst = 0.0, lowest = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double x = c.point(i)[0], y = c.point(i)[1];
        worst = std::max(worst, std::abs(y - std::sqrt(x) * std::sin(testing_support::kPi / x)));
        lowest = std::min(lowest, x);
    }
    CHECK(worst <= 1e-9);
    CHECK(lowest >= 1e-3 * (1 - 1e-12));
}

TEST_CASE("membership residual examples")
{
    const SetSpec c1 = SetSpec::concentric(2, 1.0);
    const double p1[] = {0.5, 0.0}, p2[] = {0.4, 0.0}, p3[] = {1.0, 0.0};
    CHECK(membership_residual(c1, p1) == doctest::Approx(0.0));
    CHECK(membership_residual(c1, p2) == doctest::Approx(0.4 - 1.0 / 3.0));
    CHECK(membership_residual(SetSpec::attenuated(1.0, 2.0), p3) == doctest::Approx(0.0));
}

TEST_CASE("property: samples are deterministic and lie on the set")
{
    for (const auto& spec : continuous_specs()) {
        CAPTURE(family_name(spec.family));
        const std::int64_t budget = spec.d > 2 ? 100 : 3000;
        const PointCloud a = sample(spec, budget, 0.05);
        const PointCloud b = sample(spec, budget, 0.05);
        CHECK(a.coords == b.coords);
        const double tol = 1e-9 * set_diameter(spec);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, membership_residual(spec, a.point(i)));
        CHECK(worst <= tol);
    }
}

TEST_CASE("property: doubling the budget stays within the coarser step")
{
    for (const auto& spec : continuous_specs()) {
        if (spec.d > 2) continue;
        CAPTURE(family_name(spec.family));
        const std::int64_t budget = 150;
        const PointCloud coarse = sample(spec, budget, 0.1);
        const PointCloud fine = sample(spec, 2 * budget, 0.1);
        const double step = set_diameter(spec) / static_cast<double>(budget);
        CHECK(directed_hausdorff(fine, coarse) <= step);
        CHECK(directed_hausdorff(coarse, fine) <= step);
    }
}

TEST_CASE("gap counts")
{
    // a_k = k^-p sits in its own interval.
    for (double p : {0.3, 1.0, 2.5}) CHECK(gap_count_A(RadiusSequence::power(p), p, 50) == 50);

    auto brute = [](auto term, int terms, double p, int n) {
        int hits = 0;
        for (int k = 1; k <= n; ++k) {
            const double lo = std::pow(k + 1.0, -p), hi = std::pow(static_cast<double>(k), -p);
            bool hit = false;
            for (int i = 1; i <= terms && !hit; ++i) hit = term(i) > lo && term(i) <= hi;
            hits += hit;
        }
        return hits;
    };
    const auto geo = [](int i) { return std::pow(2.0, -i); };
    CHECK(brute(geo, 64, 1.0, 4) == 2);
    CHECK(gap_count_A(RadiusSequence::geometric(2.0), 1.0, 4) == 2);

    // Some 1/log m lies in (1/2, 1] iff m in [3, 7].
    bool hit = false;
    for (int m = 2; m <= 1000000 && !hit; ++m) hit = 1.0 / std::log(m) > 0.5 && 1.0 / std::log(m) <= 1.0;
    CHECK(gap_count_A(RadiusSequence::logarithmic(), 1.0, 1) == (hit ? 1 : 0));

    for_all(40, 5, [&](Gen& g) {
        const double ratio = g.uniform(1.2, 3.0), p = g.uniform(0.3, 2.0);
        const RadiusSequence seq = RadiusSequence::geometric(ratio);
        const int n = g.integer(1, 60);
        CHECK(gap_count_A(seq, p, n) == brute([&](int i) { return std::pow(ratio, -i); }, 200, p, n));
    });
}

TEST_CASE("property: gap count is at most n and non-decreasing")
{
    for_all(30, 9, [](Gen& g) {
        RadiusSequence seq;
        switch (g.integer(0, 2)) {
        case 0: seq = RadiusSequence::power(g.uniform(0.2, 3.0)); break;
        case 1: seq = RadiusSequence::geometric(g.uniform(1.1, 3.0)); break;
        default: seq = RadiusSequence::logarithmic(); break;
        }
        const double p = g.uniform(0.2, 2.0);
        std::int64_t prev = 0;
        for (std::int64_t n = 1; n <= 200; n += 7) {
            const std::int64_t a = gap_count_A(seq, p, n);
            CHECK(a <= n);
            CHECK(a >= prev);
            prev = a;
        }
    });
}

TEST_CASE("validation rejects bad parameters")
{
    CHECK_THROWS_AS(validate(SetSpec::concentric(1, 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(validate(SetSpec::elliptical(1.0, 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(validate(SetSpec::concentric(2, RadiusSequence::table({0.5, 0.6}))), std::invalid_argument);
    CHECK_THROWS_AS(validate(SetSpec::concentric(2, RadiusSequence::geometric(1.0))), std::invalid_argument);
    CHECK_NOTHROW(validate(SetSpec::attenuated(1.0, 0.5)));
}

TEST_CASE("power-sum counts have partial sums floor(n^l)")
{
    const CountRule r = CountRule::power_sum(1.5);
    std::int64_t sum = 0;
    for (std::int64_t n = 1; n <= 100; ++n) {
        sum += points_on_circle(r, n);
        CHECK(sum == static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), 1.5))));
    }
    CHECK(growth_exponent(r) == 1.5);
    CHECK(std::isinf(growth_exponent(CountRule::exponential(2))));
}
