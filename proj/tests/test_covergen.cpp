#include "idim/boxcount.hpp"
#include "idim/covergen.hpp"
#include "idim/formula.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace idim;
using testing_support::for_all;
using testing_support::Gen;

namespace {

std::vector<double> ladder(int from, int to)
{
    std::vector<double> out;
    for (int k = from; k <= to; ++k) out.push_back(std::ldexp(1.0, -k));
    return out;
}

PointCloud circle_cloud(double R, std::int64_t budget)
{
    return sample(SetSpec::concentric(2, RadiusSequence::table({R})), budget, 1.0);
}

} // namespace

TEST_CASE("xi constants")
{
    CHECK(xi_constant(2) == 8.0);
    CHECK(xi_constant(3) == doctest::Approx(48.0));
    CHECK(xi_constant(4) == doctest::Approx(std::pow(8.0, 3)));
}

TEST_CASE("sphere cover counts")
{
    const auto n = sphere_cover_count(2, 1.0, 0.1);
    CHECK(n <= 80);
    // A set of diameter r meets at most an arc of angle 2 asin(r / 2R).
    CHECK(n >= static_cast<std::int64_t>(std::ceil(testing_support::kPi / std::asin(0.05))));
    CHECK(sphere_cover_count(2, 0.3, 0.3) == 1);
    CHECK(sphere_cover_count(3, 1.0, 0.5) <= 48 * 4);
    CHECK(sphere_cover_count(3, 1.0, 0.5) >= 1);
}

TEST_CASE("property: sphere cover counts stay under xi_d (R/r)^(d-1)")
{
    for_all(300, 31, [](Gen& g) {
        const int d = g.integer(2, 4);
        const double R = g.log_uniform(1e-3, 1), r = R / g.log_uniform(1.01, 200);
        const double n = static_cast<double>(sphere_cover_count(d, R, r));
        CHECK(n <= std::ceil(xi_constant(d) * std::pow(R / r, d - 1) * (1 + 1e-12)));
        if (d == 2) CHECK(n >= std::ceil(testing_support::kPi / std::asin(std::min(1.0, r / (2 * R)))) - 1e-9);
    });
}

TEST_CASE("theorem cutoffs")
{
    const auto m1 = theorem_cutoff(SetSpec::concentric(2, 0.5), 1e-4, 1.0, 4.0 / 3);
    REQUIRE(m1);
    CHECK(*m1 == static_cast<std::int64_t>(std::ceil(std::pow(10.0, 8.0 / 3))));
    const auto m2 = theorem_cutoff(SetSpec::attenuated(1, 0.5), 1e-3, 0.5, 1.2);
    REQUIRE(m2);
    CHECK(*m2 == static_cast<std::int64_t>(std::ceil(std::pow(10.0, 0.9))));
    const auto c = build_theorem_cover(SetSpec::concentric(2, 0.5), 1e-4, 1.0, 4.0 / 3);
    CHECK(c.inner_scale == doctest::Approx(1e-4));
    CHECK(c.cutoff_M == *m1);
    CHECK(c.outer_per_piece.size() == static_cast<std::size_t>(*m1 - 1));
    CHECK_THROWS(build_cover_counts(SetSpec::spiral(0.5), 1e-3, 1, 4));
}

TEST_CASE("cover cost examples")
{
    CoverCounts one;
    one.inner_boxes = 1;
    one.inner_scale = std::pow(0.01, 0.5);
    CHECK(cover_cost(one, 0.01, 0.5, 2) == doctest::Approx(0.01));
    CHECK(cover_cost(CoverCounts{}, 0.01, 0.5, 2) == 0.0);
}

TEST_CASE("property: cost is strictly decreasing in s")
{
    for_all(50, 12, [](Gen& g) {
        const SetSpec spec = g.coin() ? SetSpec::concentric(2, g.uniform(0.2, 0.9)) : SetSpec::attenuated(1, g.uniform(0.2, 0.9));
        const double delta = std::ldexp(1.0, -g.integer(6, 20)), theta = g.uniform(0.2, 1);
        const auto c = build_cover_counts(spec, delta, theta, g.integer(1, 40));
        double prev = INFINITY;
        for (double s = 0.5; s <= 2.0; s += 0.1) {
            const double v = cover_cost(c, delta, theta, s);
            CHECK(v < prev);
            prev = v;
        }
    });
}

TEST_CASE("theorem covers decay above the formula and grow below it")
{
    struct Case {
        SetSpec spec;
        double theta;
    };
    for (const auto& [spec, theta] : {Case{SetSpec::concentric(2, 0.5), 0.5}, Case{SetSpec::concentric(3, 0.3), 0.6},
                                      Case{SetSpec::attenuated(1, 0.5), 0.5}, Case{SetSpec::product_sine(1), 0.7}}) {
        CAPTURE(family_name(spec.family));
        const double f = *formula_value(spec, theta);
        std::vector<double> up, down;
        for (double delta : ladder(10, 30)) {
            up.push_back(cover_cost(build_theorem_cover(spec, delta, theta, f + 0.05), delta, theta, f + 0.05));
            down.push_back(cover_cost(build_theorem_cover(spec, delta, theta, f - 0.05), delta, theta, f - 0.05));
        }
        // Small cutoffs on the sine graphs round unevenly from one scale to the next.
        const std::size_t stride = spec.family == Family::concentric ? 1 : 3;
        for (std::size_t i = stride; i < up.size(); ++i) {
            CHECK(up[i] < up[i - stride]);
            CHECK(down[i] > down[i - stride]);
        }
    }
}

TEST_CASE("grid covers")
{
    PointCloud one;
    one.d = 2;
    one.coords = {0.3, -0.2};
    const Cover c = enumerate_grid_cover(one, 1e-3, 0.5, 0.1);
    CHECK(c.elements.size() == 1);
    CHECK(window_ok(c));
    CHECK(covers(c, one));
}

TEST_CASE("grid cover of the unit circle matches the cell oracle")
{
    const double delta = std::ldexp(1.0, -8);
    const PointCloud cloud = circle_cloud(1.0, 200000);
    const Cover c = enumerate_grid_cover(cloud, delta, 1.0, 0.0);
    const double exact = static_cast<double>(testing_support::circle_cells(1.0, delta / std::sqrt(2.0)).size());
    CHECK(std::abs(static_cast<double>(c.elements.size()) - exact) <= 0.1 * exact);
    CHECK(window_ok(c));
    CHECK(covers(c, cloud));
}

TEST_CASE("grid cover of truncated concentric circles matches the cell oracle")
{
    const double delta = std::ldexp(1.0, -10), w = delta / std::sqrt(2.0);
    const PointCloud cloud = sample(SetSpec::concentric(2, 0.5), 40000, 0.1);
    const Cover c = enumerate_grid_cover(cloud, delta, 1.0, 0.0);
    std::set<std::pair<long, long>> cells;
    for (int n = 1; std::pow(n, -0.5) >= 0.1; ++n) testing_support::add_circle_cells(cells, std::pow(n, -0.5), w);
    const double exact = static_cast<double>(cells.size());
    CHECK(std::abs(static_cast<double>(c.elements.size()) - exact) <= 0.05 * exact);
}

TEST_CASE("property: grid covers respect the window and cover every point")
{
    for_all(40, 17, [](Gen& g) {
        SetSpec spec;
        switch (g.integer(0, 3)) {
        case 0: spec = SetSpec::concentric(2, g.uniform(0.3, 1.5)); break;
        case 1: spec = SetSpec::attenuated(g.uniform(0.5, 2), g.uniform(0.2, 2)); break;
        case 2: spec = SetSpec::concentric(3, g.uniform(0.3, 1.5)); break;
        default: spec = SetSpec::isolated(g.uniform(0.5, 2), CountRule::constant(g.integer(1, 6))); break;
        }
        const PointCloud cloud = sample(spec, spec.d > 2 ? 60 : 3000, g.uniform(0.02, 0.3));
        const double delta = std::ldexp(1.0, -g.integer(4, 10)), theta = g.uniform(0.1, 1);
        const Cover c = enumerate_grid_cover(cloud, delta, theta, g.uniform(0, 1));
        CHECK(window_ok(c));
        CHECK(covers(c, cloud));
    });
}

TEST_CASE("theta = 1 grid covers equal plain box counts")
{
    const PointCloud cloud = sample(SetSpec::attenuated(1, 0.5), 20000, 0.01);
    for (int k = 3; k <= 10; ++k) {
        const double delta = std::ldexp(1.0, -k);
        CHECK(static_cast<std::int64_t>(enumerate_grid_cover(cloud, delta, 1.0, 0.3).elements.size()) == count_boxes(cloud, delta));
    }
}

TEST_CASE("upper estimates from theorem covers")
{
    const auto c = upper_dim_estimate(SetSpec::concentric(2, 0.5), 1.0, ladder(10, 20));
    CHECK(c.extrapolated == doctest::Approx(4.0 / 3).epsilon(0.05 / (4.0 / 3)));
    CHECK(c.monotone);
    const auto f = upper_dim_estimate(SetSpec::fp(1), 1.0, ladder(10, 20));
    CHECK(std::abs(f.extrapolated - 0.5) <= 0.05);
    CHECK(f.monotone);
    for (const auto& r : c.rows) {
        CHECK(r.s_star >= 0.0);
        CHECK(r.s_star <= 2.0);
    }
    CHECK_THROWS_AS(upper_dim_estimate(SetSpec::fp(1), 1.0, ladder(10, 12)), std::invalid_argument);
}
