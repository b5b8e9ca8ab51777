#ifndef IDIM_TESTS_SUPPORT_HPP
#define IDIM_TESTS_SUPPORT_HPP

// Generators for property tests and geometric oracles written independently
// of the library code they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace testing_support {

inline constexpr double kPi = std::numbers::pi;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
    bool coin() { return integer(0, 1) == 1; }
    double normal() { return std::normal_distribution<double>()(rng_); }
    // theta in [0, 1] with the endpoints drawn often.
    double theta()
    {
        const int k = integer(0, 9);
        if (k == 0) return 0.0;
        if (k == 1) return 1.0;
        return uniform(0.0, 1.0);
    }

private:
    std::mt19937_64 rng_;
};

template <class F>
void for_all(int cases, std::uint64_t seed, F&& body)
{
    Gen g(seed);
    for (int i = 0; i < cases; ++i) body(g);
}

// Cells [i w, (i+1) w) x [j w, (j+1) w) met by the circle |x| = R. Within
// column i the circle's upper arc spans y in [sqrt(R^2 - xf^2), sqrt(R^2 - xn^2)]
// with xn, xf the nearest and farthest |x| in the column; the lower arc mirrors it.
inline void add_circle_cells(std::set<std::pair<long, long>>& out, double R, double w)
{
    const long n = static_cast<long>(std::ceil(R / w)) + 1;
    for (long i = -n; i <= n; ++i) {
        const double x0 = i * w, x1 = (i + 1) * w;
        const double xn = x0 > 0 ? x0 : (x1 < 0 ? -x1 : 0.0);
        if (xn > R) continue;
        const double xf = std::min(std::max(std::abs(x0), std::abs(x1)), R);
        const double ylo = std::sqrt(std::max(0.0, R * R - xf * xf)), yhi = std::sqrt(R * R - xn * xn);
        for (long j = static_cast<long>(std::floor(ylo / w)); j <= static_cast<long>(std::floor(yhi / w)); ++j) out.insert({i, j});
        for (long j = static_cast<long>(std::floor(-yhi / w)); j <= static_cast<long>(std::floor(-ylo / w)); ++j) out.insert({i, j});
    }
}

inline std::set<std::pair<long, long>> circle_cells(double R, double w)
{
    std::set<std::pair<long, long>> out;
    add_circle_cells(out, R, w);
    return out;
}

// Share of the circle |x| = R inside the closed disc of radius rho about c,
// by the law of cosines.
inline double circle_share(double R, double cx, double cy, double rho)
{
    const double D = std::hypot(cx, cy);
    if (D == 0.0) return R <= rho ? 1.0 : 0.0;
    const double c = (R * R + D * D - rho * rho) / (2.0 * R * D);
    if (c <= -1.0) return 1.0;
    if (c >= 1.0) return 0.0;
    return std::acos(c) / kPi;
}

// Length of a polyline inside a closed disc, clipping each segment exactly.
inline double polyline_length_in_disc(const std::vector<std::array<double, 2>>& pts, double cx, double cy, double rho)
{
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double ax = pts[k][0] - cx, ay = pts[k][1] - cy;
        const double dx = pts[k + 1][0] - pts[k][0], dy = pts[k + 1][1] - pts[k][1];
        const double a = dx * dx + dy * dy, b = 2 * (ax * dx + ay * dy), c = ax * ax + ay * ay - rho * rho;
        const double disc = b * b - 4 * a * c;
        if (a == 0.0 || disc <= 0.0) continue;
        const double t0 = std::max(0.0, (-b - std::sqrt(disc)) / (2 * a));
        const double t1 = std::min(1.0, (-b + std::sqrt(disc)) / (2 * a));
        if (t1 > t0) len += (t1 - t0) * std::sqrt(a);
    }
    return len;
}

} // namespace testing_support

#endif // IDIM_TESTS_SUPPORT_HPP
