// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "idim/boxcount.hpp"
#include "idim/covergen.hpp"
#include "idim/formula.hpp"
#include "idim/massdist.hpp"

#include "support.hpp"

#include <boost/rational.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace idim;
using testing_support::Gen;

namespace {

using Clock = std::chrono::steady_clock;

std::vector<double> ladder(int from, int to)
{
    std::vector<double> out;
    for (int k = from; k <= to; ++k) out.push_back(std::ldexp(1.0, -k));
    return out;
}

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int n, double limit_s, const std::function<Outcome()>& body)
{
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = dt < limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("criterion %d: %s (%.2f s of %.0f s) %s%s\n", n, pass ? "PASS" : "FAIL", dt, limit_s, o.detail.c_str(),
                in_time ? "" : " [over time]");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

} // namespace

int main()
{
    criterion(1, 1, [] {
        using Q = boost::rational<long long>;
        double worst = 0;
        for (int k = 0; k <= 4; ++k) {
            const Q th(k, 4);
            const Q v = (1 + th) / (1 + th / 2);
            const double exact = static_cast<double>(v.numerator()) / static_cast<double>(v.denominator());
            worst = std::max(worst, std::abs(dim_concentric(2, 0.5, static_cast<double>(k) / 4) - exact));
        }
        bool flat = true;
        Gen g(1);
        for (int i = 0; i < 2000; ++i) {
            const int d = g.integer(2, 8);
            const double p = (1.0 / (d - 1)) * g.uniform(1, 5);
            flat = flat && dim_concentric(d, p, g.theta()) == d - 1.0;
        }
        return Outcome{worst <= 1e-12 && flat, fmt("max error %.3g vs exact rationals; d-1 branch ", worst) + (flat ? "exact" : "broken")};
    });

    criterion(2, 1, [] {
        Gen g(2);
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            const double p = g.log_uniform(0.05, 5), q = p * g.uniform(1, 4), th = g.theta();
            const int d = g.integer(2, 8);
            worst = std::max(worst, std::abs((dim_concentric(d, p, th) - (d - 1)) - (dim_attenuated(p, d - 1, th) - 1)));
            worst = std::max(worst, std::abs(dim_elliptical(p, q, th) - dim_attenuated(q, p / q, th)));
        }
        return Outcome{worst <= 1e-10, fmt("1000 draws, max deviation %.3g", worst)};
    });

    criterion(3, 120, [] {
        const auto r = estimate_dimension(SetSpec::concentric(2, 0.5), 1.0, ladder(8, 18), 100000000);
        return Outcome{std::abs(r.extrapolated - 4.0 / 3) <= 0.08, fmt("extrapolated %.4f, target 4/3, rmse %.4f", r.extrapolated, r.fit.rmse)};
    });

    criterion(4, 60, [] {
        bool ok = true;
        std::string detail;
        for (double th : {0.25, 0.5, 1.0}) {
            const auto r = estimate_dimension(SetSpec::fp(1), th, ladder(8, 20), 10000000);
            ok = ok && std::abs(r.extrapolated - th / (1 + th)) <= 0.05;
            detail += fmt("theta %.2f: %.4f vs %.4f; ", th, r.extrapolated, th / (1 + th));
        }
        return Outcome{ok, detail};
    });

    criterion(5, 1, [] {
        const SetSpec spec = SetSpec::concentric(2, 0.5);
        const double f = dim_concentric(2, 0.5, 0.5);
        std::vector<double> up, down;
        for (double delta : ladder(10, 30)) {
            up.push_back(cover_cost(build_theorem_cover(spec, delta, 0.5, f + 0.05), delta, 0.5, f + 0.05));
            down.push_back(cover_cost(build_theorem_cover(spec, delta, 0.5, f - 0.05), delta, 0.5, f - 0.05));
        }
        bool dec = true, inc = true;
        for (std::size_t i = 1; i < up.size(); ++i) {
            dec = dec && up[i] < up[i - 1];
            inc = inc && down[i] > down[i - 1];
        }
        const bool small = up.back() < 1e-3;
        return Outcome{dec && inc && small, fmt("s+0.05 cost %.4g -> %.4g, s-0.05 cost %.4g -> ", up.front(), up.back(), down.front()) +
                                                 fmt("%.4g; decreasing ", down.back()) + (dec ? "yes" : "no") + ", increasing " +
                                                 (inc ? "yes" : "no") + ", below 1e-3 " + (small ? "yes" : "no")};
    });

    criterion(6, 120, [] {
        const double s = dim_concentric(2, 0.5, 0.5);
        const double eta = sphere_area_constant(2);
        const auto fam = concentric_family(2, 0.5, 0.5, s);
        const bool constants = fam.cap <= (std::pow(2, 1.5) / 0.5 + 1) * eta * 1.1 * (1 + 1e-12) &&
                               fam.floor >= eta / (2 * (1 - 0.5)) * 0.99 * (1 - 1e-12);
        const auto ok = verify_mass_distribution(fam, s, 0.5, ladder(10, 20), 10000);
        const auto bad = verify_mass_distribution(concentric_family(2, 0.5, 0.5, s + 0.2), s + 0.2, 0.5, ladder(10, 20), 10000);
        return Outcome{constants && ok.supported && !bad.supported,
                       fmt("s=%.4f: ", s) + ok.verdict() + fmt(", ratio_max %.3f, cap %.3f", ok.ratio_max, ok.cap) +
                           fmt(", total %.3f, floor %.3f; s+0.2: ", ok.total_mass_min, ok.floor) + bad.verdict() +
                           fmt(" (total %.3f)", bad.total_mass_min)};
    });

    criterion(7, 120, [] {
        const auto fam = points_family(1, 1);
        const auto c = verify_mass_distribution(fam, 0.5, 1, ladder(8, 16), 10000);
        const bool ok = c.supported && c.skipped.empty() && fam.cap <= (2 + 1) * 1.1 * (1 + 1e-12) && c.rows.size() == 9;
        return Outcome{ok, "s=0.5 over 2^-8..2^-16: " + c.verdict() + fmt(", ratio_max %.4f, cap %.2f, total %.3f", c.ratio_max, c.cap, c.total_mass_min)};
    });

    criterion(8, 120, [] {
        const auto a = estimate_dimension(SetSpec::attenuated(1, 0.5), 1.0, ladder(8, 18), 100000000);
        const auto b = estimate_dimension(SetSpec::attenuated(1, 2), 0.5, ladder(8, 18), 100000000);
        const bool ok = std::abs(a.extrapolated - 1.25) <= 0.08 && std::abs(b.extrapolated - 1.0) <= 0.05;
        return Outcome{ok, fmt("T(1,0.5) theta 1: %.4f vs 1.25; T(1,2) theta 0.5: %.4f vs 1", a.extrapolated, b.extrapolated)};
    });

    criterion(9, 300, [] {
        Gen g(9);
        const auto grid = ThetaGrid::uniform(101).values();
        bool mono = true;
        for (int i = 0; i < 200; ++i) {
            const double p = g.log_uniform(0.05, 5), q = g.log_uniform(0.05, 5), qe = p * g.uniform(1, 3);
            const int d = g.integer(2, 6);
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
                for (std::size_t k = 1; k < grid.size(); ++k) mono = mono && f(grid[k]) >= f(grid[k - 1]);
        }

        bool exact = true;
        for (int i = 0; i < 30; ++i) {
            SetSpec spec;
            switch (i % 3) {
            case 0: spec = SetSpec::concentric(2, g.uniform(0.3, 1.5)); break;
            case 1: spec = SetSpec::attenuated(g.uniform(0.5, 2), g.uniform(0.2, 2)); break;
            default: spec = SetSpec::isolated(g.uniform(0.5, 2), CountRule::constant(g.integer(1, 6))); break;
            }
            const PointCloud cloud = sample(spec, 3000, g.uniform(0.02, 0.3));
            const Cover c = enumerate_grid_cover(cloud, std::ldexp(1.0, -g.integer(4, 10)), g.uniform(0.1, 1), g.uniform(0, 1));
            exact = exact && window_ok(c) && covers(c, cloud);
        }

        const double scale = std::ldexp(1.0, -6);
        const PointCloud circle = sample(SetSpec::concentric(2, RadiusSequence::table({1.0})), 100000, 1.0);
        const auto oracle = static_cast<std::int64_t>(testing_support::circle_cells(1.0, scale / std::sqrt(2.0)).size());
        const auto n = count_boxes(circle, scale);
        const bool cells = std::llabs(n - oracle) <= 2;
        return Outcome{mono && exact && cells, std::string("theta monotonicity ") + (mono ? "holds" : "broken") + ", cover certificates " +
                                                  (exact ? "exact" : "broken") + fmt(", circle cells %.0f vs oracle %.0f", static_cast<double>(n), static_cast<double>(oracle))};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
