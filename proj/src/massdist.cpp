#include "idim/massdist.hpp"

#include "idim/errors.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace idim {

namespace {

constexpr double kPi = std::numbers::pi;

double norm(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// Integral of sin^n over [0, alpha]; one_minus_cos = 1 - cos(alpha).
double sin_power_integral(int n, double alpha, double one_minus_cos)
{
    if (n == 0) return alpha;
    if (n == 1) return one_minus_cos;
    const double sn = std::sin(alpha), cs = std::cos(alpha);
    return -std::pow(sn, n - 1) * cs / n + (n - 1.0) / n * sin_power_integral(n - 2, alpha, one_minus_cos);
}

// Half-angle of the cap of the sphere of radius R inside the ball, or -1 if
// none, or > pi when the whole sphere is inside. Returns sin^2(alpha/2) in h.
double cap_angle(double R, double D0, double rho, double& h)
{
    if (D0 <= 0.0) {
        h = R <= rho ? 1.0 : 0.0;
        return R <= rho ? 4.0 : -1.0;
    }
    if (rho >= R + D0) {
        h = 1.0;
        return 4.0;
    }
    if (rho < std::abs(R - D0)) {
        h = 0.0;
        return -1.0;
    }
    h = std::clamp((rho - (R - D0)) * (rho + (R - D0)) / (4.0 * R * D0), 0.0, 1.0);
    return 2.0 * std::asin(std::sqrt(h));
}

SetSpec arc_curve(const ArcSupport& a) { return a.q > 0.0 ? SetSpec::attenuated(a.p, a.q) : SetSpec::product_sine(a.p); }

// The speed is nearly |dy/dt| once dx/dt is small, so it has a sharp corner
// at each zero of dy/dt. There is one per unit interval, in (k, k + 1/2):
// the root of pi cos(pi t) - (pq/t) sin(pi t). Integrating between corners
// keeps the quadrature smooth.
double integrate_speed(const ArcSupport& arc, double a, double b)
{
    if (!(b > a)) return 0.0;
    const SetSpec curve = arc_curve(arc);
    auto f = [&](double t) { return curve_speed(curve, t); };
    const double pq = arc.p * arc.q;
    auto g = [&](double t) { return kPi * std::cos(kPi * t) - pq / t * std::sin(kPi * t); };
    std::vector<double> cuts{a};
    for (double k = std::floor(a); k < b; k += 1.0) {
        double t = k + 0.5;
        if (pq > 0.0) {
            boost::uintmax_t iters = 100;
            const auto r = boost::math::tools::toms748_solve(g, k, k + 0.5, boost::math::tools::eps_tolerance<double>(52), iters);
            t = 0.5 * (r.first + r.second);
        }
        if (t > a && t < b) cuts.push_back(t);
    }
    cuts.push_back(b);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 10, 1e-9);
    return sum;
}

using Runs = std::vector<std::pair<double, double>>;

void add_run(Runs& runs, double a, double b)
{
    if (!runs.empty() && runs.back().second == a) runs.back().second = b;
    else runs.emplace_back(a, b);
}

// Lipschitz subdivision: |gamma(t) - c| moves at most speed_bound(a) per unit t.
void clip(const SetSpec& curve, std::span<const double> c, double rho, double a, double b, double tmin, Runs& runs)
{
    const double m = 0.5 * (a + b);
    const auto g = curve_point(curve, m);
    const double dm = std::hypot(g[0] - c[0], g[1] - c[1]);
    const double h = curve_speed_bound(curve, a) * 0.5 * (b - a);
    if (dm - h > rho) return;
    if (dm + h <= rho || (b - a < tmin && dm <= rho)) {
        add_run(runs, a, b);
        return;
    }
    if (b - a < tmin) return;
    clip(curve, c, rho, a, m, tmin, runs);
    clip(curve, c, rho, m, b, tmin, runs);
}

double box_distance(std::span<const double> c, const std::vector<double>& lo, const std::vector<double>& hi)
{
    double s = 0.0;
    for (std::size_t k = 0; k < lo.size(); ++k) {
        const double v = c[k] < lo[k] ? lo[k] - c[k] : (c[k] > hi[k] ? c[k] - hi[k] : 0.0);
        s += v * v;
    }
    return std::sqrt(s);
}

void arc_box(const ArcSupport& a, std::vector<double>& lo, std::vector<double>& hi)
{
    const double amp = std::pow(a.t0, -a.p * a.q);
    lo = {std::pow(a.t1, -a.p), -amp};
    hi = {std::pow(a.t0, -a.p), amp};
}

double ring_share(const RingSupport& r, std::span<const double> c, double rho)
{
    double h;
    const double D0 = norm(c);
    const double alpha = cap_angle(r.radius, D0, rho, h);
    if (alpha < 0.0) return 0.0;
    if (alpha >= kPi) return 1.0;
    const double k = static_cast<double>(r.count);
    const double phi = std::atan2(c[1], c[0]);
    const double lo = (phi - alpha) * k / (2.0 * kPi), hi = (phi + alpha) * k / (2.0 * kPi);
    const double n = std::floor(hi) - std::ceil(lo) + 1.0;
    return std::clamp(n, 0.0, k) / k;
}

void check_theta(double theta)
{
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
}

} // namespace

double DiscreteMeasure::total_mass() const
{
    double m = 0.0;
    for (const auto& a : atoms) m += a.mass;
    return m * scale_factor;
}

double sphere_area_constant(int d)
{
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double sphere_fraction_in_ball(int d, double R, std::span<const double> c, double rho)
{
    double h;
    const double alpha = cap_angle(R, norm(c), rho, h);
    if (alpha < 0.0) return 0.0;
    if (alpha > kPi) return 1.0;
    const int n = d - 2;
    return std::clamp(sin_power_integral(n, alpha, 2.0 * h) / sin_power_integral(n, kPi, 2.0), 0.0, 1.0);
}

double arc_length(const ArcSupport& arc) { return integrate_speed(arc, arc.t0, arc.t1); }

double arc_length_in_ball(const ArcSupport& arc, std::span<const double> c, double rho)
{
    std::vector<double> lo, hi;
    arc_box(arc, lo, hi);
    if (box_distance(c, lo, hi) > rho) return 0.0;
    const SetSpec curve = arc_curve(arc);
    Runs runs;
    clip(curve, c, rho, arc.t0, arc.t1, 1e-12 * (arc.t1 - arc.t0), runs);
    if (runs.size() == 1 && runs[0].first == arc.t0 && runs[0].second == arc.t1 && arc.length > 0.0) return arc.length;
    if (runs.size() == 1 && runs[0].first == arc.t0 && runs[0].second == arc.t1 && arc.length > 0.0) return arc.length;
    double len = 0.0;
    for (const auto& [a, b] : runs) len += integrate_speed(arc, a, b);
    return len;
}

double measure_of(const DiscreteMeasure& mu, const TestSet& u)
{
    if (static_cast<int>(u.center.size()) != mu.d) throw std::invalid_argument("test set dimension mismatch");
    const double rho = 0.5 * u.diameter;
    const std::span<const double> c(u.center);
    double sum = 0.0;
    for (const auto& atom : mu.atoms) {
        if (atom.mass == 0.0) continue;
        double share = 0.0;
        if (const auto* sp = std::get_if<SphereSupport>(&atom.support)) {
            share = sphere_fraction_in_ball(sp->d, sp->radius, c, rho);
        } else if (const auto* ar = std::get_if<ArcSupport>(&atom.support)) {
            const double len = arc_length_in_ball(*ar, c, rho);
            share = len > 0.0 ? len / (ar->length > 0.0 ? ar->length : arc_length(*ar)) : 0.0;
        } else if (const auto* pt = std::get_if<PointSupport>(&atom.support)) {
            double r2 = 0.0;
            for (std::size_t k = 0; k < pt->x.size(); ++k) r2 += (pt->x[k] - c[k]) * (pt->x[k] - c[k]);
            share = r2 <= rho * rho ? 1.0 : 0.0;
        } else {
            share = ring_share(std::get<RingSupport>(atom.support), c, rho);
        }
        sum += atom.mass * share;
    }
    return sum * mu.scale_factor;
}

double concentric_delta0(int d, double p, double theta, double s)
{
    const double a = 1.0 - (1.0 - theta) * (d - s);
    const double b = 1.0 - p * (d - 1.0);
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("measure needs p < 1/(d-1) and s above d - 1/(1-theta)");
    return std::exp2(-(1.0 + p) / (a * b));
}

DiscreteMeasure build_mu_concentric(int d, double p, double theta, double s, double delta)
{
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    if (!(p > 0.0 && p * (d - 1.0) < 1.0)) throw std::invalid_argument("measure needs 0 < p < 1/(d-1)");
    check_theta(theta);
    const double d0 = concentric_delta0(d, p, theta, s);
    if (!(delta > 0.0 && delta < d0)) throw ThresholdError("delta must be below " + std::to_string(d0), d0);
    const double M = std::ceil(std::pow(delta, -(1.0 - (1.0 - theta) * (d - s)) / (1.0 + p)));
    if (M > 1.0e7) throw ResourceError("too many spheres in the measure");
    const double eta = sphere_area_constant(d);
    DiscreteMeasure mu;
    mu.d = d;
    mu.scale_factor = std::pow(delta, s - (d - 1.0));
    for (std::int64_t i = 1; i <= static_cast<std::int64_t>(M); ++i) {
        const double r = std::pow(static_cast<double>(i), -p);
        mu.atoms.push_back({SphereSupport{r, d}, eta * std::pow(r, d - 1.0)});
    }
    return mu;
}

DiscreteMeasure build_lambda_lift(const DiscreteMeasure& radii, int d)
{
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    if (radii.d != 1) throw std::invalid_argument("lift needs a measure on the line");
    DiscreteMeasure out;
    out.d = d;
    out.scale_factor = radii.scale_factor;
    for (const auto& a : radii.atoms) {
        const auto* pt = std::get_if<PointSupport>(&a.support);
        if (!pt || pt->x.size() != 1) throw std::invalid_argument("lift needs point atoms");
        if (!(pt->x[0] > 0.0)) throw std::invalid_argument("lift needs atoms at positive radii");
        out.atoms.push_back({SphereSupport{pt->x[0], d}, a.mass});
    }
    return out;
}

double points_delta_gamma(double p, double theta)
{
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    check_theta(theta);
    const double g = theta / (4.0 * p);
    // With u = log(1/delta): h(u) = e^{g u} log 2 - u/2, convex, h(0) > 0.
    auto h = [&](double u) { return std::exp(g * u) * std::log(2.0) - 0.5 * u; };
    const double um = std::log(1.0 / (2.0 * g * std::log(2.0))) / g;
    if (um <= 0.0 || h(um) >= 0.0) return 1.0;
    double lo = um, hi = 2.0 * um;
    while (h(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    return std::exp(-hi);
}

DiscreteMeasure build_mu_points_example(double p, double theta, double delta)
{
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    check_theta(theta);
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    const double g = theta / (4.0 * p);
    const double lhs = std::pow(delta, -g) * std::log(2.0), rhs = 0.5 * std::log(1.0 / delta);
    if (lhs < rhs * (1.0 - 1e-12)) {
        const double dg = points_delta_gamma(p, theta);
        throw ThresholdError("delta must be at most " + std::to_string(dg), dg);
    }
    const double M = std::ceil(std::pow(delta, -g));
    if (M > 62.0) throw ResourceError("2^M points do not fit");
    DiscreteMeasure mu;
    mu.d = 2;
    const auto m = static_cast<std::int64_t>(M);
    mu.atoms.push_back({RingSupport{std::pow(M, -p), std::int64_t{1} << m}, 1.0});
    return mu;
}

double sine_delta_threshold(double p, double q, double theta, double s)
{
    const double e = s - theta * s + 2.0 * theta - 1.0;
    if (!(e > 0.0)) throw std::invalid_argument("s - theta s + 2 theta - 1 must be positive");
    if (!(p * q < 1.0)) throw std::invalid_argument("measure needs pq < 1");
    return std::pow(4.0, -(1.0 + p) / (e * (1.0 - p * q)));
}

DiscreteMeasure build_mu_sine(double p, double q, double theta, double s, double delta)
{
    if (!(p > 0.0 && q >= 0.0)) throw std::invalid_argument("need p > 0 and q >= 0");
    check_theta(theta);
    const double thr = sine_delta_threshold(p, q, theta, s);
    if (!(delta > 0.0 && delta < thr)) throw ThresholdError("delta must be below " + std::to_string(thr), thr);
    const double e = s - theta * s + 2.0 * theta - 1.0;
    const double M = std::ceil(std::pow(delta, -e / (1.0 + p)));
    if (M > 1.0e6) throw ResourceError("too many arcs in the measure");
    DiscreteMeasure mu;
    mu.d = 2;
    mu.scale_factor = std::pow(delta, s - 1.0);
    for (std::int64_t i = 1; i + 1 <= static_cast<std::int64_t>(M); ++i) {
        ArcSupport arc{p, q, static_cast<double>(i), static_cast<double>(i + 1)};
        arc.length = arc_length(arc);
        mu.atoms.push_back({arc, arc.length});
    }
    return mu;
}

FrostmanResult greedy_frostman(const RadiusSequence& radii, double s, double cutoff)
{
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("s must lie in (0, 1]");
    if (!(cutoff > 0.0 && cutoff < 1.0)) throw std::invalid_argument("cutoff must lie in (0, 1)");
    const std::int64_t n = first_index_at_most(radii, cutoff) - 1;
    if (n < 1) throw std::invalid_argument("no radii above the cutoff");
    if (n > 10'000'000) throw ResourceError("too many radii above the cutoff");

    std::vector<double> x(static_cast<std::size_t>(n)), m(static_cast<std::size_t>(n));
    double total = 0.0;
    for (std::int64_t i = 1; i <= n; ++i) {
        const double a = radius_term(radii, i);
        const bool last = radii.size() > 0 && i == radii.size();
        const double gap = last ? a - cutoff : a - radius_term(radii, i + 1);
        x[i - 1] = a;
        m[i - 1] = std::min(1.0, std::pow(gap, s));
        total += m[i - 1];
    }
    FrostmanResult out;
    out.measure.d = 1;
    for (std::size_t i = 0; i < x.size(); ++i) out.measure.atoms.push_back({PointSupport{{x[i]}}, m[i] / total});

    // Sup of mu([y, y + r]) / r^s over windows starting at atoms.
    std::vector<double> xs(x.rbegin(), x.rend()), pre{0.0};
    for (auto it = m.rbegin(); it != m.rend(); ++it) pre.push_back(pre.back() + *it / total);
    double c = 0.0;
    for (int k = 0; k <= 60; ++k) {
        const double r = std::ldexp(1.0, -k);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const auto j = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), xs[i] + r) - xs.begin());
            c = std::max(c, (pre[j] - pre[i]) / std::pow(r, s));
        }
    }
    out.constant = c;
    return out;
}

MeasureFamily concentric_family(int d, double p, double theta, double s, double cap_slack, double floor_slack)
{
    const double eta = sphere_area_constant(d);
    MeasureFamily f;
    f.name = "concentric";
    f.build = [=](double delta) { return build_mu_concentric(d, p, theta, s, delta); };
    f.cap = (std::pow(2.0, 1.0 + p) / p + 1.0) * eta * cap_slack;
    f.floor = eta / (2.0 * (1.0 - p * (d - 1.0))) * floor_slack;
    return f;
}

MeasureFamily points_family(double p, double theta, double cap_slack, double floor_slack)
{
    MeasureFamily f;
    f.name = "isolated";
    f.build = [=](double delta) { return build_mu_points_example(p, theta, delta); };
    f.cap = (std::pow(2.0, p) + 1.0) * cap_slack;
    f.floor = floor_slack;
    return f;
}

MeasureFamily sine_family(double p, double q, double theta, double s, double cap_slack, double floor_slack)
{
    MeasureFamily f;
    f.name = "attenuated";
    f.build = [=](double delta) { return build_mu_sine(p, q, theta, s, delta); };
    f.cap = 3.0 * (std::pow(2.0, 1.0 + p) / p + 2.0) * cap_slack;
    f.floor = 1.0 / (2.0 * (1.0 - p * q)) * floor_slack;
    return f;
}

std::vector<TestSet> test_sets(const DiscreteMeasure& mu, double delta, double theta, std::int64_t samples)
{
    const int d = mu.d;
    const double big = std::pow(delta, theta);
    const std::vector<double> diams = theta == 1.0 ? std::vector<double>{delta}
                                                   : std::vector<double>{delta, std::sqrt(delta * big), big};
    std::vector<TestSet> out;
    const auto budget = static_cast<std::size_t>(samples / 2);
    auto push = [&](std::vector<double> c, double D) {
        if (out.size() < budget) out.push_back({std::move(c), D});
    };
    auto axis = [&](double r) {
        std::vector<double> c(static_cast<std::size_t>(d), 0.0);
        c[0] = r;
        return c;
    };

    for (double D : diams) push(std::vector<double>(static_cast<std::size_t>(d), 0.0), D);

    // Up to 64 atoms: the first 16, the last 32 and an even spread between.
    const std::size_t n = mu.atoms.size();
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i)
        if (n <= 64 || i < 16 || i + 32 >= n || i % std::max<std::size_t>(1, n / 16) == 0) pick.push_back(i);

    for (std::size_t i : pick) {
        const auto& sup = mu.atoms[i].support;
        for (double D : diams) {
            if (const auto* sp = std::get_if<SphereSupport>(&sup)) {
                const double R = sp->radius;
                push(axis(R), D);
                push(axis(R - 0.5 * D), D);
                push(axis(R + 0.5 * D), D);
                if (i + 1 < n)
                    if (const auto* nx = std::get_if<SphereSupport>(&mu.atoms[i + 1].support)) push(axis(0.5 * (R + nx->radius)), D);
            } else if (const auto* rg = std::get_if<RingSupport>(&sup)) {
                const double R = rg->radius, step = 2.0 * kPi / static_cast<double>(rg->count);
                push(axis(R), D);
                push(axis(R - 0.5 * D), D);
                push({R * std::cos(0.5 * step), R * std::sin(0.5 * step)}, D);
                push({R * std::cos(step), R * std::sin(step)}, D);
            } else if (const auto* ar = std::get_if<ArcSupport>(&sup)) {
                const SetSpec curve = arc_curve(*ar);
                for (double t : {ar->t0, ar->t0 + 0.25 * (ar->t1 - ar->t0), 0.5 * (ar->t0 + ar->t1)}) {
                    const auto g = curve_point(curve, t);
                    push({g[0], g[1]}, D);
                }
            } else if (const auto* pt = std::get_if<PointSupport>(&sup)) {
                push(pt->x, D);
            }
        }
    }

    // Bounding box of the supports.
    std::vector<double> lo(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
    for (const auto& a : mu.atoms) {
        std::vector<double> l, h;
        if (const auto* sp = std::get_if<SphereSupport>(&a.support)) {
            l.assign(static_cast<std::size_t>(d), -sp->radius);
            h.assign(static_cast<std::size_t>(d), sp->radius);
        } else if (const auto* rg = std::get_if<RingSupport>(&a.support)) {
            l.assign(2, -rg->radius);
            h.assign(2, rg->radius);
        } else if (const auto* ar = std::get_if<ArcSupport>(&a.support)) {
            arc_box(*ar, l, h);
        } else {
            l = h = std::get<PointSupport>(a.support).x;
        }
        for (int k = 0; k < d; ++k) {
            lo[k] = std::min(lo[k], l[k] - 0.5 * big);
            hi[k] = std::max(hi[k], h[k] + 0.5 * big);
        }
    }

    boost::random::sobol gen(static_cast<std::size_t>(d + 1));
    auto unit = [&] { return std::ldexp(static_cast<double>(gen()), -64); };
    const double ld = std::log(delta), lb = std::log(big);
    while (static_cast<std::int64_t>(out.size()) < samples) {
        std::vector<double> c(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) c[k] = lo[k] + unit() * (hi[k] - lo[k]);
        const double u = unit();
        const double D = theta == 1.0 ? delta : std::clamp(std::exp(ld + u * (lb - ld)), delta, big);
        out.push_back({std::move(c), D});
    }
    return out;
}

LowerBoundCertificate verify_mass_distribution(const MeasureFamily& family, double s, double theta,
                                               const std::vector<double>& deltas, std::int64_t samples)
{
    if (samples < 1000) throw std::invalid_argument("at least 1000 samples are needed");
    check_theta(theta);
    if (deltas.empty()) throw std::invalid_argument("no deltas");
    LowerBoundCertificate cert;
    cert.s = s;
    cert.theta = theta;
    cert.floor = family.floor;
    cert.cap = family.cap;
    cert.total_mass_min = std::numeric_limits<double>::infinity();
    for (double delta : deltas) {
        DiscreteMeasure mu;
        try {
            mu = family.build(delta);
        } catch (const ThresholdError&) {
            cert.skipped.push_back(delta);
            continue;
        }
        const double total = mu.total_mass();
        if (mu.atoms.empty() || !(total > 0.0)) throw std::invalid_argument("empty measure");
        CertificateRow row;
        row.delta = delta;
        row.total_mass = total;
        for (const auto& u : test_sets(mu, delta, theta, samples)) {
            row.ratio_max = std::max(row.ratio_max, measure_of(mu, u) / std::pow(u.diameter, s));
            ++row.samples;
        }
        row.supported = total >= family.floor && row.ratio_max <= family.cap;
        cert.delta_range.push_back(delta);
        cert.total_mass_min = std::min(cert.total_mass_min, total);
        cert.ratio_max = std::max(cert.ratio_max, row.ratio_max);
        cert.samples += row.samples;
        cert.rows.push_back(row);
    }
    if (cert.rows.empty()) cert.total_mass_min = 0.0;
    cert.supported = !cert.rows.empty() && cert.total_mass_min >= cert.floor && cert.ratio_max <= cert.cap;
    return cert;
}

} // namespace idim
