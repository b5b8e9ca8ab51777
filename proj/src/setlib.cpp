#include "idim/setlib.hpp"

#include "idim/errors.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace idim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kIndexCap = std::int64_t{1} << 52;
constexpr std::size_t kMaxSampleCoords = std::size_t{120'000'000};
constexpr std::size_t kChunk = 4096;

double ipow(std::int64_t n, double e) { return std::pow(static_cast<double>(n), e); }

bool term_in(const RadiusSequence& seq, std::int64_t i, double lo, double hi)
{
    if (i < 1 || (seq.size() > 0 && i > seq.size())) return false;
    const double a = radius_term(seq, i);
    return a > lo && a <= hi;
}

// Does some a_i lie in (lo, hi]?
bool interval_hit(const RadiusSequence& seq, double lo, double hi)
{
    if (!(hi > lo)) return false;
    switch (seq.kind) {
    case RadiusKind::table:
        return std::any_of(seq.values.begin(), seq.values.end(), [&](double a) { return a > lo && a <= hi; });
    case RadiusKind::logarithmic: {
        // 1/log(m) in (lo, hi] iff m in [e^{1/hi}, e^{1/lo}), m = i + 1 >= 2.
        const double A = 1.0 / hi;
        const double B = 1.0 / lo;
        if (A > 30.0) return B > A;
        const double m0 = std::max(2.0, std::ceil(std::exp(A)));
        const auto i0 = static_cast<std::int64_t>(m0) - 1;
        for (std::int64_t i = std::max<std::int64_t>(1, i0 - 1); i <= i0 + 1; ++i)
            if (term_in(seq, i, lo, hi)) return true;
        return false;
    }
    case RadiusKind::power:
    case RadiusKind::geometric: {
        // a_i in (lo, hi] iff i in [L, U).
        double L, U;
        if (seq.kind == RadiusKind::power) {
            L = std::pow(hi, -1.0 / seq.param);
            U = std::pow(lo, -1.0 / seq.param);
        } else {
            const double lq = std::log(seq.param);
            L = std::log(1.0 / hi) / lq;
            U = std::log(1.0 / lo) / lq;
        }
        const double c = std::max(1.0, std::ceil(L));
        if (c >= 9.0e15) return c < U;
        const auto i0 = static_cast<std::int64_t>(c);
        for (std::int64_t i = std::max<std::int64_t>(1, i0 - 1); i <= i0 + 1; ++i)
            if (term_in(seq, i, lo, hi)) return true;
        return false;
    }
    }
    return false;
}

// Exponential then binary search for the first i >= 1 with pred(i).
template <class Pred>
std::int64_t first_true(Pred pred)
{
    std::int64_t hi = 1;
    while (!pred(hi)) {
        if (hi >= kIndexCap) return kIndexCap;
        hi *= 2;
    }
    std::int64_t lo = hi / 2; // pred(lo) false unless lo == 0
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (pred(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

struct Curve {
    double p, q;
    bool graph; // (t^-p, t^-pq sin) when true, spiral (t^-p sin, t^-q cos) otherwise
    bool product;

    void at(double t, double& x, double& y) const
    {
        const double s = std::sin(kPi * t);
        if (graph) {
            x = std::pow(t, -p);
            y = product ? s : std::pow(t, -p * q) * s;
        } else {
            x = std::pow(t, -p) * s;
            y = std::pow(t, -q) * std::cos(kPi * t);
        }
    }

    double speed(double t) const
    {
        const double sn = std::sin(kPi * t), cs = std::cos(kPi * t);
        double dx, dy;
        if (graph) {
            dx = -p * std::pow(t, -p - 1.0);
            dy = product ? kPi * cs : -p * q * std::pow(t, -p * q - 1.0) * sn + kPi * std::pow(t, -p * q) * cs;
        } else {
            dx = -p * std::pow(t, -p - 1.0) * sn + kPi * std::pow(t, -p) * cs;
            dy = -q * std::pow(t, -q - 1.0) * cs - kPi * std::pow(t, -q) * sn;
        }
        return std::hypot(dx, dy);
    }

    // Upper bound of |gamma'(t)| on [t, infinity).
    double speed_bound(double t) const
    {
        if (graph) {
            if (product) return p * std::pow(t, -p - 1.0) + kPi;
            return p * std::pow(t, -p - 1.0) + p * q * std::pow(t, -p * q - 1.0) + kPi * std::pow(t, -p * q);
        }
        return p * std::pow(t, -p - 1.0) + kPi * std::pow(t, -p) + q * std::pow(t, -q - 1.0) + kPi * std::pow(t, -q);
    }
};

Curve curve_of(const SetSpec& s)
{
    switch (s.family) {
    case Family::spiral: return {s.p, s.p, false, false};
    case Family::elliptical: return {s.p, s.q, false, false};
    case Family::product_sine: return {s.p, 0.0, true, true};
    case Family::attenuated: return {s.p, s.q, true, false};
    default: throw std::invalid_argument("not a parametric curve family");
    }
}

bool is_curve(Family f)
{
    return f == Family::spiral || f == Family::elliptical || f == Family::product_sine || f == Family::attenuated;
}

class Chunker {
public:
    Chunker(int d, const PointSink& sink) : d_(d), sink_(sink), buf_(kChunk * static_cast<std::size_t>(d)) {}
    double* next()
    {
        if (used_ == buf_.size()) flush();
        double* x = buf_.data() + used_;
        used_ += static_cast<std::size_t>(d_);
        return x;
    }
    void flush()
    {
        if (used_ > 0) sink_(std::span<const double>(buf_.data(), used_));
        used_ = 0;
    }

private:
    int d_;
    const PointSink& sink_;
    std::vector<double> buf_;
    std::size_t used_ = 0;
};

void emit_circle(Chunker& out, double R, std::int64_t n)
{
    // Rotation recurrence, resynchronised every 256 steps.
    const double step = 2.0 * kPi / static_cast<double>(n);
    const double cs = std::cos(step), sn = std::sin(step);
    double c = 1.0, s = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        if ((k & 255) == 0) {
            const double a = step * static_cast<double>(k);
            c = std::cos(a);
            s = std::sin(a);
        }
        double* x = out.next();
        x[0] = R * c;
        x[1] = R * s;
        const double c2 = c * cs - s * sn;
        s = s * cs + c * sn;
        c = c2;
    }
}

// Points of the sphere of radius R in R^k, written into coordinates [off, off + k).
void emit_sphere(Chunker& out, int d, int k, int off, std::vector<double>& prefix, double R, double step)
{
    if (R <= 0.0) {
        double* x = out.next();
        std::copy(prefix.begin(), prefix.begin() + off, x);
        std::fill(x + off, x + d, 0.0);
        return;
    }
    if (k == 2) {
        const auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(2.0 * kPi * R / step)));
        if (off == 0) {
            emit_circle(out, R, n);
            return;
        }
        for (std::int64_t j = 0; j < n; ++j) {
            const double a = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
            double* x = out.next();
            std::copy(prefix.begin(), prefix.begin() + off, x);
            x[off] = R * std::cos(a);
            x[off + 1] = R * std::sin(a);
        }
        return;
    }
    const auto m = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(kPi * R / step)));
    for (std::int64_t j = 0; j <= m; ++j) {
        const double phi = kPi * static_cast<double>(j) / static_cast<double>(m);
        prefix[off] = R * std::cos(phi);
        const double rho = (j == 0 || j == m) ? 0.0 : R * std::sin(phi);
        emit_sphere(out, d, k - 1, off + 1, prefix, rho, step);
    }
}

double norm(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

} // namespace

RadiusSequence RadiusSequence::power(double p) { return {RadiusKind::power, p, {}}; }
RadiusSequence RadiusSequence::geometric(double q) { return {RadiusKind::geometric, q, {}}; }
RadiusSequence RadiusSequence::logarithmic() { return {RadiusKind::logarithmic, 0.0, {}}; }
RadiusSequence RadiusSequence::table(std::vector<double> v) { return {RadiusKind::table, 0.0, std::move(v)}; }

std::int64_t RadiusSequence::size() const
{
    return kind == RadiusKind::table ? static_cast<std::int64_t>(values.size()) : 0;
}

double radius_term(const RadiusSequence& seq, std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("radius index must be >= 1");
    switch (seq.kind) {
    case RadiusKind::power: return ipow(n, -seq.param);
    case RadiusKind::geometric: return std::pow(seq.param, -static_cast<double>(n));
    case RadiusKind::logarithmic: return 1.0 / std::log(static_cast<double>(n) + 1.0);
    case RadiusKind::table:
        if (n > seq.size()) throw std::out_of_range("radius index beyond table");
        return seq.values[static_cast<std::size_t>(n - 1)];
    }
    return 0.0;
}

std::int64_t first_index_at_most(const RadiusSequence& seq, double x)
{
    if (seq.kind == RadiusKind::table) {
        const auto it = std::find_if(seq.values.begin(), seq.values.end(), [&](double a) { return a <= x; });
        return static_cast<std::int64_t>(it - seq.values.begin()) + 1;
    }
    if (x <= 0.0) return kIndexCap;
    double guess;
    switch (seq.kind) {
    case RadiusKind::power: guess = std::pow(x, -1.0 / seq.param); break;
    case RadiusKind::geometric: guess = std::log(1.0 / x) / std::log(seq.param); break;
    default: guess = x < 1.0 / 700.0 ? 1e300 : std::exp(1.0 / x) - 1.0; break;
    }
    if (!(guess < static_cast<double>(kIndexCap))) return kIndexCap;
    auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(guess)));
    while (n > 1 && radius_term(seq, n - 1) <= x) --n;
    while (radius_term(seq, n) > x) ++n;
    return n;
}

bool gap_interval_hit(const RadiusSequence& seq, double p, std::int64_t k)
{
    return interval_hit(seq, ipow(k + 1, -p), ipow(k, -p));
}

std::int64_t gap_count_A(const RadiusSequence& seq, double p, std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("gap_count_A needs n >= 1");
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= n; ++k)
        if (gap_interval_hit(seq, p, k)) ++count;
    return count;
}

CountRule CountRule::constant(std::int64_t k) { return {CountKind::constant, static_cast<double>(k)}; }
CountRule CountRule::power_sum(double l) { return {CountKind::power_sum, l}; }
CountRule CountRule::exponential(std::int64_t base) { return {CountKind::exponential, static_cast<double>(base)}; }

std::int64_t points_on_circle(const CountRule& rule, std::int64_t i)
{
    if (i < 1) throw std::invalid_argument("circle index must be >= 1");
    switch (rule.kind) {
    case CountKind::constant: return static_cast<std::int64_t>(rule.value);
    case CountKind::power_sum: {
        // Partial sums are floor(n^l).
        const double hi = std::floor(ipow(i, rule.value));
        const double lo = std::floor(ipow(i - 1, rule.value));
        if (hi > 4.0e18) throw ResourceError("point count on circle overflows");
        return static_cast<std::int64_t>(hi - lo);
    }
    case CountKind::exponential: {
        const double b = std::pow(rule.value, static_cast<double>(i));
        if (b > 4.0e18) throw ResourceError("point count on circle overflows");
        return static_cast<std::int64_t>(std::llround(b));
    }
    }
    return 0;
}

double growth_exponent(const CountRule& rule)
{
    switch (rule.kind) {
    case CountKind::constant: return 1.0;
    case CountKind::power_sum: return rule.value;
    case CountKind::exponential: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

SetSpec SetSpec::fp(double p)
{
    SetSpec s;
    s.family = Family::fp;
    s.d = 1;
    s.p = p;
    s.radii = RadiusSequence::power(p);
    return s;
}

SetSpec SetSpec::concentric(int d, RadiusSequence radii)
{
    SetSpec s;
    s.family = Family::concentric;
    s.d = d;
    s.p = radii.kind == RadiusKind::power ? radii.param : 0.0;
    s.radii = std::move(radii);
    return s;
}

SetSpec SetSpec::spiral(double p)
{
    SetSpec s;
    s.family = Family::spiral;
    s.d = 2;
    s.p = p;
    s.q = p;
    return s;
}

SetSpec SetSpec::elliptical(double p, double q)
{
    SetSpec s;
    s.family = Family::elliptical;
    s.d = 2;
    s.p = p;
    s.q = q;
    return s;
}

SetSpec SetSpec::product_sine(double p)
{
    SetSpec s;
    s.family = Family::product_sine;
    s.d = 2;
    s.p = p;
    return s;
}

SetSpec SetSpec::attenuated(double p, double q)
{
    SetSpec s;
    s.family = Family::attenuated;
    s.d = 2;
    s.p = p;
    s.q = q;
    return s;
}

SetSpec SetSpec::isolated(double p, CountRule rule)
{
    SetSpec s;
    s.family = Family::isolated;
    s.d = 2;
    s.p = p;
    s.count = rule;
    return s;
}

std::string family_name(Family f)
{
    switch (f) {
    case Family::fp: return "fp";
    case Family::concentric: return "concentric";
    case Family::spiral: return "spiral";
    case Family::elliptical: return "elliptical";
    case Family::product_sine: return "product-sine";
    case Family::attenuated: return "attenuated";
    case Family::isolated: return "isolated";
    }
    return "?";
}

void validate(const SetSpec& s)
{
    auto need = [](bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(msg);
    };
    switch (s.family) {
    case Family::fp:
        need(s.d == 1, "fp lives in R^1");
        need(s.p > 0.0, "p must be positive");
        break;
    case Family::concentric: {
        need(s.d >= 2, "concentric spheres need d >= 2");
        const auto& r = s.radii;
        switch (r.kind) {
        case RadiusKind::power: need(r.param > 0.0, "power radii need p > 0"); break;
        case RadiusKind::geometric: need(r.param > 1.0, "geometric radii need ratio > 1"); break;
        case RadiusKind::logarithmic: break;
        case RadiusKind::table:
            need(!r.values.empty(), "radius table is empty");
            for (std::size_t i = 0; i < r.values.size(); ++i) {
                need(r.values[i] > 0.0, "radius table entries must be positive");
                need(i == 0 || r.values[i] < r.values[i - 1], "radius table must be strictly decreasing");
            }
            break;
        }
        break;
    }
    case Family::spiral:
    case Family::product_sine:
        need(s.d == 2, "planar family");
        need(s.p > 0.0, "p must be positive");
        break;
    case Family::elliptical:
        need(s.d == 2, "planar family");
        need(s.p > 0.0 && s.q >= s.p, "elliptical spiral needs q >= p > 0");
        break;
    case Family::attenuated:
        need(s.d == 2, "planar family");
        need(s.p > 0.0 && s.q > 0.0, "attenuated sine needs p, q > 0");
        break;
    case Family::isolated: {
        need(s.d == 2, "isolated points live in the plane");
        need(s.p > 0.0, "p must be positive");
        const auto& c = s.count;
        switch (c.kind) {
        case CountKind::constant: need(c.value >= 1.0 && c.value == std::floor(c.value), "constant count must be a positive integer"); break;
        case CountKind::power_sum: need(c.value >= 1.0, "power-sum exponent must be >= 1"); break;
        case CountKind::exponential: need(c.value >= 2.0 && c.value == std::floor(c.value), "exponential base must be an integer >= 2"); break;
        }
        break;
    }
    }
}

double set_diameter(const SetSpec& s)
{
    switch (s.family) {
    case Family::fp: return 1.0;
    case Family::concentric: return 2.0 * radius_term(s.radii, 1);
    case Family::spiral:
    case Family::elliptical:
    case Family::isolated: return 2.0;
    case Family::product_sine:
    case Family::attenuated: return std::sqrt(5.0);
    }
    return 1.0;
}

std::int64_t piece_count(const SetSpec& s)
{
    return s.family == Family::concentric ? s.radii.size() : 0;
}

PieceExtent piece_extent(const SetSpec& s, std::int64_t i)
{
    switch (s.family) {
    case Family::fp:
    case Family::concentric: {
        const double a = radius_term(s.radii, i);
        return {a, a};
    }
    case Family::isolated: {
        const double a = ipow(i, -s.p);
        return {a, a};
    }
    case Family::elliptical: return {ipow(i + 1, -s.q), ipow(i, -s.p)};
    default: return {ipow(i + 1, -s.p), ipow(i, -s.p)};
    }
}

double piece_gap(const SetSpec& s, std::int64_t i)
{
    switch (s.family) {
    case Family::fp:
    case Family::concentric: {
        const double a = radius_term(s.radii, i);
        if (s.radii.size() > 0 && i >= s.radii.size()) return a;
        return a - radius_term(s.radii, i + 1);
    }
    case Family::spiral:
    case Family::elliptical: return ipow(i, -s.p) - ipow(i + 2, -s.p);
    default: return ipow(i, -s.p) - ipow(i + 1, -s.p);
    }
}

double sweep_coordinate(const SetSpec& s, std::span<const double> x)
{
    switch (s.family) {
    case Family::fp:
    case Family::product_sine:
    case Family::attenuated: return x[0];
    default: return norm(x);
    }
}

TailRegion tail_region(const SetSpec& s, std::int64_t i)
{
    TailRegion r;
    r.d = s.d;
    switch (s.family) {
    case Family::fp:
        r.kind = RegionKind::interval;
        r.a = radius_term(s.radii, i);
        break;
    case Family::concentric:
        if (s.radii.size() > 0 && i > s.radii.size()) return r;
        r.kind = RegionKind::ball;
        r.a = radius_term(s.radii, i);
        break;
    case Family::spiral:
    case Family::isolated:
        r.kind = RegionKind::ball;
        r.a = ipow(i, -s.p);
        break;
    case Family::elliptical:
        r.kind = RegionKind::ellipse;
        r.a = ipow(i, -s.p);
        r.b = ipow(i, -s.q);
        break;
    case Family::product_sine:
        r.kind = RegionKind::envelope;
        r.a = ipow(i, -s.p);
        r.power = 0.0;
        break;
    case Family::attenuated:
        r.kind = RegionKind::envelope;
        r.a = ipow(i, -s.p);
        r.power = s.q;
        break;
    }
    return r;
}

std::int64_t dense_from(const SetSpec& s, double side)
{
    if (s.family == Family::isolated) return 0;
    if (s.family == Family::concentric && s.radii.size() > 0) return 0;
    return first_true([&](std::int64_t i) { return piece_gap(s, i) < side; });
}

void sample_piece(const SetSpec& s, std::int64_t i, double step, const PointSink& sink, double t_end)
{
    Chunker out(s.d, sink);
    switch (s.family) {
    case Family::fp: out.next()[0] = radius_term(s.radii, i); break;
    case Family::concentric: {
        std::vector<double> prefix(static_cast<std::size_t>(s.d), 0.0);
        emit_sphere(out, s.d, s.d, 0, prefix, radius_term(s.radii, i), step);
        break;
    }
    case Family::isolated: {
        const std::int64_t b = points_on_circle(s.count, i);
        const double R = ipow(i, -s.p);
        for (std::int64_t j = 0; j < b; ++j) {
            const double a = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(b);
            double* x = out.next();
            x[0] = R * std::cos(a);
            x[1] = R * std::sin(a);
        }
        break;
    }
    default: {
        const Curve c = curve_of(s);
        const double t0 = static_cast<double>(i);
        double t1 = t0 + 1.0;
        if (t_end > 0.0) t1 = std::min(t1, t_end);
        if (!(t1 > t0)) break;
        const double len = t1 - t0;
        const auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(c.speed_bound(t0) * len / step)));
        for (std::int64_t k = 0; k < n; ++k) {
            const double t = t0 + len * static_cast<double>(k) / static_cast<double>(n);
            double* x = out.next();
            c.at(t, x[0], x[1]);
        }
        break;
    }
    }
    out.flush();
}

PointCloud sample(const SetSpec& s, std::int64_t budget, double truncation)
{
    validate(s);
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    if (!(truncation > 0.0 && truncation <= 1.0)) throw std::invalid_argument("truncation must lie in (0, 1]");

    PointCloud cloud;
    cloud.d = s.d;
    const PointSink keep = [&](std::span<const double> pts) {
        if (cloud.coords.size() + pts.size() > kMaxSampleCoords)
            throw ResourceError("sample exceeds the point limit; raise truncation or lower budget");
        cloud.coords.insert(cloud.coords.end(), pts.begin(), pts.end());
    };

    const bool discrete = s.family == Family::fp || s.family == Family::isolated;
    const double step = set_diameter(s) / static_cast<double>(budget);
    cloud.resolution = discrete ? static_cast<double>(budget) : step;

    if (is_curve(s.family)) {
        const double t_end = std::pow(truncation, -1.0 / s.p);
        for (std::int64_t i = 1; static_cast<double>(i) < t_end; ++i) sample_piece(s, i, step, keep, t_end);
    } else {
        const std::int64_t limit = piece_count(s);
        for (std::int64_t i = 1;; ++i) {
            if (limit > 0 && i > limit) break;
            if (discrete && i > budget) break;
            if (piece_extent(s, i).hi < truncation) break;
            sample_piece(s, i, step, keep);
        }
    }
    if (cloud.coords.empty()) throw ResourceError("budget and truncation leave no points");
    return cloud;
}

double membership_residual(const SetSpec& s, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != s.d) throw std::invalid_argument("point dimension does not match the set");
    switch (s.family) {
    case Family::fp:
    case Family::concentric: {
        const double r = s.family == Family::fp ? x[0] : norm(x);
        if (s.family == Family::fp && r <= 0.0) return -r;
        const std::int64_t n = first_index_at_most(s.radii, r);
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t k = n - 1; k <= n; ++k) {
            if (k < 1 || (s.radii.size() > 0 && k > s.radii.size()) || k >= kIndexCap) continue;
            best = std::min(best, std::abs(r - radius_term(s.radii, k)));
        }
        return std::isfinite(best) ? best : r;
    }
    case Family::isolated: {
        const double r = norm(x);
        const auto n = r > 0.0 ? static_cast<std::int64_t>(std::min(std::ceil(std::pow(r, -1.0 / s.p)), 1e15)) : kIndexCap;
        double phi = std::atan2(x[1], x[0]);
        if (phi < 0.0) phi += 2.0 * kPi;
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t k = std::max<std::int64_t>(1, n - 1); k <= n + 1; ++k) {
            const double R = ipow(k, -s.p);
            double b;
            try {
                b = static_cast<double>(points_on_circle(s.count, k));
            } catch (const ResourceError&) {
                best = std::min(best, std::abs(r - R)); // too dense to resolve
                continue;
            }
            const double j = std::fmod(std::round(phi * b / (2.0 * kPi)), b);
            const double a = 2.0 * kPi * j / b;
            best = std::min(best, std::hypot(x[0] - R * std::cos(a), x[1] - R * std::sin(a)));
        }
        return best;
    }
    case Family::product_sine:
    case Family::attenuated: {
        const double q = s.family == Family::attenuated ? s.q : 0.0;
        if (x[0] <= 0.0) {
            const double amp = q > 0.0 ? 0.0 : 1.0;
            return std::hypot(x[0], std::max(0.0, std::abs(x[1]) - amp));
        }
        if (x[0] > 1.0) return std::hypot(x[0] - 1.0, x[1] - std::sin(kPi));
        const double f = std::pow(x[0], q) * std::sin(kPi * std::pow(x[0], -1.0 / s.p));
        return std::abs(x[1] - f);
    }
    case Family::spiral:
    case Family::elliptical: {
        const Curve c = curve_of(s);
        const double px = x[0], py = x[1];
        auto dist = [&](double t) {
            double gx, gy;
            c.at(t, gx, gy);
            return std::hypot(gx - px, gy - py);
        };
        // (x t^p)^2 + (y t^q)^2 = 1 pins down the winding.
        auto h = [&](double t) {
            const double u = px * std::pow(t, c.p), v = py * std::pow(t, c.q);
            return u * u + v * v;
        };
        double best = dist(1.0);
        if (px == 0.0 && py == 0.0) return 0.0; // the limit point
        double t_est = 1.0;
        if (h(1.0) < 1.0) {
            double lo = 1.0, hi = 2.0;
            while (h(hi) < 1.0 && hi < 1e12) {
                lo = hi;
                hi *= 2.0;
            }
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (h(mid) < 1.0 ? lo : hi) = mid;
            }
            t_est = 0.5 * (lo + hi);
        }
        double phi = std::atan2(px * std::pow(t_est, c.p), py * std::pow(t_est, c.q)); // pi t mod 2 pi
        const double k0 = std::round((kPi * t_est - phi) / (2.0 * kPi));
        for (double k = k0 - 1.0; k <= k0 + 1.0; k += 1.0) {
            const double t = (phi + 2.0 * kPi * k) / kPi;
            if (t < 1.0) continue;
            best = std::min(best, dist(t));
            const double lo = std::max(1.0, t - 0.25), hi = t + 0.25;
            const auto r = boost::math::tools::brent_find_minima(dist, lo, hi, std::numeric_limits<double>::digits);
            best = std::min(best, r.second);
        }
        return best;
    }
    }
    return 0.0;
}

std::array<double, 2> curve_point(const SetSpec& s, double t)
{
    if (!(t >= 1.0)) throw std::invalid_argument("curve parameter must be >= 1");
    std::array<double, 2> x{};
    curve_of(s).at(t, x[0], x[1]);
    return x;
}

double curve_speed(const SetSpec& s, double t) { return curve_of(s).speed(t); }

double curve_speed_bound(const SetSpec& s, double t) { return curve_of(s).speed_bound(t); }

} // namespace idim
