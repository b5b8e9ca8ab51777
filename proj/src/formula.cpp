#include "idim/formula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace idim {

namespace {

void check_theta(double theta)
{
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
}

void check_positive(double v, const char* name)
{
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

} // namespace

ThetaGrid::ThetaGrid(std::vector<double> values)
{
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("theta grid values must lie in [0, 1]");
    values.push_back(0.0);
    values.push_back(1.0);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    values_ = std::move(values);
}

ThetaGrid ThetaGrid::range(double a, double b, double step)
{
    if (!(step > 0.0) || !(a <= b)) throw std::invalid_argument("theta range needs a <= b and step > 0");
    std::vector<double> v;
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long k = 0; k <= n; ++k) {
        // Snap to the nearest 1e-12 so 0.1 * 3 prints as 0.3.
        const double x = a + step * static_cast<double>(k);
        v.push_back(std::round(x * 1e12) / 1e12);
    }
    if (b - v.back() > 1e-9) v.push_back(b);
    return ThetaGrid(std::move(v));
}

ThetaGrid ThetaGrid::uniform(int points)
{
    if (points < 2) throw std::invalid_argument("a theta grid needs at least two points");
    std::vector<double> v;
    for (int k = 0; k < points; ++k) v.push_back(static_cast<double>(k) / (points - 1));
    return ThetaGrid(std::move(v));
}

std::string provenance_name(Provenance p)
{
    switch (p) {
    case Provenance::formula: return "formula";
    case Provenance::cover_upper: return "cover-upper";
    case Provenance::measure_lower: return "measure-lower";
    case Provenance::estimate: return "estimate";
    }
    return "?";
}

Provenance parse_provenance(const std::string& s)
{
    for (auto p : {Provenance::formula, Provenance::cover_upper, Provenance::measure_lower, Provenance::estimate})
        if (provenance_name(p) == s) return p;
    throw std::invalid_argument("unknown provenance '" + s + "'");
}

double dim_fp(double p, double theta)
{
    check_positive(p, "p");
    check_theta(theta);
    if (theta == 0.0) return 0.0;
    return theta / (p + theta);
}

double dim_concentric(int d, double p, double theta)
{
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    check_positive(p, "p");
    check_theta(theta);
    const double dm1 = d - 1.0;
    if (theta == 0.0 || p * dm1 >= 1.0) return dm1;
    const double gap = 1.0 - p * dm1;
    return (d * p * dm1 + d * theta * gap) / (d * p + theta * gap);
}

double dim_spiral(double p, double theta)
{
    check_positive(p, "p");
    check_theta(theta);
    if (theta == 0.0 || p >= 1.0) return 1.0;
    const double g = theta * (1.0 - p);
    return 1.0 + g / (2.0 * p + g);
}

double dim_elliptical(double p, double q, double theta)
{
    check_positive(p, "p");
    if (!(q >= p)) throw std::invalid_argument("elliptical spiral needs q >= p");
    check_theta(theta);
    if (theta == 0.0 || p >= 1.0) return 1.0;
    const double g = theta * (1.0 - p);
    return (p + q + 2.0 * g) / (p + q + g);
}

double dim_product_sine(double p, double theta)
{
    check_positive(p, "p");
    check_theta(theta);
    if (theta == 0.0) return 1.0;
    return (2.0 * theta + p) / (theta + p);
}

double dim_attenuated(double p, double q, double theta)
{
    check_positive(p, "p");
    check_positive(q, "q");
    check_theta(theta);
    if (theta == 0.0 || p * q >= 1.0) return 1.0;
    const double g = theta * (1.0 - p * q);
    const double base = p * (1.0 + q);
    return (base + 2.0 * g) / (base + g);
}

Bounds bounds_general_concentric(int d, double dim_seq)
{
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    if (!(dim_seq >= 0.0 && dim_seq <= 1.0)) throw std::invalid_argument("sequence dimension must lie in [0, 1]");
    return {std::min(d - 1.0, d * dim_seq), std::min(static_cast<double>(d), d - 1.0 + dim_seq)};
}

ComparisonConditions check_comparison_conditions(const RadiusSequence& seq, double p, std::int64_t horizon)
{
    check_positive(p, "p");
    if (horizon < 100) throw std::invalid_argument("horizon must be >= 100");
    if (seq.size() > 0 && seq.size() < horizon) throw std::invalid_argument("table shorter than the horizon");
    constexpr double kDensityMargin = 0.01;
    constexpr double kProductMargin = 1e-9;

    const std::int64_t tail = horizon / 2;
    double sup = 0.0;
    for (std::int64_t n = tail; n <= horizon; ++n)
        sup = std::max(sup, radius_term(seq, n) * std::pow(static_cast<double>(n), p));

    // A_{p,n} is a running count of hit intervals.
    double inf = std::numeric_limits<double>::infinity();
    std::int64_t a = gap_count_A(seq, p, tail);
    for (std::int64_t n = tail; n <= horizon; ++n) {
        if (n > tail && gap_interval_hit(seq, p, n)) ++a;
        inf = std::min(inf, static_cast<double>(a) / static_cast<double>(n));
    }
    ComparisonConditions out;
    out.tail_sup = sup;
    out.tail_density_inf = inf;
    out.upper_applies = sup < 1.0 - kProductMargin;
    out.lower_applies = inf > kDensityMargin;
    return out;
}

double dim_isolated_upper(int d, double p, double l, double theta)
{
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    check_positive(p, "p");
    check_positive(l, "l");
    if (!std::isfinite(l)) throw std::invalid_argument("growth exponent must be finite");
    check_theta(theta);
    return theta * l * d / (p * d + theta * l);
}

double dim_isolated_lower_density(double p, double theta)
{
    check_positive(p, "p");
    check_theta(theta);
    return theta / (p + theta);
}

bool identity_checks(double p, double q, int d, const ThetaGrid& grid)
{
    constexpr double kTol = 1e-12;
    for (double th : grid.values()) {
        const double lhs = dim_concentric(d, p, th) - (d - 1.0);
        const double rhs = dim_attenuated(p, d - 1.0, th) - 1.0;
        if (std::abs(lhs - rhs) > kTol) return false;
        if (std::abs(dim_elliptical(p, q, th) - dim_attenuated(q, p / q, th)) > kTol) return false;
    }
    return true;
}

std::optional<double> formula_value(const SetSpec& s, double theta)
{
    switch (s.family) {
    case Family::fp: return dim_fp(s.p, theta);
    case Family::concentric:
        if (s.radii.kind != RadiusKind::power) return std::nullopt;
        return dim_concentric(s.d, s.radii.param, theta);
    case Family::spiral: return dim_spiral(s.p, theta);
    case Family::elliptical: return dim_elliptical(s.p, s.q, theta);
    case Family::product_sine: return dim_product_sine(s.p, theta);
    case Family::attenuated: return dim_attenuated(s.p, s.q, theta);
    case Family::isolated: return std::nullopt;
    }
    return std::nullopt;
}

DimensionProfile formula_profile(const SetSpec& spec, const ThetaGrid& grid)
{
    DimensionProfile prof;
    prof.grid = grid;
    prof.spec = spec;
    prof.provenance = Provenance::formula;
    for (double th : grid.values()) {
        const auto v = formula_value(spec, th);
        if (!v) throw std::invalid_argument("no closed form for " + family_name(spec.family) + " with these parameters");
        prof.values.push_back(*v);
    }
    return prof;
}

} // namespace idim
