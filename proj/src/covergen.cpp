#include "idim/covergen.hpp"

#include "idim/errors.hpp"
#include "idim/formula.hpp"
#include "idim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace idim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxCutoff = 1.0e9;

double ipow(std::int64_t n, double e) { return std::pow(static_cast<double>(n), e); }

// Latitude bands of angular width r/(R sqrt(d-1)); within a band the sets
// are products with covers of the (d-2)-sphere at diameter r sqrt((d-2)/(d-1)).
double band_cover(int d, double R, double r)
{
    if (2.0 * R <= r) return 1.0;
    if (d == 2) return std::ceil(kPi / std::asin(r / (2.0 * R)));
    const double rn = r * std::sqrt((d - 2.0) / (d - 1.0));
    const double nb = std::ceil(kPi * R * std::sqrt(d - 1.0) / r);
    if (std::pow(nb, d - 2) > 1.0e6) return std::ceil(xi_constant(d) * std::pow(R / r, d - 1));
    double total = 0.0;
    const auto n = static_cast<std::int64_t>(nb);
    for (std::int64_t k = 0; k < n; ++k) {
        const double a = kPi * static_cast<double>(k) / nb, b = kPi * static_cast<double>(k + 1) / nb;
        const double rho = (a <= 0.5 * kPi && b >= 0.5 * kPi) ? 1.0 : std::max(std::sin(a), std::sin(b));
        total += band_cover(d - 1, R * rho, rn);
    }
    return total;
}

// Per-sphere count inside theorem covers: arcs for circles, the xi_d bound
// above, so that the count scales exactly as (R/r)^(d-1).
double sphere_piece_count(int d, double R, double r)
{
    if (R <= r) return 1.0;
    if (d == 2) return band_cover(2, R, r);
    return std::ceil(xi_constant(d) * std::pow(R / r, d - 1));
}

bool case_one(const SetSpec& s, double theta)
{
    if (theta == 1.0) return true;
    if (s.family == Family::concentric) return s.p * (s.d - 1.0) >= 1.0;
    if (s.family == Family::attenuated) return s.p * s.q >= 1.0;
    return false;
}

double envelope_power(const SetSpec& s) { return s.family == Family::attenuated ? s.q : 0.0; }

double outer_radius(const SetSpec& s, std::int64_t i)
{
    return s.family == Family::concentric ? radius_term(s.radii, i) : ipow(i, -s.p);
}

// Inner grid over everything from piece M on.
void fill_inner(const SetSpec& s, double delta, double theta, std::int64_t M, CoverCounts& c)
{
    const double scale = case_one(s, theta) ? delta : std::pow(delta, theta);
    c.inner_scale = scale;
    const int d = s.d;
    const bool finite = s.family == Family::concentric && s.radii.size() > 0 && M > s.radii.size();
    const double R = finite ? 0.0 : outer_radius(s, M);
    c.inner_radius = R;
    c.grid_terms.clear();

    if (s.family == Family::attenuated || s.family == Family::product_sine) {
        // Columns of height 2 (i a)^q over [0, R], a = scale/sqrt(2).
        const double a = scale / std::sqrt(2.0);
        const double q = envelope_power(s);
        const double N = std::ceil(R / a);
        if (N > kMaxCutoff) throw ResourceError("inner grid too fine to count");
        double cells = 0.0, heights = 0.0;
        for (std::int64_t i = 1; i <= static_cast<std::int64_t>(N); ++i) {
            const double h = 2.0 * std::pow(static_cast<double>(i) * a, q) / a;
            heights += h;
            cells += std::ceil(h) + 1.0;
        }
        c.inner_boxes = cells;
        c.grid_terms = {N, heights};
        c.grid_bound = N + heights;
        return;
    }
    const double w = scale / std::sqrt(static_cast<double>(d));
    const double x = 2.0 * std::sqrt(static_cast<double>(d)) * R / scale;
    if (s.family == Family::fp) {
        c.inner_boxes = R > 0.0 ? std::floor(R / scale) + 1.0 : 0.0;
        c.grid_terms = {1.0, R / scale};
        c.grid_bound = 1.0 + R / scale;
        return;
    }
    // Grid aligned with a corner of the cube [-R, R]^d.
    c.inner_boxes = R > 0.0 ? std::pow(std::ceil(2.0 * R / w), d) : 0.0;
    double binom = 1.0, sum = 0.0;
    for (int k = 0; k <= d; ++k) {
        const double t = binom * std::pow(x, k);
        c.grid_terms.push_back(t);
        sum += t;
        binom = binom * (d - k) / (k + 1);
    }
    c.grid_bound = sum;
}

double outer_piece(const SetSpec& s, double delta, std::int64_t i)
{
    switch (s.family) {
    case Family::fp: return 1.0;
    case Family::concentric: return sphere_piece_count(s.d, radius_term(s.radii, i), delta);
    case Family::isolated: return static_cast<double>(points_on_circle(s.count, i));
    case Family::attenuated:
    case Family::product_sine: {
        const double pq = s.p * envelope_power(s);
        const double len = 2.0 * ipow(i, -pq) + ipow(i, -s.p) - ipow(i + 1, -s.p);
        return std::ceil(len / delta);
    }
    default: throw std::invalid_argument("no two-scale cover for " + family_name(s.family));
    }
}

void check_args(const SetSpec& s, double delta, double theta)
{
    validate(s);
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
    if (s.family == Family::spiral || s.family == Family::elliptical)
        throw std::invalid_argument("no two-scale cover for " + family_name(s.family));
    if (s.family == Family::isolated && !std::isfinite(growth_exponent(s.count)))
        throw std::invalid_argument("isolated points need a finite growth exponent");
}

double cost_at(double inner, double scale, double outer, double delta, double s)
{
    return sum_from_logs({log_term(inner, scale, s), log_term(outer, delta, s)});
}

} // namespace

double xi_constant(int d)
{
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    if (d == 2) return 8.0;
    return std::pow(4.0 * std::sqrt(static_cast<double>(d)), d - 1);
}

std::int64_t sphere_cover_count(int d, double R, double r)
{
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    if (!(R > 0.0 && r > 0.0)) throw std::invalid_argument("radii must be positive");
    if (R <= r) return 1;
    const double n = band_cover(d, R, r);
    if (n > 9.0e18) throw ResourceError("sphere cover count overflows");
    return static_cast<std::int64_t>(n);
}

std::optional<std::int64_t> theorem_cutoff(const SetSpec& s, double delta, double theta, double sv)
{
    double e;
    switch (s.family) {
    case Family::concentric:
        if (s.radii.kind != RadiusKind::power) return std::nullopt;
        e = case_one(s, theta) ? 1.0 / (1.0 + s.p) : (1.0 - (1.0 - theta) * (s.d - sv)) / (1.0 + s.p);
        break;
    case Family::fp: e = (sv - theta * sv + theta) / (1.0 + s.p); break;
    case Family::isolated: {
        const double l = growth_exponent(s.count);
        if (!std::isfinite(l)) return std::nullopt;
        e = (sv - theta * sv + theta * s.d) / (l + s.p * s.d);
        break;
    }
    case Family::attenuated:
    case Family::product_sine: {
        const double q = envelope_power(s);
        if (s.p * q >= 1.0) e = 1.0 / (s.p * (1.0 + q));
        else e = (sv - theta * sv + 2.0 * theta - 1.0) / (1.0 + s.p);
        break;
    }
    default: return std::nullopt;
    }
    const double m = e > 0.0 ? std::ceil(std::pow(delta, -e)) : 1.0;
    if (!(m <= kMaxCutoff)) throw ResourceError("cutoff too large");
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(m));
}

CoverCounts build_cover_counts(const SetSpec& s, double delta, double theta, std::int64_t M)
{
    check_args(s, delta, theta);
    if (M < 1) throw std::invalid_argument("cutoff must be >= 1");
    if (static_cast<double>(M) > kMaxCutoff) throw ResourceError("cutoff too large");
    CoverCounts c;
    c.cutoff_M = M;
    c.xi_d = s.d >= 2 ? xi_constant(s.d) : 0.0;
    fill_inner(s, delta, theta, M, c);
    std::int64_t last = M - 1;
    if (s.family == Family::concentric && s.radii.size() > 0) last = std::min(last, s.radii.size());
    c.outer_per_piece.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, last)));
    for (std::int64_t i = 1; i <= last; ++i) c.outer_per_piece.push_back(outer_piece(s, delta, i));
    return c;
}

CoverCounts build_theorem_cover(const SetSpec& s, double delta, double theta, double sv)
{
    if (!(sv > 0.0 && sv <= s.d)) throw std::invalid_argument("s must lie in (0, d]");
    check_args(s, delta, theta);
    const auto M = theorem_cutoff(s, delta, theta, sv);
    if (!M) throw std::invalid_argument("no theorem cutoff for this set");
    return build_cover_counts(s, delta, theta, *M);
}

double cover_cost(const CoverCounts& c, double delta, double theta, double sv)
{
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    double outer = 0.0;
    for (double n : c.outer_per_piece) outer += n;
    const double scale = c.inner_scale > 0.0 ? c.inner_scale : std::pow(delta, theta);
    return cost_at(c.inner_boxes, scale, outer, delta, sv);
}

Cover enumerate_grid_cover(const PointCloud& cloud, double delta, double theta, double inner_radius)
{
    if (cloud.size() == 0) throw std::invalid_argument("empty cloud");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
    if (!(inner_radius >= 0.0)) throw std::invalid_argument("inner radius must be >= 0");
    const int d = cloud.d;
    const double big = std::pow(delta, theta);
    Cover cover;
    cover.delta = delta;
    cover.theta = theta;

    std::vector<double> lo(d, std::numeric_limits<double>::infinity()), hi(d, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (int k = 0; k < d; ++k) {
            lo[k] = std::min(lo[k], cloud.point(i)[k]);
            hi[k] = std::max(hi[k], cloud.point(i)[k]);
        }
    double diag = 0.0;
    std::vector<double> mid(d);
    for (int k = 0; k < d; ++k) {
        diag += (hi[k] - lo[k]) * (hi[k] - lo[k]);
        mid[k] = 0.5 * (lo[k] + hi[k]);
    }
    if (std::sqrt(diag) <= big) {
        cover.elements.push_back({mid, big});
        return cover;
    }

    const Grid fine(d, delta), coarse(d, big);
    // At theta = 1 both grids coincide and share one key set.
    KeySet inner, outer;
    KeySet& inner_keys = big == delta ? outer : inner;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto x = cloud.point(i);
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        if (std::sqrt(r2) <= inner_radius) inner_keys.add(coarse.key_of(x));
        else outer.add(fine.key_of(x));
    }
    for (CellKey k : inner.keys()) cover.elements.push_back({coarse.centre(coarse.unpack(k)), big});
    for (CellKey k : outer.keys()) cover.elements.push_back({fine.centre(fine.unpack(k)), delta});
    return cover;
}

bool window_ok(const Cover& c)
{
    const double big = std::pow(c.delta, c.theta);
    return std::all_of(c.elements.begin(), c.elements.end(),
                       [&](const CoverElement& e) { return e.diameter >= c.delta && e.diameter <= big; });
}

bool covers(const Cover& c, const PointCloud& cloud)
{
    if (c.elements.empty()) return cloud.size() == 0;
    const int d = cloud.d;
    double dmax = 0.0;
    for (const auto& e : c.elements) {
        if (static_cast<int>(e.center.size()) != d) return false;
        dmax = std::max(dmax, e.diameter);
    }
    // Bucket element centres at the largest diameter; a covering element's
    // centre lies in a neighbouring bucket.
    const Grid buckets(d, dmax * std::sqrt(static_cast<double>(d)));
    std::unordered_map<CellKey, std::vector<std::size_t>> table;
    for (std::size_t j = 0; j < c.elements.size(); ++j) table[buckets.key_of(c.elements[j].center)].push_back(j);

    const auto n_nb = static_cast<int>(std::pow(3, d));
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto x = cloud.point(i);
        const CellIndex base = buckets.index_of(x);
        bool hit = false;
        for (int code = 0; code < n_nb && !hit; ++code) {
            CellIndex idx = base;
            int rest = code;
            for (int k = 0; k < d; ++k) {
                idx[k] += rest % 3 - 1;
                rest /= 3;
            }
            const auto it = table.find(buckets.pack(idx));
            if (it == table.end()) continue;
            for (std::size_t j : it->second) {
                const auto& e = c.elements[j];
                double r2 = 0.0;
                for (int k = 0; k < d; ++k) r2 += (x[k] - e.center[k]) * (x[k] - e.center[k]);
                const double h = 0.5 * e.diameter;
                if (r2 <= h * h * (1.0 + 1e-12)) {
                    hit = true;
                    break;
                }
            }
        }
        if (!hit) return false;
    }
    return true;
}

EstimateResult upper_dim_estimate(const SetSpec& s, double theta, const std::vector<double>& deltas)
{
    if (deltas.size() < 4) throw std::invalid_argument("upper estimate needs at least four deltas");
    const auto [mn, mx] = std::minmax_element(deltas.begin(), deltas.end());
    if (std::log10(*mx / *mn) < 3.0 - 1e-9) throw std::invalid_argument("deltas must span at least three decades");

    EstimateResult res;
    res.theta = theta;
    res.target = formula_value(s, theta);
    for (double delta : deltas) {
        check_args(s, delta, theta);
        std::vector<std::int64_t> ladder;
        auto bracket = [&](std::int64_t m) {
            ladder.push_back(m);
            const double l2 = std::log2(static_cast<double>(m));
            ladder.push_back(static_cast<std::int64_t>(std::exp2(std::floor(l2))));
            ladder.push_back(static_cast<std::int64_t>(std::exp2(std::ceil(l2))));
        };
        if (theorem_cutoff(s, delta, theta, s.d)) {
            for (int k = 1; k <= 64; ++k) bracket(*theorem_cutoff(s, delta, theta, k * s.d / 64.0));
        } else {
            // Radii without a closed form: powers of two up to the delta scale.
            const std::int64_t top = 2 * first_index_at_most(s.radii, delta);
            for (std::int64_t m = 1; m <= top; m *= 2) bracket(m);
        }
        if (s.family == Family::concentric && s.radii.size() > 0)
            for (auto& m : ladder) m = std::min(m, s.radii.size() + 1);
        std::sort(ladder.begin(), ladder.end());
        ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

        const CoverCounts all = build_cover_counts(s, delta, theta, ladder.back());
        std::vector<double> prefix{0.0};
        for (double n : all.outer_per_piece) prefix.push_back(prefix.back() + n);
        std::vector<CoverCounts> inner;
        for (std::int64_t m : ladder) {
            CoverCounts c;
            fill_inner(s, delta, theta, m, c);
            c.cutoff_M = m;
            inner.push_back(c);
        }
        auto best = [&](double sv, std::size_t* arg) {
            double b = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < ladder.size(); ++k) {
                const auto idx = std::min<std::size_t>(static_cast<std::size_t>(ladder[k] - 1), prefix.size() - 1);
                const double c = cost_at(inner[k].inner_boxes, inner[k].inner_scale, prefix[idx], delta, sv);
                if (c < b) {
                    b = c;
                    if (arg) *arg = k;
                }
            }
            return b;
        };
        const double sv = bisect_exponent([&](double x) { return best(x, nullptr); }, s.d);
        std::size_t arg = 0;
        const double c = best(sv, &arg);
        res.rows.push_back({delta, sv, inner[arg].inner_radius, c - 1.0, ladder[arg]});
    }
    finish_estimate(res);
    return res;
}

} // namespace idim
