#ifndef IDIM_SETLIB_HPP
#define IDIM_SETLIB_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace idim {

enum class RadiusKind { power, geometric, logarithmic, table };

// Decreasing sequence a_1 > a_2 > ... > 0 of radii.
struct RadiusSequence {
    RadiusKind kind = RadiusKind::power;
    double param = 1.0;         // exponent p (power) or ratio q (geometric)
    std::vector<double> values; // table kind only

    static RadiusSequence power(double p);
    static RadiusSequence geometric(double q);
    static RadiusSequence logarithmic();
    static RadiusSequence table(std::vector<double> values);

    // Number of terms, or 0 when the sequence is infinite.
    std::int64_t size() const;
};

// a_n for n >= 1. The logarithmic kind is indexed so that a_n = 1/log(n+1).
double radius_term(const RadiusSequence& seq, std::int64_t n);

// Smallest n with a_n <= x (size()+1 if none). Exact against radius_term.
std::int64_t first_index_at_most(const RadiusSequence& seq, double x);

// Whether (1/(k+1)^p, 1/k^p] contains some a_i.
bool gap_interval_hit(const RadiusSequence& seq, double p, std::int64_t k);
// #{k <= n : (1/(k+1)^p, 1/k^p] contains some a_i}.
std::int64_t gap_count_A(const RadiusSequence& seq, double p, std::int64_t n);

enum class CountKind { constant, power_sum, exponential };

// Number b_i of evenly spaced points on circle i.
struct CountRule {
    CountKind kind = CountKind::constant;
    double value = 1.0; // k, l or base

    static CountRule constant(std::int64_t k);
    static CountRule power_sum(double l);
    static CountRule exponential(std::int64_t base);
};

std::int64_t points_on_circle(const CountRule& rule, std::int64_t i);
// limsup log(b_1 + ... + b_n) / log n; infinite for the exponential rule.
double growth_exponent(const CountRule& rule);

enum class Family { fp, concentric, spiral, elliptical, product_sine, attenuated, isolated };

struct SetSpec {
    Family family = Family::fp;
    int d = 1;
    double p = 1.0;
    double q = 0.0;
    RadiusSequence radii; // concentric
    CountRule count;      // isolated

    static SetSpec fp(double p);
    static SetSpec concentric(int d, RadiusSequence radii);
    static SetSpec concentric(int d, double p) { return concentric(d, RadiusSequence::power(p)); }
    static SetSpec spiral(double p);
    static SetSpec elliptical(double p, double q);
    static SetSpec product_sine(double p);
    static SetSpec attenuated(double p, double q);
    static SetSpec isolated(double p, CountRule rule);
};

// Throws std::invalid_argument when the parameters violate the family's constraints.
void validate(const SetSpec& spec);
std::string family_name(Family f);
// Diameter of the bounding box; the nominal scale for sampling steps.
double set_diameter(const SetSpec& spec);

struct PointCloud {
    int d = 1;
    std::vector<double> coords; // row-major, d per point
    double resolution = 0.0;    // arc step, or largest index for discrete families

    std::size_t size() const { return d > 0 ? coords.size() / static_cast<std::size_t>(d) : 0; }
    std::span<const double> point(std::size_t i) const { return {coords.data() + i * d, static_cast<std::size_t>(d)}; }
};

// Deterministic sample of the part of the set at sweep coordinate >= truncation.
// Continuous families use chord steps <= set_diameter/budget; for fp and
// isolated families budget caps the largest index.
PointCloud sample(const SetSpec& spec, std::int64_t budget, double truncation);

// Distance-like residual, zero on the set.
double membership_residual(const SetSpec& spec, std::span<const double> point);

// Radial decomposition shared by the counting and cover code. Piece i >= 1 is
// point i, sphere i, or the parameter range t in [i, i+1]. Pieces are nested
// along a 1-Lipschitz sweep coordinate (|x|, or the first coordinate for the
// sine graphs and fp) that decreases with i.
struct PieceExtent {
    double lo = 0.0;
    double hi = 0.0;
};

PieceExtent piece_extent(const SetSpec& spec, std::int64_t i);
double sweep_coordinate(const SetSpec& spec, std::span<const double> x);
// Number of pieces, 0 when infinite.
std::int64_t piece_count(const SetSpec& spec);

// Region containing every piece j >= i.
enum class RegionKind { empty, interval, ball, ellipse, envelope };
struct TailRegion {
    RegionKind kind = RegionKind::empty;
    int d = 1;
    double a = 0.0;     // interval end, ball radius, x semi-axis, envelope x-extent
    double b = 0.0;     // y semi-axis for the ellipse
    double power = 0.0; // envelope |y| <= x^power
};
TailRegion tail_region(const SetSpec& spec, std::int64_t i);

// First index from which consecutive pieces are closer than side, so that
// every grid cell of that side meeting tail_region is occupied. Returns 0
// for families whose tail is never dense (isolated points, finite tables).
std::int64_t dense_from(const SetSpec& spec, double side);

using PointSink = std::function<void(std::span<const double>)>;
// Streams points of piece i in chunks, chord step <= step. Parametric pieces
// stop at t_end when it falls inside [i, i+1).
void sample_piece(const SetSpec& spec, std::int64_t i, double step, const PointSink& sink,
                  double t_end = 0.0);

// Gap between piece i and the next one along the sweep coordinate.
double piece_gap(const SetSpec& spec, std::int64_t i);

// Parametric families only: position at t >= 1, |gamma'(t)|, and an upper
// bound of the speed on [t, infinity).
std::array<double, 2> curve_point(const SetSpec& spec, double t);
double curve_speed(const SetSpec& spec, double t);
double curve_speed_bound(const SetSpec& spec, double t);

} // namespace idim

#endif // IDIM_SETLIB_HPP
