#ifndef IDIM_MASSDIST_HPP
#define IDIM_MASSDIST_HPP

#include "idim/setlib.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace idim {

// Origin-centred (d-1)-sphere carrying normalised surface measure.
struct SphereSupport {
    double radius = 1.0;
    int d = 2;
};
// Graph arc t in [t0, t1] of a sine-curve family, carrying arc length.
struct ArcSupport {
    double p = 1.0;
    double q = 0.0;
    double t0 = 1.0;
    double t1 = 2.0;
    double length = 0.0; // cached arc length, 0 when unknown
};
struct PointSupport {
    std::vector<double> x;
};
// count evenly spaced points on the circle of the given radius, phase 0,
// sharing the atom's mass equally.
struct RingSupport {
    double radius = 1.0;
    std::int64_t count = 1;
};

using Support = std::variant<SphereSupport, ArcSupport, PointSupport, RingSupport>;

struct Atom {
    Support support;
    double mass = 0.0;
};

// mu(U) = scale_factor * sum of atom masses times the share of each support in U.
struct DiscreteMeasure {
    int d = 2;
    std::vector<Atom> atoms;
    double scale_factor = 1.0;

    double total_mass() const;
};

struct TestSet {
    std::vector<double> center;
    double diameter = 0.0;
};

double sphere_area_constant(int d);

// Share of the sphere of radius R (in R^d, centred at 0) within distance rho of c.
double sphere_fraction_in_ball(int d, double R, std::span<const double> c, double rho);
// Length of the arc inside the closed ball.
double arc_length_in_ball(const ArcSupport& arc, std::span<const double> c, double rho);
double arc_length(const ArcSupport& arc);

// mu of the closed ball with the test set's centre and diameter.
double measure_of(const DiscreteMeasure& mu, const TestSet& u);

double concentric_delta0(int d, double p, double theta, double s);
DiscreteMeasure build_mu_concentric(int d, double p, double theta, double s, double delta);
DiscreteMeasure build_lambda_lift(const DiscreteMeasure& radii_measure, int d);

// Largest delta in (0, 1) below which 2^{-delta^{-gamma}} <= delta^{1/2}
// holds for every smaller delta, gamma = theta/(4p).
double points_delta_gamma(double p, double theta);
DiscreteMeasure build_mu_points_example(double p, double theta, double delta);

double sine_delta_threshold(double p, double q, double theta, double s);
DiscreteMeasure build_mu_sine(double p, double q, double theta, double s, double delta);

// Point masses on the radii in (cutoff, 1], proportional to min(1, gap^s)
// and normalised to total mass 1; constant is the empirical sup of
// mu([x, x + r]) / r^s over a window ladder.
struct FrostmanResult {
    DiscreteMeasure measure;
    double constant = 0.0;
};
FrostmanResult greedy_frostman(const RadiusSequence& radii, double s, double cutoff);

struct MeasureFamily {
    std::string name;
    std::function<DiscreteMeasure(double delta)> build;
    double floor = 0.0;
    double cap = 0.0;
};

MeasureFamily concentric_family(int d, double p, double theta, double s, double cap_slack = 1.1,
                                double floor_slack = 0.99);
MeasureFamily points_family(double p, double theta, double cap_slack = 1.1, double floor_slack = 0.99);
MeasureFamily sine_family(double p, double q, double theta, double s, double cap_slack = 1.1,
                          double floor_slack = 0.99);

struct CertificateRow {
    double delta = 0.0;
    double total_mass = 0.0;
    double ratio_max = 0.0;
    std::int64_t samples = 0;
    bool supported = false;
};

struct LowerBoundCertificate {
    double s = 0.0;
    double theta = 1.0;
    std::vector<double> delta_range; // accepted deltas
    std::vector<double> skipped;     // deltas the construction rejected
    double total_mass_min = 0.0;
    double ratio_max = 0.0;
    std::int64_t samples = 0;
    double floor = 0.0;
    double cap = 0.0;
    bool supported = false;
    std::vector<CertificateRow> rows;

    std::string verdict() const { return supported ? "supported" : "violated"; }
};

// Test sets of diameter in [delta, delta^theta]: a Sobol sequence over the
// bounding box plus centres on, tangent to and between atoms and at 0.
std::vector<TestSet> test_sets(const DiscreteMeasure& mu, double delta, double theta, std::int64_t samples);

LowerBoundCertificate verify_mass_distribution(const MeasureFamily& family, double s, double theta,
                                               const std::vector<double>& deltas, std::int64_t samples);

} // namespace idim

#endif // IDIM_MASSDIST_HPP
