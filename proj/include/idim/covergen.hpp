#ifndef IDIM_COVERGEN_HPP
#define IDIM_COVERGEN_HPP

#include "idim/estimate.hpp"
#include "idim/setlib.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace idim {

// A set of the given diameter around center; as a ball it contains the grid
// cell of the same diameter.
struct CoverElement {
    std::vector<double> center;
    double diameter = 0.0;
};

struct Cover {
    std::vector<CoverElement> elements;
    double delta = 0.0;
    double theta = 1.0;
};

// Two-scale cover: a grid over the ball (or envelope) holding pieces >= M at
// inner_scale, and per-piece covers of pieces 1..M-1 at delta.
struct CoverCounts {
    double inner_boxes = 0.0;
    std::vector<double> outer_per_piece; // entry i-1 for piece i < M
    std::int64_t cutoff_M = 1;
    double xi_d = 0.0;
    double inner_radius = 0.0;
    double inner_scale = 0.0;
    std::vector<double> grid_terms; // binomial terms of the inner grid bound
    double grid_bound = 0.0;         // their sum
};

double xi_constant(int d);
// Sets of diameter r covering the sphere of radius R in R^d; 1 when R <= r.
std::int64_t sphere_cover_count(int d, double R, double r);

// Closed-form cutoff M for (delta, theta, s), when the family has one.
std::optional<std::int64_t> theorem_cutoff(const SetSpec& spec, double delta, double theta, double s);

// Counts for an arbitrary cutoff M >= 1.
CoverCounts build_cover_counts(const SetSpec& spec, double delta, double theta, std::int64_t M);
CoverCounts build_theorem_cover(const SetSpec& spec, double delta, double theta, double s);

double cover_cost(const CoverCounts& counts, double delta, double theta, double s);

// Grid cells of diameter delta^theta for points with |x| <= inner_radius and
// delta for the rest.
Cover enumerate_grid_cover(const PointCloud& cloud, double delta, double theta, double inner_radius);

// Every diameter within [delta, delta^theta].
bool window_ok(const Cover& cover);
// Every point lies within diameter/2 of some element centre.
bool covers(const Cover& cover, const PointCloud& cloud);

EstimateResult upper_dim_estimate(const SetSpec& spec, double theta, const std::vector<double>& deltas);

} // namespace idim

#endif // IDIM_COVERGEN_HPP
