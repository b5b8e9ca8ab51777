#ifndef IDIM_BOXCOUNT_HPP
#define IDIM_BOXCOUNT_HPP

#include "idim/estimate.hpp"
#include "idim/grid.hpp"
#include "idim/setlib.hpp"

#include <cstdint>
#include <vector>

namespace idim {

// Occupied cells of diameter `scale` (side scale/sqrt(d)), anchored at offset.
GridIndex grid_index(const PointCloud& cloud, double scale, double offset = 0.0);
std::int64_t count_boxes(const PointCloud& cloud, double scale, double offset = 0.0);

struct TwoScaleResult {
    double best_cost = 0.0;
    double best_inner_radius = 0.0;
};

// Points with |x| <= r take delta^theta cells, the rest delta cells; returns
// the cheapest r among the candidates. At theta = 1 both scales coincide and
// the cells are merged, so the cost does not depend on r.
TwoScaleResult two_scale_estimate(const PointCloud& cloud, double theta, double delta, double s,
                                  const std::vector<double>& inner_radii);

// 0, n log-spaced radii from delta to diameter, and diameter itself.
std::vector<double> inner_radius_ladder(double delta, double diameter, int n = 64);

// Counts for one split of the set at piece m: pieces >= m at delta^theta,
// pieces < m at delta.
struct SplitCounts {
    std::int64_t cutoff = 1;
    double inner_radius = 0.0;
    double inner = 0.0;
    double outer = 0.0;
};

struct ScaleCounts {
    double delta = 0.0;
    double theta = 1.0;
    double full = 0.0; // all of the set at delta
    std::vector<SplitCounts> splits;
};

// Streams the set piece by piece without materialising it. Tails whose pieces
// are closer than a cell side are counted from their bounding region.
ScaleCounts stream_counts(const SetSpec& spec, double delta, double theta, std::int64_t budget,
                          const std::vector<std::int64_t>& extra_cutoffs = {});

struct SplitChoice {
    double cost = 0.0;
    double inner_radius = 0.0;
    std::int64_t cutoff = 0; // 0 is the pure delta cover
};
SplitChoice best_split(const ScaleCounts& counts, double s);

// Throws ResourceError when the budget cannot resolve the smallest delta.
EstimateResult estimate_dimension(const SetSpec& spec, double theta, const std::vector<double>& deltas,
                                  std::int64_t budget);

} // namespace idim

#endif // IDIM_BOXCOUNT_HPP
