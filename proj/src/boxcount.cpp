#include "idim/boxcount.hpp"

#include "idim/covergen.hpp"
#include "idim/errors.hpp"
#include "idim/formula.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace idim {

namespace {

constexpr std::int64_t kMaxPieces = 200'000'000;

double norm(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

bool is_discrete(Family f) { return f == Family::fp || f == Family::isolated; }

// First piece of the analytically counted tail at cell side w.
std::int64_t core_index(const SetSpec& spec, double w)
{
    std::int64_t i;
    if (spec.family == Family::isolated) {
        // Points closer than w/4 to the origin sit in the cells around it.
        i = static_cast<std::int64_t>(std::ceil(std::pow(4.0 / w, 1.0 / spec.p)));
        while (i > 1 && std::pow(static_cast<double>(i - 1), -spec.p) <= 0.25 * w) --i;
    } else if (spec.family == Family::concentric && spec.radii.size() > 0) {
        i = spec.radii.size() + 1;
    } else {
        i = dense_from(spec, w);
    }
    if (i > kMaxPieces) throw ResourceError("too many pieces above the counting scale");
    return i;
}

// First piece lying entirely at sweep coordinate <= r, capped at cap.
std::int64_t piece_at_radius(const SetSpec& spec, double r, std::int64_t cap)
{
    if (piece_extent(spec, 1).hi <= r) return 1;
    std::int64_t lo = 1, hi = 2;
    while (hi < cap && piece_extent(spec, hi).hi > r) {
        lo = hi;
        hi *= 2;
    }
    if (hi >= cap) {
        if (piece_extent(spec, cap).hi > r) return cap;
        hi = cap;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (piece_extent(spec, mid).hi <= r) hi = mid;
        else lo = mid;
    }
    return hi;
}

double split_radius(const SetSpec& spec, std::int64_t m)
{
    const std::int64_t n = piece_count(spec);
    if (n > 0 && m > n) return 0.0;
    return piece_extent(spec, m).hi;
}

// Distinct cells of consecutive pieces. Pieces whose sweep extents are more
// than a cell diameter apart cannot share a cell, so groups are counted
// separately.
class SweepCounter {
public:
    SweepCounter(const SetSpec& spec, double scale, double step, const TailRegion* exclude)
        : spec_(spec), grid_(spec.d, scale), step_(step), exclude_(exclude),
          walk_(spec.d == 2 && spec.family != Family::isolated)
    {
    }

    void add(std::int64_t i)
    {
        const PieceExtent e = piece_extent(spec_, i);
        if (open_ && (e.lo > hi_ + grid_.scale() || e.hi < lo_ - grid_.scale())) flush();
        if (!open_) {
            lo_ = e.lo;
            hi_ = e.hi;
            open_ = true;
        } else {
            lo_ = std::min(lo_, e.lo);
            hi_ = std::max(hi_, e.hi);
        }
        const int d = spec_.d;
        if (!walk_) {
            sample_piece(spec_, i, step_, [&](std::span<const double> pts) {
                for (std::size_t k = 0; k < pts.size(); k += static_cast<std::size_t>(d))
                    mark(grid_.index_of(pts.subspan(k, static_cast<std::size_t>(d))));
            });
            return;
        }
        // Plane curves: every cell crossed by the chords between samples.
        bool started = false;
        std::array<double, 2> first{}, prev{};
        sample_piece(spec_, i, step_, [&](std::span<const double> pts) {
            for (std::size_t k = 0; k < pts.size(); k += 2) {
                const std::array<double, 2> x{pts[k], pts[k + 1]};
                if (started) walk(prev, x);
                else {
                    first = x;
                    mark(grid_.index_of(x));
                    started = true;
                }
                prev = x;
            }
        });
        if (!started) return;
        walk(prev, spec_.family == Family::concentric ? first : curve_point(spec_, static_cast<double>(i + 1)));
    }

    double count() { return flushed_ + static_cast<double>(group_.distinct()); }

    // Count with the open group's cells that meet region dropped.
    double count_without(const TailRegion& region)
    {
        double n = flushed_;
        for (CellKey k : group_.keys())
            if (!region_meets_cell(region, grid_.unpack(k), grid_.side())) n += 1.0;
        return n;
    }

    const Grid& grid() const { return grid_; }

private:
    void mark(const CellIndex& idx)
    {
        if (exclude_ && region_meets_cell(*exclude_, idx, grid_.side())) return;
        group_.add(grid_.pack(idx));
    }

    // Cells met by the segment from a to b, in order.
    void walk(const std::array<double, 2>& a, const std::array<double, 2>& b)
    {
        const CellIndex end = grid_.index_of(b);
        CellIndex cur = grid_.index_of(a);
        const double w = grid_.side(), o = grid_.offset();
        const double dx = b[0] - a[0], dy = b[1] - a[1];
        for (int guard = 0; (cur[0] != end[0] || cur[1] != end[1]) && guard < 1 << 20; ++guard) {
            double tx = INFINITY, ty = INFINITY;
            if (cur[0] != end[0] && dx != 0.0) tx = ((static_cast<double>(cur[0] + (dx > 0.0)) * w + o) - a[0]) / dx;
            if (cur[1] != end[1] && dy != 0.0) ty = ((static_cast<double>(cur[1] + (dy > 0.0)) * w + o) - a[1]) / dy;
            if (tx <= ty) cur[0] += dx > 0.0 ? 1 : -1;
            else cur[1] += dy > 0.0 ? 1 : -1;
            mark(cur);
        }
        mark(end);
    }

    void flush()
    {
        flushed_ += static_cast<double>(group_.distinct());
        group_.clear();
        open_ = false;
    }

    const SetSpec& spec_;
    Grid grid_;
    double step_;
    const TailRegion* exclude_;
    bool walk_;
    KeySet group_;
    double flushed_ = 0.0;
    bool open_ = false;
    double lo_ = 0.0, hi_ = 0.0;
};

double sampling_step(const SetSpec& spec, std::int64_t budget, double scale)
{
    return std::max(set_diameter(spec) / static_cast<double>(budget), 0.25 * scale);
}

} // namespace

GridIndex grid_index(const PointCloud& cloud, double scale, double offset)
{
    if (cloud.size() == 0) throw std::invalid_argument("cannot count boxes of an empty cloud");
    const Grid grid(cloud.d, scale, offset);
    KeySet keys;
    for (std::size_t i = 0; i < cloud.size(); ++i) keys.add(grid.key_of(cloud.point(i)));
    GridIndex g;
    g.scale = scale;
    g.d = cloud.d;
    g.offset = offset;
    g.occupied = keys.keys();
    return g;
}

std::int64_t count_boxes(const PointCloud& cloud, double scale, double offset)
{
    return static_cast<std::int64_t>(grid_index(cloud, scale, offset).size());
}

std::vector<double> inner_radius_ladder(double delta, double diameter, int n)
{
    if (!(delta > 0.0 && diameter > 0.0) || n < 2) throw std::invalid_argument("bad inner radius ladder");
    std::vector<double> r{0.0};
    const double a = std::log(std::min(delta, diameter)), b = std::log(diameter);
    for (int k = 0; k < n; ++k) r.push_back(std::exp(a + (b - a) * k / (n - 1)));
    r.push_back(diameter);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

TwoScaleResult two_scale_estimate(const PointCloud& cloud, double theta, double delta, double s,
                                  const std::vector<double>& inner_radii)
{
    if (cloud.size() == 0) throw std::invalid_argument("empty cloud");
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (inner_radii.empty()) throw std::invalid_argument("no inner radius candidates");

    const double big = std::pow(delta, theta);
    if (theta == 1.0) {
        const double c = static_cast<double>(count_boxes(cloud, delta)) * std::pow(delta, s);
        return {c, *std::min_element(inner_radii.begin(), inner_radii.end())};
    }

    const std::size_t n = cloud.size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = norm(cloud.point(i));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });

    std::vector<std::size_t> cand(inner_radii.size());
    std::iota(cand.begin(), cand.end(), std::size_t{0});
    std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return inner_radii[a] < inner_radii[b]; });

    const Grid fine(cloud.d, delta), coarse(cloud.d, big);
    std::vector<double> inner(inner_radii.size()), outer(inner_radii.size());
    std::unordered_set<CellKey> cells;
    std::size_t j = 0;
    for (std::size_t c : cand) {
        for (; j < n && r[order[j]] <= inner_radii[c]; ++j) cells.insert(coarse.key_of(cloud.point(order[j])));
        inner[c] = static_cast<double>(cells.size());
    }
    cells.clear();
    std::size_t k = n;
    for (auto it = cand.rbegin(); it != cand.rend(); ++it) {
        for (; k > 0 && r[order[k - 1]] > inner_radii[*it]; --k) cells.insert(fine.key_of(cloud.point(order[k - 1])));
        outer[*it] = static_cast<double>(cells.size());
    }

    TwoScaleResult best{std::numeric_limits<double>::infinity(), 0.0};
    const double ws = std::pow(big, s), ds = std::pow(delta, s);
    for (std::size_t c = 0; c < inner_radii.size(); ++c) {
        const double cost = inner[c] * ws + outer[c] * ds;
        if (cost < best.best_cost) best = {cost, inner_radii[c]};
    }
    return best;
}

ScaleCounts stream_counts(const SetSpec& spec, double delta, double theta, std::int64_t budget,
                          const std::vector<std::int64_t>& extra_cutoffs)
{
    validate(spec);
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");

    ScaleCounts out;
    out.delta = delta;
    out.theta = theta;
    const double big = std::pow(delta, theta);
    const double root_d = std::sqrt(static_cast<double>(spec.d));

    const std::int64_t core_out = core_index(spec, delta / root_d);
    const TailRegion region_out = tail_region(spec, core_out);
    const double core_out_cells = static_cast<double>(region_cell_count(region_out, delta / root_d));

    // Candidate cutoffs in increasing order, all <= core_out.
    std::vector<std::int64_t> cuts;
    if (theta < 1.0) {
        for (double r : inner_radius_ladder(delta, set_diameter(spec))) cuts.push_back(piece_at_radius(spec, r, core_out));
        for (std::int64_t m : extra_cutoffs)
            if (m >= 1) cuts.push_back(std::min(m, core_out));
        cuts.push_back(1);
        cuts.push_back(core_out);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    }

    // Outer pass at delta, from the outermost piece inwards.
    std::vector<double> outer(cuts.size(), 0.0);
    {
        SweepCounter pass(spec, delta, sampling_step(spec, budget, delta), nullptr);
        std::size_t c = 0;
        for (std::int64_t i = 1; i < core_out; ++i) {
            for (; c < cuts.size() && cuts[c] == i; ++c) outer[c] = pass.count();
            pass.add(i);
        }
        for (; c < cuts.size(); ++c) outer[c] = pass.count();
        out.full = pass.count_without(region_out) + core_out_cells;
    }
    if (theta == 1.0) return out;

    // Inner pass at delta^theta, from the tail outwards.
    const std::int64_t core_in = std::min(core_index(spec, big / root_d), core_out);
    const TailRegion region_in = tail_region(spec, core_in);
    std::vector<double> inner(cuts.size(), 0.0);
    for (std::size_t c = 0; c < cuts.size(); ++c)
        if (cuts[c] >= core_in) inner[c] = static_cast<double>(region_cell_count(tail_region(spec, cuts[c]), big / root_d));
    {
        const double core_cells = static_cast<double>(region_cell_count(region_in, big / root_d));
        SweepCounter pass(spec, big, sampling_step(spec, budget, big), &region_in);
        auto c = static_cast<std::ptrdiff_t>(cuts.size()) - 1;
        while (c >= 0 && cuts[c] >= core_in) --c;
        for (std::int64_t i = core_in - 1; i >= 1 && c >= 0; --i) {
            pass.add(i);
            for (; c >= 0 && cuts[c] == i; --c) inner[c] = core_cells + pass.count();
        }
    }

    for (std::size_t c = 0; c < cuts.size(); ++c)
        out.splits.push_back({cuts[c], split_radius(spec, cuts[c]), inner[c], outer[c]});
    return out;
}

SplitChoice best_split(const ScaleCounts& counts, double s)
{
    const double ds = std::pow(counts.delta, s);
    const double ws = std::pow(counts.delta, counts.theta * s);
    SplitChoice best{counts.full * ds, 0.0, 0};
    for (const auto& sp : counts.splits) {
        const double c = sp.inner * ws + sp.outer * ds;
        if (c < best.cost) best = {c, sp.inner_radius, sp.cutoff};
    }
    return best;
}

EstimateResult estimate_dimension(const SetSpec& spec, double theta, const std::vector<double>& deltas,
                                  std::int64_t budget)
{
    validate(spec);
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
    if (deltas.size() < 4) throw std::invalid_argument("estimate needs at least four deltas");
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    for (double dl : deltas)
        if (!(dl > 0.0 && dl < 1.0)) throw std::invalid_argument("deltas must lie in (0, 1)");

    const double dmin = *std::min_element(deltas.begin(), deltas.end());
    if (is_discrete(spec.family)) {
        const std::int64_t need = core_index(spec, dmin / std::sqrt(static_cast<double>(spec.d)));
        if (need > budget)
            throw ResourceError("budget " + std::to_string(budget) + " below the " + std::to_string(need) +
                                " points needed at the smallest delta");
    } else if (set_diameter(spec) / static_cast<double>(budget) >= dmin / 4.0) {
        throw ResourceError("budget too small: sampling step must be below the smallest delta / 4");
    }

    EstimateResult res;
    res.theta = theta;
    res.target = formula_value(spec, theta);
    for (double dl : deltas) {
        std::vector<std::int64_t> extra;
        if (res.target) {
            if (auto m = theorem_cutoff(spec, dl, theta, *res.target)) extra.push_back(*m);
        }
        const ScaleCounts counts = stream_counts(spec, dl, theta, budget, extra);
        const double s = bisect_exponent([&](double x) { return best_split(counts, x).cost; }, spec.d);
        const SplitChoice ch = best_split(counts, s);
        res.rows.push_back({dl, s, ch.inner_radius, ch.cost - 1.0, ch.cutoff});
    }
    finish_estimate(res);
    return res;
}

} // namespace idim
