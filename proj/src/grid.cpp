#include "idim/grid.hpp"

#include "idim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace idim {

namespace {

// Distance from 0 to the closure of cell [i w, (i+1) w).
double min_dist(std::int64_t i, double w)
{
    return i >= 0 ? static_cast<double>(i) * w : static_cast<double>(-i - 1) * w;
}

// Largest j >= 0 with min_dist(j, w) <= y; the admissible j are [-1-J, J].
std::int64_t half_range(double y, double w)
{
    return static_cast<std::int64_t>(std::floor(y / w));
}

constexpr double kMaxColumns = 5.0e8;

// LSD radix sort on 11-bit digits, skipping digits shared by every key.
void radix_sort(std::vector<CellKey>::iterator first, std::vector<CellKey>::iterator last, std::vector<CellKey>& tmp)
{
    const auto n = static_cast<std::size_t>(last - first);
    if (n < 256) {
        std::sort(first, last);
        return;
    }
    CellKey varying = 0;
    for (auto it = first; it != last; ++it) varying |= *it ^ *first;
    tmp.resize(n);
    CellKey* src = &*first;
    CellKey* dst = tmp.data();
    constexpr int kBits = 11;
    constexpr std::size_t kBuckets = std::size_t{1} << kBits;
    std::vector<std::size_t> count(kBuckets);
    for (int shift = 0; shift < 64; shift += kBits) {
        if (((varying >> shift) & (kBuckets - 1)) == 0) continue;
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t i = 0; i < n; ++i) ++count[(src[i] >> shift) & (kBuckets - 1)];
        std::size_t sum = 0;
        for (auto& c : count) {
            const std::size_t t = c;
            c = sum;
            sum += t;
        }
        for (std::size_t i = 0; i < n; ++i) dst[count[(src[i] >> shift) & (kBuckets - 1)]++] = src[i];
        std::swap(src, dst);
    }
    if (src != &*first) std::copy(src, src + n, first);
}

// Half-width Y of the last coordinate over the column idx[0..d-2], or < 0.
double column_height(const TailRegion& r, const CellIndex& idx, double w)
{
    switch (r.kind) {
    case RegionKind::ball: {
        double m2 = 0.0;
        for (int k = 0; k + 1 < r.d; ++k) {
            const double m = min_dist(idx[k], w);
            m2 += m * m;
        }
        const double rest = r.a * r.a - m2;
        return rest < 0.0 ? -1.0 : std::sqrt(rest);
    }
    case RegionKind::ellipse: {
        const double m = min_dist(idx[0], w) / r.a;
        return m > 1.0 ? -1.0 : r.b * std::sqrt(1.0 - m * m);
    }
    case RegionKind::envelope: {
        if (idx[0] < 0 || static_cast<double>(idx[0]) * w > r.a) return -1.0;
        const double xmax = std::min(static_cast<double>(idx[0] + 1) * w, r.a);
        return r.power > 0.0 ? std::pow(xmax, r.power) : 1.0;
    }
    default: return -1.0;
    }
}

std::int64_t ball_columns(const TailRegion& r, CellIndex& idx, int k, double rest2, double w)
{
    if (k == r.d - 1) {
        const double y = column_height(r, idx, w);
        return y < 0.0 ? 0 : 2 * (half_range(y, w) + 1);
    }
    const std::int64_t J = half_range(std::sqrt(rest2), w);
    std::int64_t total = 0;
    for (std::int64_t i = -1 - J; i <= J; ++i) {
        const double m = min_dist(i, w);
        if (m * m > rest2) continue;
        idx[k] = i;
        total += ball_columns(r, idx, k + 1, rest2 - m * m, w);
    }
    return total;
}

} // namespace

Grid::Grid(int d, double scale, double offset) : d_(d), scale_(scale), offset_(offset)
{
    if (d < 1 || d > kMaxGridDim) throw ResourceError("grid counting supports 1 <= d <= 4");
    if (!(scale > 0.0)) throw std::invalid_argument("grid scale must be positive");
    side_ = scale / std::sqrt(static_cast<double>(d));
    inv_side_ = 1.0 / side_;
    bits_ = 64 / d;
    bias_ = d == 1 ? 0 : (std::int64_t{1} << (bits_ - 1));
    span_ = d == 1 ? 0 : (std::int64_t{1} << bits_);
}

void Grid::throw_range() { throw ResourceError("grid too fine for packed cell keys"); }

CellIndex Grid::unpack(CellKey key) const
{
    CellIndex idx{};
    if (d_ == 1) {
        idx[0] = static_cast<std::int64_t>(key);
        return idx;
    }
    const CellKey mask = (CellKey{1} << bits_) - 1;
    for (int k = d_ - 1; k >= 0; --k) {
        idx[k] = static_cast<std::int64_t>(key & mask) - bias_;
        key >>= bits_;
    }
    return idx;
}

std::vector<double> Grid::centre(const CellIndex& idx) const
{
    std::vector<double> c(static_cast<std::size_t>(d_));
    for (int k = 0; k < d_; ++k) c[k] = offset_ + (static_cast<double>(idx[k]) + 0.5) * side_;
    return c;
}

void KeySet::compact()
{
    if (sorted_ == keys_.size()) return;
    const auto mid = keys_.begin() + static_cast<std::ptrdiff_t>(sorted_);
    std::vector<CellKey> tmp;
    radix_sort(mid, keys_.end(), tmp);
    std::inplace_merge(keys_.begin(), mid, keys_.end());
    keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
    sorted_ = keys_.size();
    limit_ = std::max(kInitialLimit, 2 * keys_.size());
}

std::size_t KeySet::distinct()
{
    compact();
    return keys_.size();
}

std::int64_t region_cell_count(const TailRegion& r, double w)
{
    if (!(w > 0.0)) throw std::invalid_argument("cell side must be positive");
    switch (r.kind) {
    case RegionKind::empty: return 0;
    case RegionKind::interval: return half_range(r.a, w) + 1;
    case RegionKind::ball: {
        if (r.d == 1) return 2 * (half_range(r.a, w) + 1);
        if (std::pow(2.0 * r.a / w + 2.0, r.d - 1) > kMaxColumns) throw ResourceError("tail region too large to count");
        CellIndex idx{};
        return ball_columns(r, idx, 0, r.a * r.a, w);
    }
    case RegionKind::ellipse:
    case RegionKind::envelope: {
        if (2.0 * r.a / w + 2.0 > kMaxColumns) throw ResourceError("tail region too large to count");
        const std::int64_t J = half_range(r.a, w);
        const std::int64_t lo = r.kind == RegionKind::envelope ? 0 : -1 - J;
        std::int64_t total = 0;
        CellIndex idx{};
        for (std::int64_t i = lo; i <= J; ++i) {
            idx[0] = i;
            const double y = column_height(r, idx, w);
            if (y >= 0.0) total += 2 * (half_range(y, w) + 1);
        }
        return total;
    }
    }
    return 0;
}

bool region_meets_cell(const TailRegion& r, const CellIndex& idx, double w)
{
    switch (r.kind) {
    case RegionKind::empty: return false;
    case RegionKind::interval: return idx[0] >= 0 && static_cast<double>(idx[0]) * w <= r.a;
    case RegionKind::ball:
        if (r.d == 1) return min_dist(idx[0], w) <= r.a;
        [[fallthrough]];
    default: {
        const double y = column_height(r, idx, w);
        return y >= 0.0 && min_dist(idx[r.d - 1], w) <= y;
    }
    }
}

} // namespace idim
