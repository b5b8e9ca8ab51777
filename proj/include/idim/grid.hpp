#ifndef IDIM_GRID_HPP
#define IDIM_GRID_HPP

#include "idim/setlib.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace idim {

inline constexpr int kMaxGridDim = 4;

using CellKey = std::uint64_t;
using CellIndex = std::array<std::int64_t, kMaxGridDim>;

// Half-open cubes [k w + o, (k+1) w + o) with w = scale/sqrt(d), so each
// cell has diameter exactly scale.
class Grid {
public:
    Grid(int d, double scale, double offset = 0.0);

    int d() const { return d_; }
    double scale() const { return scale_; }
    double side() const { return side_; }
    double offset() const { return offset_; }

    CellIndex index_of(std::span<const double> x) const
    {
        CellIndex idx{};
        for (int k = 0; k < d_; ++k) idx[k] = static_cast<std::int64_t>(std::floor((x[k] - offset_) * inv_side_));
        return idx;
    }
    // Throws ResourceError when an index does not fit the packed key.
    CellKey pack(const CellIndex& idx) const
    {
        if (d_ == 1) return static_cast<CellKey>(idx[0]);
        CellKey key = 0;
        for (int k = 0; k < d_; ++k) {
            const std::int64_t v = idx[k] + bias_;
            if (v < 0 || v >= span_) throw_range();
            key = (key << bits_) | static_cast<CellKey>(v);
        }
        return key;
    }
    CellIndex unpack(CellKey key) const;
    CellKey key_of(std::span<const double> x) const { return pack(index_of(x)); }
    std::vector<double> centre(const CellIndex& idx) const;

private:
    int d_;
    double scale_;
    double side_;
    double inv_side_;
    double offset_;
    int bits_;
    std::int64_t bias_;
    std::int64_t span_;

    [[noreturn]] static void throw_range();
};

// Occupied cells of a grid, sorted and deduplicated.
struct GridIndex {
    double scale = 0.0;
    int d = 1;
    double offset = 0.0;
    std::vector<CellKey> occupied;

    std::size_t size() const { return occupied.size(); }
};

// Sorted-vector set of keys with cheap appends.
class KeySet {
public:
    void add(CellKey k)
    {
        if (!keys_.empty() && keys_.back() == k) return;
        keys_.push_back(k);
        if (keys_.size() >= limit_) compact();
    }
    void compact();
    std::size_t distinct();
    void clear()
    {
        keys_.clear();
        sorted_ = 0;
        limit_ = kInitialLimit;
    }
    const std::vector<CellKey>& keys() { compact(); return keys_; }

private:
    static constexpr std::size_t kInitialLimit = std::size_t{1} << 22;
    std::vector<CellKey> keys_;
    std::size_t sorted_ = 0;
    std::size_t limit_ = kInitialLimit;
};

// Cells of the origin-anchored grid of the given side that meet a tail region.
std::int64_t region_cell_count(const TailRegion& region, double side);
bool region_meets_cell(const TailRegion& region, const CellIndex& idx, double side);

} // namespace idim

#endif // IDIM_GRID_HPP
