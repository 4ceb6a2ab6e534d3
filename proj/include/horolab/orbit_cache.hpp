#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horolab/lattice.hpp"

namespace horolab {

// Reduced orbit samples of a horocycle orbit at unit time spacing:
// grid[j] = reduce(x0 n(j)), built incrementally by unit steps so that a
// reloaded cache reproduces the fresh computation bit for bit. Arbitrary
// orbit times are reached by one short flow from the nearest grid point,
// which keeps matrix entries bounded along arbitrarily long orbits.
class OrbitCache {
  public:
    explicit OrbitCache(const SurfacePoint& x0);

    const SurfacePoint& base() const { return grid_[0]; }

    // Ensures grid coverage of [0, t_max].
    void ensure(double t_max);

    // reduce(x0 n(t)) for t >= 0, via the grid.
    SurfacePoint at(double t);

    double max_cusp_height() const { return max_y_; }
    std::size_t size() const { return grid_.size(); }

    // Binary cache file: magic "HLAB", version u32 = 1, count u64, then
    // per sample (t, x, y, theta) as little-endian f64.
    void save(const std::string& path) const;

    // Loads a cache and verifies it belongs to the same base point; throws
    // CacheError on corruption, version mismatch or base-point mismatch.
    static OrbitCache load(const std::string& path, const SurfacePoint& x0);

  private:
    std::vector<SurfacePoint> grid_;
    double max_y_ = 0.0;
};

} // namespace horolab
