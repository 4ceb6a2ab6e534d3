#include "horolab/orbit_cache.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace horolab {

OrbitCache::OrbitCache(const SurfacePoint& x0) {
    SurfacePoint p = is_reduced(x0) ? x0 : reduce(x0.rep);
    grid_.push_back(p);
    max_y_ = p.y;
}

void OrbitCache::ensure(double t_max) {
    if (!(t_max >= 0.0)) throw DomainError("OrbitCache::ensure: negative horizon");
    std::size_t need = static_cast<std::size_t>(std::floor(t_max)) + 1;
    while (grid_.size() < need + 1) {
        SurfacePoint next = step_n(grid_.back(), 1.0);
        // Snap the representative to the matrix rebuilt from the stored
        // coordinate triple: a reloaded cache then continues the orbit bit
        // for bit, because the loader reconstructs through the same map.
        next.rep = from_iwasawa(next.x, next.y, next.theta);
        if (next.y > max_y_) max_y_ = next.y;
        grid_.push_back(next);
    }
}

SurfacePoint OrbitCache::at(double t) {
    if (!(t >= 0.0)) throw DomainError("OrbitCache::at: negative time");
    double fl = std::floor(t);
    std::size_t j = static_cast<std::size_t>(fl);
    if (j + 1 > grid_.size()) ensure(t);
    double frac = t - fl;
    if (frac == 0.0) return grid_[j];
    SurfacePoint p = step_n(grid_[j], frac);
    if (p.y > max_y_) max_y_ = p.y;
    return p;
}

namespace {
constexpr char kMagic[4] = {'H', 'L', 'A', 'B'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    std::fwrite(b, 1, 4, f);
}
void put_u64(std::FILE* f, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    std::fwrite(b, 1, 8, f);
}
void put_f64(std::FILE* f, double x) {
    std::uint64_t v;
    std::memcpy(&v, &x, 8);
    put_u64(f, v);
}
bool get_u32(std::FILE* f, std::uint32_t& v) {
    unsigned char b[4];
    if (std::fread(b, 1, 4, f) != 4) return false;
    v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return true;
}
bool get_u64(std::FILE* f, std::uint64_t& v) {
    unsigned char b[8];
    if (std::fread(b, 1, 8, f) != 8) return false;
    v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return true;
}
bool get_f64(std::FILE* f, double& x) {
    std::uint64_t v;
    if (!get_u64(f, v)) return false;
    std::memcpy(&x, &v, 8);
    return true;
}
} // namespace

void OrbitCache::save(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw CacheError("OrbitCache::save: cannot open " + path);
    std::fwrite(kMagic, 1, 4, f);
    put_u32(f, kVersion);
    put_u64(f, static_cast<std::uint64_t>(grid_.size()));
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        put_f64(f, static_cast<double>(j));
        put_f64(f, grid_[j].x);
        put_f64(f, grid_[j].y);
        put_f64(f, grid_[j].theta);
    }
    std::fclose(f);
}

OrbitCache OrbitCache::load(const std::string& path, const SurfacePoint& x0) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw CacheError("OrbitCache::load: cannot open " + path);
    struct Closer {
        std::FILE* f;
        ~Closer() { std::fclose(f); }
    } closer{f};

    char magic[4];
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw CacheError("OrbitCache::load: bad magic");
    std::uint32_t version = 0;
    if (!get_u32(f, version) || version != kVersion)
        throw CacheError("OrbitCache::load: unsupported version");
    std::uint64_t count = 0;
    if (!get_u64(f, count) || count == 0) throw CacheError("OrbitCache::load: empty cache");

    OrbitCache cache(x0);
    for (std::uint64_t j = 0; j < count; ++j) {
        double t, x, y, theta;
        if (!get_f64(f, t) || !get_f64(f, x) || !get_f64(f, y) || !get_f64(f, theta))
            throw CacheError("OrbitCache::load: truncated file");
        if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0.0))
            throw CacheError("OrbitCache::load: corrupt sample");
        if (j == 0) {
            // Samples must belong to this base point.
            if (std::abs(x - cache.grid_[0].x) > 1e-12 || std::abs(y - cache.grid_[0].y) > 1e-12 ||
                std::abs(theta - cache.grid_[0].theta) > 1e-12)
                throw CacheError("OrbitCache::load: base point mismatch");
            continue;
        }
        SurfacePoint p;
        p.rep = from_iwasawa(x, y, theta);
        p.x = x;
        p.y = y;
        p.theta = theta;
        cache.grid_.push_back(p);
        if (y > cache.max_y_) cache.max_y_ = y;
    }
    return cache;
}

} // namespace horolab
