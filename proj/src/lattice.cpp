#include "horolab/lattice.hpp"

#include <cmath>

namespace horolab {

void iwasawa_coordinates(const GroupElement& g, double& x, double& y, double& theta) {
    // g acts on i by Mobius; with det 1 the image is
    //   z = ((ac + bd) + i) / (c^2 + d^2),
    // and the bottom row is (sin(theta), cos(theta)) / sqrt(y).
    double den = g.c * g.c + g.d * g.d;
    x = (g.a * g.c + g.b * g.d) / den;
    y = 1.0 / den;
    theta = std::atan2(g.c, g.d);
    if (theta < 0.0) theta += M_PI;
    if (theta >= M_PI) theta -= M_PI;
}

GroupElement from_iwasawa(double x, double y, double theta) {
    if (!(y > 0.0)) throw DomainError("from_iwasawa: y must be positive");
    GroupElement g = compose(compose(n_of(x), a_of(std::log(y))), rotation_of(theta));
    return g;
}

namespace {

constexpr double kBoundaryTol = 1e-12;

// z -> z + m is left multiplication by (1 m; 0 1).
GroupElement translate_left(const GroupElement& g, double m) {
    return GroupElement{g.a + m * g.c, g.b + m * g.d, g.c, g.d};
}

// z -> -1/z is left multiplication by S = (0 -1; 1 0).
GroupElement invert_left(const GroupElement& g) {
    return GroupElement{-g.c, -g.d, g.a, g.b};
}

} // namespace

SurfacePoint reduce(const GroupElement& g, int max_iter) {
    GroupElement h = g;
    double x, y, theta;
    int iter = 0;
    for (;; ++iter) {
        if (iter >= max_iter)
            throw NumericError("reduce: translate/invert loop exceeded max_iter (numeric corruption?)");
        iwasawa_coordinates(h, x, y, theta);
        if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0.0))
            throw NumericError("reduce: non-finite Iwasawa coordinates");
        double m = std::floor(x + 0.5);
        if (m != 0.0) {
            h = translate_left(h, -m);
            iwasawa_coordinates(h, x, y, theta);
        }
        double r2 = x * x + y * y;
        if (r2 < 1.0 - kBoundaryTol) {
            h = invert_left(h);
            continue;
        }
        break;
    }
    // Boundary ties: |z| = 1 resolved to x <= 0, then x = +1/2 -> -1/2.
    double r2 = x * x + y * y;
    if (std::abs(r2 - 1.0) <= kBoundaryTol && x > kBoundaryTol) {
        h = invert_left(h);
        iwasawa_coordinates(h, x, y, theta);
    }
    if (std::abs(x - 0.5) <= kBoundaryTol) {
        h = translate_left(h, -1.0);
        iwasawa_coordinates(h, x, y, theta);
    }
    SurfacePoint p;
    p.rep = canonicalize(h);
    iwasawa_coordinates(p.rep, p.x, p.y, p.theta);
    return p;
}

bool is_reduced(const SurfacePoint& p, double tol) {
    if (!(p.y > 0.0)) return false;
    if (p.x < -0.5 - tol || p.x >= 0.5 + tol) return false;
    double r2 = p.x * p.x + p.y * p.y;
    if (r2 < 1.0 - tol) return false;
    if (std::abs(r2 - 1.0) <= tol && p.x > tol) return false;
    if (std::abs(p.x - 0.5) <= tol) return false; // tie resolved to -1/2
    return true;
}

SurfacePoint step_n(const SurfacePoint& p, double t) {
    return reduce(flow_n(p.rep, t));
}

SurfacePoint default_base_point() {
    return reduce(from_iwasawa(0.1234567, 1.2345678, 0.7654321));
}

} // namespace horolab
