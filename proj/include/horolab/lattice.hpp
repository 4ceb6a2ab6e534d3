#pragma once

#include "horolab/group.hpp"

namespace horolab {

// A point of the modular quotient: the PSL(2,Z)-reduced representative
// together with its Iwasawa coordinates for g = n(x) a(log y) k(theta).
// The base point z = x + iy lies in the standard fundamental domain
// (|x| <= 1/2, |z| >= 1, ties broken toward x <= 0), theta in [0, pi).
struct SurfacePoint {
    GroupElement rep;
    double x = 0.0;
    double y = 1.0;
    double theta = 0.0;
};

// Iwasawa coordinates of an arbitrary group element (no reduction).
void iwasawa_coordinates(const GroupElement& g, double& x, double& y, double& theta);

// Builds n(x) a(log y) k(theta).
GroupElement from_iwasawa(double x, double y, double theta);

// Canonical representative of the coset PSL(2,Z) g via the standard
// translate/invert loop. Throws NumericError after max_iter steps
// (signals numeric corruption; the loop terminates for valid input).
SurfacePoint reduce(const GroupElement& g, int max_iter = 10000);

bool is_reduced(const SurfacePoint& p, double tol = 1e-12);

// reduce(flow_n(p, t)): the single orbit-advance primitive.
SurfacePoint step_n(const SurfacePoint& p, double t);

// Generic base point for experiments: away from periodic horocycles and
// elliptic fixed points.
SurfacePoint default_base_point();

} // namespace horolab
