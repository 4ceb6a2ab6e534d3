#pragma once

#include <array>
#include <functional>

#include "horolab/errors.hpp"

namespace horolab {

// One of the three sl(2,R) basis directions:
//   Y = diag(1/2, -1/2)   exp(tY) = a(t),
//   X = (0 1; 0 0)        exp(tX) = n(t),
//   Z = (0 0; 1 0)        exp(tZ) = lower unipotent.
enum class LieDirection { Y, X, Z };

// Element of PSL(2,R): unimodular 2x2 matrix with the sign fixed so that
// the first nonzero entry of the top row is nonnegative.
struct GroupElement {
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;

    double det() const { return a * d - b * c; }
};

// Renormalizes det to 1 (divide by sqrt(det)) and fixes the PSL sign.
// Throws NumericError on non-finite entries or nonpositive determinant.
GroupElement canonicalize(GroupElement g);

bool is_canonical(const GroupElement& g, double tol = 1e-10);

// Matrix product, re-canonicalized.
GroupElement compose(const GroupElement& g, const GroupElement& h);

// One-parameter subgroups.
GroupElement n_of(double t);       // upper unipotent (1 t; 0 1)
GroupElement a_of(double t);       // diagonal (e^{t/2}, e^{-t/2})
GroupElement lower_of(double t);   // lower unipotent (1 0; t 1)
GroupElement rotation_of(double theta); // (cos -sin; sin cos)

// Right actions g n(t), g a(t).
GroupElement flow_n(const GroupElement& g, double t);
GroupElement flow_a(const GroupElement& g, double t);

// exp(t * direction) in closed form.
GroupElement exp_direction(LieDirection d, double t);

// exp(s * M) for traceless M = (p q; r -p), via the cosh/cos closed form.
GroupElement exp_traceless(double p, double q, double r, double s);

// Central finite difference of f along exp(h*d):
//   (f(g exp(h d)) - f(g exp(-h d))) / (2h).
// Requires h in [1e-7, 1e-3]. The generic fallback; observables expose an
// exact jet-based path for their own chart derivatives.
double lie_derivative(const std::function<double(const GroupElement&)>& f,
                      const GroupElement& g, LieDirection d, double h = 1e-5);

// Central finite difference along an arbitrary traceless direction
// W = p*Y' ... given directly by matrix entries (p q; r -p). The step is
// taken along the normalized direction so truncation error does not blow
// up with |W|; the returned value is the derivative along W itself.
double lie_derivative_traceless(const std::function<double(const GroupElement&)>& f,
                                const GroupElement& g, double p, double q, double r,
                                double h = 1e-5);

} // namespace horolab
