#pragma once

#include <optional>
#include <vector>

#include "horolab/jets.hpp"
#include "horolab/lattice.hpp"

namespace horolab {

// Smooth compactly supported bump in Iwasawa chart coordinates:
//   f(x, y, th) = amplitude * B((x-cx)/wx) B((log y - log cy)/wy) B((th-ct)/wt)
// with B(u) = exp(-1/(1-u^2)) on |u| < 1 and 0 outside.
struct BumpSpec {
    double cx = 0.0, cy = 2.0, ctheta = 1.5;
    double wx = 0.2, wy = 0.3, wtheta = 0.8;
    double amplitude = 1.0;

    bool operator==(const BumpSpec&) const = default;
};

// Quadrature policy for orbit integrals.
struct QuadratureSpec {
    double panel_length = 0.0;      // flow-time per panel; 0 = automatic
    int nodes_per_panel = 20;       // in [4, 32]
    double target_rel_error = 1e-9; // in [1e-12, 1e-3]

    bool operator==(const QuadratureSpec&) const = default;
};

void validate(const QuadratureSpec& q);

enum class NormKind { L2, Sup };

using LieWord = std::vector<LieDirection>;

// Derivative rates of the Iwasawa chart coordinates along a traceless
// direction W = (p q; r -p): d/ds of (x, y, theta) of g exp(sW) at s = 0.
void iwasawa_rates(const GroupElement& g, double p, double q, double r,
                   double& dx, double& dy, double& dtheta);

// Test function on the quotient. Immutable after construction, pure and
// thread-safe to evaluate. Kinds:
//   Bump            - single chart bump,
//   PairDifference  - b0 - coeff * b1 with disjoint supports,
//   Constant        - constant value (full domain, special-cased).
class Observable {
  public:
    enum class Kind { Bump, PairDifference, Constant };

    static Observable bump(const BumpSpec& b);
    static Observable constant(double value);
    static Observable pair_difference(const BumpSpec& b0, const BumpSpec& b1, double coeff);

    Kind kind() const { return kind_; }
    double constant_value() const { return const_value_; }
    const BumpSpec& bump_spec(int i) const { return i == 0 ? b0_ : b1_; }
    double pair_coeff() const { return coeff_; }

    double value(const SurfacePoint& p) const { return value_chart(p.x, p.y, p.theta); }
    double value_chart(double x, double y, double theta) const;
    // Reduces first; the orbit modules feed already-reduced points.
    double value_group(const GroupElement& g) const { return value(reduce(g)); }

    // Exact derivative (B f)(p) for the Lie monomial B = W1 W2 ... Wk
    // (word applied operator-style, leftmost outermost), via multilinear
    // jets through the chart. k <= 4.
    double lie_monomial(const SurfacePoint& p, const LieWord& word) const;
    double lie_monomial_chart(double x, double y, double theta, const LieWord& word) const;

    // Chart-coordinate gradient (df/dx, df/dy, df/dtheta).
    void chart_gradient(double x, double y, double theta, double grad[3]) const;

  private:
    Observable() = default;
    Kind kind_ = Kind::Constant;
    BumpSpec b0_, b1_;
    double coeff_ = 0.0;
    double const_value_ = 0.0;
};

// Builders mirroring construction-time validation: support margins are
// checked here (throws ConstructionError).
Observable make_bump(const BumpSpec& b);

// f0 - (vol f0 / vol f1) f1; requires disjoint supports and a
// non-degenerate normalizer |vol f1| > 1e-12.
Observable make_zero_average_pair(const Observable& f0, const Observable& f1);

// Normalized Haar integral of f over the quotient (mu(M) = 1); for bumps
// this is a product of three 1-d integrals at machine accuracy.
double volume_integral(const Observable& f);

// Integral of f * g (used for rho-weighted volumes). Tensor quadrature
// over f's support box.
double product_volume_integral(const Observable& f, const Observable& g);

// Sobolev norm S_{p,s}(f) = sum over monomials B of degree <= s in
// {Y, X, Z} of the L^p norm of B f. s <= 4; p in {2, inf}.
double sobolev_norm_estimate(const Observable& f, int s, NormKind p, int threads = 1);

// All words over {Y, X, Z} of length <= s, in a fixed deterministic order.
std::vector<LieWord> lie_words_up_to(int s);

// Default experiment pair: two disjoint bumps combined to zero average.
Observable default_zero_average_observable();
BumpSpec default_bump0();
BumpSpec default_bump1();

} // namespace horolab
