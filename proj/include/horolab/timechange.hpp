#pragma once

#include <array>

#include "horolab/observable.hpp"
#include "horolab/twisted.hpp"

namespace horolab {

// Smooth time change rho = 1 + g with sup|g| <= 1/2, so rho stays in
// [1/2, 3/2] and the cocycle tau(x, t) = int_0^t rho(x n(s)) ds is
// strictly increasing.
class TimeChange {
  public:
    explicit TimeChange(Observable g);

    static TimeChange identity() { return TimeChange(Observable::constant(0.0)); }

    double rho(const SurfacePoint& p) const { return 1.0 + g_.value(p); }
    double rho_chart(double x, double y, double theta) const {
        return 1.0 + g_.value_chart(x, y, theta);
    }
    const Observable& perturbation() const { return g_; }

  private:
    Observable g_;
};

// tau(x, t) = int_0^t rho(x n(s)) ds by panel quadrature; t may be
// negative (|t| <= 1e6).
double cocycle_tau(const TimeChange& tc, const SurfacePoint& x, double t,
                   const QuadratureSpec& q = {});

// The unique t >= 0 with tau(x, t) = tau_target, by bracketed Newton with
// rho as the derivative; |tau(x,t) - target| <= 1e-9 on return.
double invert_tau(const TimeChange& tc, const SurfacePoint& x, double tau_target,
                  const QuadratureSpec& q = {});

// n^rho_tau(x) = x n(invert_tau(tau)).
SurfacePoint timechange_flow(const TimeChange& tc, const SurfacePoint& x, double tau,
                             const QuadratureSpec& q = {});

// int f rho dmu (the X_rho-invariant volume, not renormalized).
double rho_volume_integral(const TimeChange& tc, const Observable& f);

// (1/T) int_0^T psi(t) f(x n^rho(t)) dt, computed by the substitution
// t = tau(x0, s): (1/T) int_0^{S} psi(tau(x0,s)) f(x0 n(s)) rho(x0 n(s)) ds
// with S = invert_tau(T). The phase needs tau at every node; each panel
// integrates rho spectrally (Legendre series) to carry tau to its nodes.
TwistReport twisted_average_rho(const Observable& f, const SurfacePoint& x0, const TimeChange& tc,
                                const TwistParams& p, const QuadratureSpec& q = {});

// f0 - c f1 with c = (int f0 rho dmu)/(int f1 rho dmu): zero average
// against the rho-weighted volume.
Observable zero_rho_average_pair(const TimeChange& tc, const Observable& f0, const Observable& f1);

// Residuals of [X_rho, Y] f = ((Y rho)/rho - 1) X_rho f at a sample point:
// both sides evaluated independently (jets inside, one finite difference
// for the outer Y).
double commutation_residual(const TimeChange& tc, const Observable& f, const SurfacePoint& p,
                            double h = 1e-5);

} // namespace horolab
