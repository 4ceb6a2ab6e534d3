#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "horolab/observable.hpp"
#include "horolab/orbit_cache.hpp"

namespace horolab {

// Parameters of a twisted average (1/T) int_0^T e^{iat} t^k f(x n(t)) dt.
// a = 0 is the plain (untwisted) path; H is the smoothing window.
struct TwistParams {
    double a = 0.0;
    double T = 1.0;
    int k = 0;
    double H = 0.0;
};

void validate(const TwistParams& p);

struct TwistReport {
    std::complex<double> value{};
    double abs_error_estimate = 0.0;
    std::uint64_t samples_used = 0;
    double max_cusp_height = 0.0;
    bool refinement_warning = false;
};

// Oscillation-resolving panel length: min(1, pi/(4|a|)), or the explicit
// override from the spec.
double twist_panel_length(double a, const QuadratureSpec& q);

// (1/T) int_0^T e^{iat} t^k f(x0 n(t)) dt by composite Gauss-Legendre
// panels with half-panel refinement as the error estimate. The orbit is
// advanced through a unit-spacing reduced grid.
TwistReport twisted_average(const Observable& f, const SurfacePoint& x0, const TwistParams& p,
                            const QuadratureSpec& q = {});

// Same, reusing a caller-owned orbit cache.
TwistReport twisted_average(const Observable& f, OrbitCache& orbit, const TwistParams& p,
                            const QuadratureSpec& q = {});

// nu_T(f) = twisted average at a = 0, k = 0.
TwistReport plain_average(const Observable& f, const SurfacePoint& x0, double T,
                          const QuadratureSpec& q = {});

// |(f * sigma_H) * sigma_T^k (x0) - f * sigma_T^k (x0)|, the outer
// smoothed integral computed from the double-integral definition (inner
// window integrals from a cumulative antiderivative along the orbit).
double smoothing_discrepancy(const Observable& f, const SurfacePoint& x0, const TwistParams& p,
                             const QuadratureSpec& q = {});

// Both sides of the Cauchy-Schwarz step, computed on one shared node set
// so the discrete inequality lhs <= rhs is exact:
//   lhs = |(f * sigma_H) * sigma_T^k (x0)|^2,
//   rhs = T^{2k} nu_T(|f * sigma_H|^2).
struct CauchySchwarzSides {
    double lhs = 0.0;
    double rhs = 0.0;
};
CauchySchwarzSides cauchy_schwarz_sides(const Observable& f, const SurfacePoint& x0,
                                        const TwistParams& p, const QuadratureSpec& q = {});

// Residuals of the three derivative-transport identities
//   X(n(t).f) = n(t).(X f),
//   Y(n(t).f) = n(t).((Y + tX) f),
//   Z(n(t).f) = n(t).((Z - 2tY - t^2 X) f),
// evaluated at x0 by central finite differences (|t| <= 1e3).
std::array<double, 3> derivative_transport_check(const Observable& f, const SurfacePoint& x0,
                                                 double t, double h = 1e-5);

// One pass to max(T_list) with shared orbit cache; one report per T.
std::vector<std::pair<double, TwistReport>> decay_curve(const Observable& f,
                                                        const SurfacePoint& x0, double a, int k,
                                                        const std::vector<double>& T_list,
                                                        const QuadratureSpec& q = {});
std::vector<std::pair<double, TwistReport>> decay_curve(const Observable& f, OrbitCache& orbit,
                                                        double a, int k,
                                                        const std::vector<double>& T_list,
                                                        const QuadratureSpec& q = {});

} // namespace horolab
