#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "horolab/group.hpp"
#include "horolab/jets.hpp"

namespace horolab {

// Casimir parameter mu > 0 with representation parameter nu = sqrt(1-4mu):
// purely imaginary for the principal series (mu >= 1/4), real in (0,1) for
// the complementary series (0 < mu < 1/4).
struct SeriesParams {
    double mu = 0.25;
    std::complex<double> nu{0.0, 0.0};

    bool complementary() const { return mu > 0.0 && mu < 0.25; }
};

SeriesParams series_from_mu(double mu);

// Element of a Kirillov model K_mu: a profile on R \ {0} with compact
// support [lo, hi] on one side of 0 (radius >= 1e-6), exposed as Taylor
// jets so operator chains carry exact derivatives. Profiles are immutable
// and shared; operator applications wrap them.
class KirillovVector {
  public:
    using C = std::complex<double>;
    using ProfileFn = std::function<TaylorJet(double, int)>;

    KirillovVector(SeriesParams params, double lo, double hi, ProfileFn fn);

    const SeriesParams& params() const { return params_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    TaylorJet jet(double x, int order) const { return fn_(x, order); }
    C value(double x) const { return fn_(x, 0).value(); }

  private:
    SeriesParams params_;
    double lo_, hi_;
    ProfileFn fn_;
};

// Height-1 smooth bump supported on (lo, hi).
KirillovVector kirillov_bump(SeriesParams params, double lo, double hi);

// Group actions: n(t) f(x) = e^{-itx} f(x), a(t) f(x) = f(e^t x).
enum class BorelFlow { N, A };
KirillovVector group_action(const KirillovVector& f, BorelFlow which, double t);

// f(lambda x), lambda > 0 (the scaling family of the embedding scan).
KirillovVector scale_vector(const KirillovVector& f, double lambda);

// Lie algebra actions X = -ix, Y = x d/dx, Z = i mu / x - i x d^2/dx^2.
KirillovVector apply_lie(const KirillovVector& f, LieDirection d);

// |x|^p f.
KirillovVector weight_power(const KirillovVector& f, double p);

// m_{H,k,a}(x) = (1/H) int_0^H t^k e^{i(a-x)t} dt. Total function of x.
std::complex<double> multiplier(double H, int k, double a, double x);

// The moments m_j(H, theta) = (1/H) int_0^H t^j e^{i theta t} dt for
// j = 0..jmax (used for multiplier derivatives: d^j/dx^j m_k = (-i)^j m_{k+j}).
void multiplier_moments(double H, int jmax, double theta, std::complex<double>* out);

// Model-side twisted average: pointwise product m_{H,k,a} * f.
KirillovVector twist_in_model(const KirillovVector& f, double H, int k, double a);

// sum over monomials B of degree <= s in {X, Y, Z} of
// (int |Bf|^2 dx/|x|)^{1/2}; s <= 2. Adaptive quadrature in log|x|.
double kirillov_norm(const KirillovVector& f, int s, double rel_tol = 1e-8);

// int |x|^{w} |f(x)|^2 dx/|x| over the support.
double weighted_l2_sq(const KirillovVector& f, double weight_exp, double rel_tol = 1e-8);

// ||f||_inf / S_{2,1}(f), the sup taken on a refined grid.
double sup_vs_s21_ratio(const KirillovVector& f);

// B^1 (sign +) integrates |x|^{-(1+nu)/2} f conj(g) over (0, inf),
// B^2 (sign -) over (-inf, 0). 0 < nu < 1.
std::complex<double> functional_B(int sign, double nu, const KirillovVector& f,
                                  const KirillovVector& g, double rel_tol = 1e-8);

// The exact Cauchy-Schwarz majorant of |B^1| + |B^2|:
//   sqrt(int |x|^{-(1+nu)/2} |f|^2 dx) * sqrt(int |x|^{-(1+nu)/2} |g|^2 dx),
// i.e. the product of S_{2,0} norms of the |x|^{(1-nu)/4}-weighted vectors.
// Equality holds when f = g is supported in (0, inf).
double cauchy_schwarz_majorant(double nu, const KirillovVector& f, const KirillovVector& g);

struct ScanRow {
    double nu, H, a, lhs, rhs, ratio;
    int s;
};

// Worst-case ratio of
//   kirillov_norm(twist(f,H,0,a), s)^2
// against (1 + |a|^{-1}) H^{4s-1} kirillov_norm(f, s+1)^2 over a grid.
double prop_l2_scan(const KirillovVector& f, int s, const std::vector<double>& H_grid,
                    const std::vector<double>& a_grid, std::vector<ScanRow>* rows = nullptr,
                    int threads = 1);

// Worst-case ratio of |B^1| + |B^2| on twisted pairs against
// (1 + |a|^{-1}) H^{-1} N(f) N(g), N = order-2 norm of the
// |x|^{(1-nu)/4}-weighted vector.
double bilinear_twist_scan(double nu, const KirillovVector& f, const KirillovVector& g,
                           const std::vector<double>& H_grid, const std::vector<double>& a_grid,
                           std::vector<ScanRow>* rows = nullptr, int threads = 1);

// C_mu = |Rhat(1)|^{1/2} for the complementary series; closed form
// sqrt(2 Gamma(nu) cos(pi nu / 2)) under the e^{-ix xi} transform
// convention.
double complementary_constant(double nu);

// Smooth compactly supported function on the line (support may cross 0).
struct LineVector {
    double lo = -1.0, hi = 1.0;
    std::function<double(double)> value;
};

LineVector line_bump(double lo, double hi);

// Relative discrepancy between the line-model norm
//   int int f(x) f(y) / |x-y|^{1-nu} dx dy
// and the Kirillov-side norm of C_mu |xi|^{(1-nu)/2} fhat(xi),
// both by independent quadratures.
double complementary_unitarity_check(double nu, const LineVector& f);

} // namespace horolab
