#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "horolab/errors.hpp"

namespace horolab {

// ---------------------------------------------------------------------------
// TaylorJet: univariate truncated Taylor series with complex coefficients.
//
// coef[j] is the j-th Taylor coefficient f^{(j)}(x0)/j!. All arithmetic is
// exact truncation, so derivatives extracted from a jet carry no step-size
// error. Orders up to kMaxOrder cover every operator chain in the Kirillov
// module (degree-2 monomials in X, Y, Z need four derivatives of the
// profile, plus slack for nested combinators).
// ---------------------------------------------------------------------------
class TaylorJet {
  public:
    static constexpr int kMaxOrder = 16;
    using C = std::complex<double>;

    TaylorJet() : order_(0) { coef_.fill(C{}); }
    explicit TaylorJet(int order) : order_(clamp_order(order)) { coef_.fill(C{}); }

    static TaylorJet constant(C v, int order) {
        TaylorJet j(order);
        j.coef_[0] = v;
        return j;
    }
    // The identity function x at base point x0.
    static TaylorJet variable(double x0, int order) {
        TaylorJet j(order);
        j.coef_[0] = x0;
        if (j.order_ >= 1) j.coef_[1] = 1.0;
        return j;
    }

    int order() const { return order_; }
    C coef(int j) const { return j <= order_ ? coef_[static_cast<std::size_t>(j)] : C{}; }
    void set_coef(int j, C v) { coef_[static_cast<std::size_t>(j)] = v; }
    C value() const { return coef_[0]; }
    // f^{(j)}(x0) = j! * coef[j]
    C derivative(int j) const {
        double fact = 1.0;
        for (int i = 2; i <= j; ++i) fact *= i;
        return coef(j) * fact;
    }

    TaylorJet truncated(int order) const {
        TaylorJet r(order);
        for (int j = 0; j <= r.order_; ++j) r.coef_[static_cast<std::size_t>(j)] = coef(j);
        return r;
    }

    // d/dx: coefficients shift down one order.
    TaylorJet derived() const {
        TaylorJet r(order_ > 0 ? order_ - 1 : 0);
        for (int j = 0; j <= r.order_; ++j)
            r.coef_[static_cast<std::size_t>(j)] = coef(j + 1) * static_cast<double>(j + 1);
        return r;
    }

    friend TaylorJet operator+(const TaylorJet& a, const TaylorJet& b) {
        TaylorJet r(std::max(a.order_, b.order_));
        for (int j = 0; j <= r.order_; ++j) r.coef_[static_cast<std::size_t>(j)] = a.coef(j) + b.coef(j);
        return r;
    }
    friend TaylorJet operator-(const TaylorJet& a, const TaylorJet& b) {
        TaylorJet r(std::max(a.order_, b.order_));
        for (int j = 0; j <= r.order_; ++j) r.coef_[static_cast<std::size_t>(j)] = a.coef(j) - b.coef(j);
        return r;
    }
    friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
        TaylorJet r(std::max(a.order_, b.order_));
        for (int j = 0; j <= r.order_; ++j) {
            C s{};
            for (int i = 0; i <= j; ++i) s += a.coef(i) * b.coef(j - i);
            r.coef_[static_cast<std::size_t>(j)] = s;
        }
        return r;
    }
    friend TaylorJet operator*(C s, const TaylorJet& a) {
        TaylorJet r = a;
        for (int j = 0; j <= r.order_; ++j) r.coef_[static_cast<std::size_t>(j)] *= s;
        return r;
    }
    friend TaylorJet operator*(const TaylorJet& a, C s) { return s * a; }
    friend TaylorJet operator*(double s, const TaylorJet& a) { return C(s, 0.0) * a; }

    // 1/f, requires f(x0) != 0.
    TaylorJet recip() const {
        if (coef_[0] == C{}) throw NumericError("TaylorJet::recip: zero constant term");
        TaylorJet r(order_);
        C inv0 = 1.0 / coef_[0];
        r.coef_[0] = inv0;
        for (int j = 1; j <= order_; ++j) {
            C s{};
            for (int i = 1; i <= j; ++i) s += coef(i) * r.coef(j - i);
            r.coef_[static_cast<std::size_t>(j)] = -inv0 * s;
        }
        return r;
    }

    // exp(f); standard series recurrence g' = f' g.
    TaylorJet exp() const {
        TaylorJet r(order_);
        r.coef_[0] = std::exp(coef_[0]);
        for (int j = 1; j <= order_; ++j) {
            C s{};
            for (int i = 1; i <= j; ++i) s += static_cast<double>(i) * coef(i) * r.coef(j - i);
            r.coef_[static_cast<std::size_t>(j)] = s / static_cast<double>(j);
        }
        return r;
    }

    // log(f) for real-positive constant term; g' = f'/f.
    TaylorJet log() const {
        if (!(coef_[0].real() > 0.0) || coef_[0].imag() != 0.0)
            throw NumericError("TaylorJet::log: needs positive real constant term");
        TaylorJet r(order_);
        r.coef_[0] = std::log(coef_[0].real());
        TaylorJet quot = derived() * truncated(order_ > 0 ? order_ - 1 : 0).recip();
        for (int j = 1; j <= order_; ++j) r.coef_[static_cast<std::size_t>(j)] = quot.coef(j - 1) / static_cast<double>(j);
        return r;
    }

    // |x0|^p composed with the jet; valid while the constant term keeps a
    // fixed sign (supports avoid 0 throughout the Kirillov module).
    TaylorJet abs_pow(double p) const {
        double x0 = coef_[0].real();
        if (x0 == 0.0) throw NumericError("TaylorJet::abs_pow at zero");
        double sign = x0 > 0 ? 1.0 : -1.0;
        TaylorJet ax = sign * (*this);           // |x| near x0
        TaylorJet l = ax.log();
        return (p * l).exp();
    }

  private:
    static int clamp_order(int order) {
        if (order < 0) order = 0;
        if (order > kMaxOrder) throw DomainError("TaylorJet order above limit");
        return order;
    }
    std::array<C, kMaxOrder + 1> coef_;
    int order_;
};

// ---------------------------------------------------------------------------
// MultiJet: real multilinear jet in n <= 4 infinitesimal variables.
//
// Coefficients are indexed by subsets S of {0..n-1}; c[S] is the mixed
// partial d^{|S|}/ds_S of the represented function at 0 (each variable
// appears to first order only, which is all a mixed partial sees). Used to
// push group translations g exp(s1 W1)...exp(sk Wk) through chart
// extraction and bump profiles, yielding exact Lie-monomial derivatives of
// observables.
// ---------------------------------------------------------------------------
class MultiJet {
  public:
    static constexpr int kMaxVars = 4;

    MultiJet() : nvars_(0) { c_.fill(0.0); }
    explicit MultiJet(int nvars) : nvars_(check_vars(nvars)) { c_.fill(0.0); }

    static MultiJet constant(double v, int nvars) {
        MultiJet j(nvars);
        j.c_[0] = v;
        return j;
    }
    // The i-th infinitesimal generator: value v0 + s_i.
    static MultiJet variable(double v0, int i, int nvars) {
        MultiJet j(nvars);
        j.c_[0] = v0;
        j.c_[std::size_t{1} << i] = 1.0;
        return j;
    }

    int nvars() const { return nvars_; }
    std::size_t size() const { return std::size_t{1} << nvars_; }
    double coef(std::size_t mask) const { return c_[mask]; }
    void set_coef(std::size_t mask, double v) { c_[mask] = v; }
    double value() const { return c_[0]; }
    // Coefficient of s_0 s_1 ... s_{n-1}: the full mixed partial.
    double top() const { return c_[size() - 1]; }

    friend MultiJet operator+(const MultiJet& a, const MultiJet& b) {
        MultiJet r(std::max(a.nvars_, b.nvars_));
        for (std::size_t m = 0; m < r.size(); ++m) r.c_[m] = a.get(m) + b.get(m);
        return r;
    }
    friend MultiJet operator-(const MultiJet& a, const MultiJet& b) {
        MultiJet r(std::max(a.nvars_, b.nvars_));
        for (std::size_t m = 0; m < r.size(); ++m) r.c_[m] = a.get(m) - b.get(m);
        return r;
    }
    friend MultiJet operator*(double s, const MultiJet& a) {
        MultiJet r = a;
        for (std::size_t m = 0; m < r.size(); ++m) r.c_[m] *= s;
        return r;
    }
    friend MultiJet operator*(const MultiJet& a, double s) { return s * a; }

    // Multilinear product: sum over disjoint subset pairs.
    friend MultiJet operator*(const MultiJet& a, const MultiJet& b) {
        MultiJet r(std::max(a.nvars_, b.nvars_));
        const std::size_t n = r.size();
        for (std::size_t m = 0; m < n; ++m) {
            double s = 0.0;
            // Iterate submasks of m.
            std::size_t sub = m;
            while (true) {
                s += a.get(sub) * b.get(m & ~sub);
                if (sub == 0) break;
                sub = (sub - 1) & m;
            }
            r.c_[m] = s;
        }
        return r;
    }

    // phi(jet) where derivs[k] = phi^{(k)}(c0)/k! for k = 0..nvars.
    MultiJet apply_series(const double* taylor_coefs) const {
        MultiJet nil = *this;
        nil.c_[0] = 0.0;
        MultiJet r = MultiJet::constant(taylor_coefs[nvars_], nvars_);
        for (int k = nvars_ - 1; k >= 0; --k) {
            r = r * nil;
            r.c_[0] += taylor_coefs[k];
        }
        return r;
    }

    MultiJet recip() const {
        double w = c_[0];
        if (w == 0.0) throw NumericError("MultiJet::recip: zero constant term");
        double d[kMaxVars + 1];
        double p = 1.0 / w;
        for (int k = 0; k <= nvars_; ++k) {
            d[k] = (k % 2 == 0 ? p : -p);
            p /= w;
        }
        return apply_series(d);
    }

    MultiJet exp() const {
        double e = std::exp(c_[0]);
        double fact = 1.0;
        double d[kMaxVars + 1];
        for (int k = 0; k <= nvars_; ++k) {
            d[k] = e / fact;
            fact *= (k + 1);
        }
        return apply_series(d);
    }

    MultiJet log() const {
        double w = c_[0];
        if (!(w > 0.0)) throw NumericError("MultiJet::log: nonpositive constant term");
        double d[kMaxVars + 1];
        d[0] = std::log(w);
        double p = 1.0 / w;
        for (int k = 1; k <= nvars_; ++k) {
            d[k] = (k % 2 == 1 ? p : -p) / k;
            p /= w;
        }
        return apply_series(d);
    }

    // atan(jet); derivative coefficients via the closed form
    // atan^{(k)}(u) = (k-1)! cos^k(phi) sin(k(phi + pi/2)), phi = atan(u).
    MultiJet atan() const {
        double u = c_[0];
        double phi = std::atan(u);
        double cphi = std::cos(phi);
        double d[kMaxVars + 1];
        d[0] = phi;
        double ck = 1.0;
        for (int k = 1; k <= nvars_; ++k) {
            ck *= cphi;
            d[k] = ck * std::sin(k * (phi + M_PI / 2.0)) / k;
        }
        return apply_series(d);
    }

  private:
    static int check_vars(int n) {
        if (n < 0 || n > kMaxVars) throw DomainError("MultiJet supports at most 4 variables");
        return n;
    }
    double get(std::size_t mask) const { return mask < size() ? c_[mask] : 0.0; }

    std::array<double, (std::size_t{1} << kMaxVars)> c_;
    int nvars_;
};

} // namespace horolab
