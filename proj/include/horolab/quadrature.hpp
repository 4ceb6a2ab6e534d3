#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "horolab/errors.hpp"

namespace horolab {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;   // ascending
    std::vector<double> weights; // sum to 2
};

// Cached rule lookup, n in [2, 64]. Nodes are computed once by Newton
// iteration on P_n and reused for every panel.
const GaussRule& gauss_rule(int n);

// Integrate f over [a, b] with an n-point rule.
template <class F>
auto gauss_integrate(F&& f, double a, double b, int n) -> decltype(f(0.0)) {
    const GaussRule& r = gauss_rule(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    decltype(f(0.0)) s{};
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * f(mid + half * r.nodes[i]);
    return half * s;
}

// Adaptive Gauss7/Kronrod15 integration of a real integrand. Subdivides
// the worst interval until the summed error estimate meets
// max(rel_tol * |integral|, abs_tol). Throws QuadratureError if the
// interval budget runs out.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol = 0.0, int max_intervals = 4000);

// Complex version (real and imaginary parts share the subdivision).
std::complex<double> adaptive_integrate_complex(const std::function<std::complex<double>(double)>& f,
                                                double a, double b, double rel_tol,
                                                double abs_tol = 0.0, int max_intervals = 4000);

// Single G7K15 evaluation: returns the K15 value, writes |K15-G7| to err.
double g7k15(const std::function<double(double)>& f, double a, double b, double& err);

// Legendre polynomial values P_0..P_{m} at x (ascending recurrence).
void legendre_values(double x, int m, double* out);

} // namespace horolab
