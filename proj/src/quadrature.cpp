#include "horolab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace horolab {

namespace {

GaussRule compute_rule(int n) {
    GaussRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

std::map<int, GaussRule> g_rules;
std::mutex g_rules_mutex;

// G7K15 nodes/weights (positive half; node 0 is the midpoint).
// Columns: abscissa, Gauss7 weight, Kronrod15 weight.
const double kG7K15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529}};

struct Interval {
    double a, b, value, err;
};

template <class T, class Fn, class AbsFn>
T adaptive_impl(const Fn& f, double a, double b, double rel_tol, double abs_tol,
                int max_intervals, const AbsFn& absval) {
    auto eval = [&](double lo, double hi, T& value) -> double {
        const double mid = 0.5 * (lo + hi);
        const double half = hi - mid;
        T y0 = f(mid);
        T g7 = kG7K15[0][1] * y0;
        T k15 = kG7K15[0][2] * y0;
        for (int i = 1; i < 8; ++i) {
            double dx = half * kG7K15[i][0];
            T yi = f(mid + dx) + f(mid - dx);
            g7 += kG7K15[i][1] * yi;
            k15 += kG7K15[i][2] * yi;
        }
        value = half * k15;
        return absval(half * (k15 - g7));
    };

    struct Piece {
        double a, b, err;
        T value;
    };
    std::vector<Piece> pieces;
    pieces.reserve(64);
    Piece first;
    first.a = a;
    first.b = b;
    first.err = eval(a, b, first.value);
    pieces.push_back(first);

    for (int iter = 0; iter < max_intervals; ++iter) {
        T total{};
        double total_err = 0.0;
        for (const auto& p : pieces) {
            total += p.value;
            total_err += p.err;
        }
        double tol = std::max(rel_tol * absval(total), abs_tol);
        if (total_err <= tol || total_err == 0.0) return total;

        // Split the worst interval.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < pieces.size(); ++i)
            if (pieces[i].err > pieces[worst].err) worst = i;
        Piece p = pieces[worst];
        double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) return [&] {  // interval exhausted to fp width
            T total2{};
            for (const auto& q : pieces) total2 += q.value;
            return total2;
        }();
        Piece left, right;
        left.a = p.a;
        left.b = mid;
        left.err = eval(left.a, left.b, left.value);
        right.a = mid;
        right.b = p.b;
        right.err = eval(right.a, right.b, right.value);
        pieces[worst] = left;
        pieces.push_back(right);
    }
    throw QuadratureError("adaptive_integrate: interval budget exhausted");
}

} // namespace

const GaussRule& gauss_rule(int n) {
    if (n < 2 || n > 64) throw DomainError("gauss_rule: n out of [2, 64]");
    std::lock_guard<std::mutex> lock(g_rules_mutex);
    auto it = g_rules.find(n);
    if (it == g_rules.end()) it = g_rules.emplace(n, compute_rule(n)).first;
    return it->second;
}

double g7k15(const std::function<double(double)>& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = b - mid;
    double y0 = f(mid);
    double g7 = kG7K15[0][1] * y0;
    double k15 = kG7K15[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        double dx = half * kG7K15[i][0];
        double yi = f(mid + dx) + f(mid - dx);
        g7 += kG7K15[i][1] * yi;
        k15 += kG7K15[i][2] * yi;
    }
    err = std::abs(half * (k15 - g7));
    return half * k15;
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_intervals) {
    return adaptive_impl<double>(f, a, b, rel_tol, abs_tol, max_intervals,
                                 [](double x) { return std::abs(x); });
}

std::complex<double> adaptive_integrate_complex(const std::function<std::complex<double>(double)>& f,
                                                double a, double b, double rel_tol,
                                                double abs_tol, int max_intervals) {
    return adaptive_impl<std::complex<double>>(f, a, b, rel_tol, abs_tol, max_intervals,
                                               [](std::complex<double> x) { return std::abs(x); });
}

void legendre_values(double x, int m, double* out) {
    out[0] = 1.0;
    if (m >= 1) out[1] = x;
    for (int k = 2; k <= m; ++k)
        out[k] = ((2.0 * k - 1.0) * x * out[k - 1] - (k - 1.0) * out[k - 2]) / k;
}

} // namespace horolab
