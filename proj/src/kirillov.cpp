#include "horolab/kirillov.hpp"

#include <algorithm>
#include <cmath>

#include "horolab/observable.hpp"
#include "horolab/parallel.hpp"
#include "horolab/quadrature.hpp"
#include "horolab/summation.hpp"

namespace horolab {

namespace {

using C = std::complex<double>;
constexpr C kI{0.0, 1.0};

void check_support(double lo, double hi) {
    if (!(lo < hi)) throw ConstructionError("KirillovVector: empty support");
    if (lo < 0.0 && hi > 0.0) throw ConstructionError("KirillovVector: support crosses 0");
    double dist = std::min(std::abs(lo), std::abs(hi));
    if (dist < 1e-6) throw ConstructionError("KirillovVector: support touches a 1e-6 neighborhood of 0");
}

} // namespace

SeriesParams series_from_mu(double mu) {
    if (!(mu > 0.0)) throw DomainError("series_from_mu: mu must be positive");
    SeriesParams p;
    p.mu = mu;
    if (mu >= 0.25)
        p.nu = C(0.0, std::sqrt(4.0 * mu - 1.0));
    else
        p.nu = C(std::sqrt(1.0 - 4.0 * mu), 0.0);
    return p;
}

KirillovVector::KirillovVector(SeriesParams params, double lo, double hi, ProfileFn fn)
    : params_(params), lo_(lo), hi_(hi), fn_(std::move(fn)) {
    check_support(lo_, hi_);
}

KirillovVector kirillov_bump(SeriesParams params, double lo, double hi) {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto fn = [mid, half, lo, hi](double x, int order) -> TaylorJet {
        if (!(x > lo && x < hi)) return TaylorJet(order);
        TaylorJet u = (1.0 / half) * (TaylorJet::variable(x, order) - TaylorJet::constant(mid, order));
        TaylorJet w = TaylorJet::constant(1.0, order) - u * u;
        // Height-1 profile exp(1 - 1/(1 - u^2)).
        return (TaylorJet::constant(1.0, order) - w.recip()).exp();
    };
    return KirillovVector(params, lo, hi, fn);
}

KirillovVector group_action(const KirillovVector& f, BorelFlow which, double t) {
    auto inner = f;
    if (which == BorelFlow::N) {
        auto fn = [inner, t](double x, int order) -> TaylorJet {
            TaylorJet phase = ((-kI * t) * TaylorJet::variable(x, order)).exp();
            return phase * inner.jet(x, order);
        };
        return KirillovVector(f.params(), f.lo(), f.hi(), fn);
    }
    double scale = std::exp(t);
    auto fn = [inner, scale](double x, int order) -> TaylorJet {
        TaylorJet j = inner.jet(scale * x, order);
        TaylorJet r(order);
        double p = 1.0;
        for (int k = 0; k <= order; ++k) {
            r.set_coef(k, j.coef(k) * p);
            p *= scale;
        }
        return r;
    };
    return KirillovVector(f.params(), f.lo() / scale, f.hi() / scale, fn);
}

KirillovVector scale_vector(const KirillovVector& f, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("scale_vector: lambda must be positive");
    return group_action(f, BorelFlow::A, std::log(lambda));
}

KirillovVector apply_lie(const KirillovVector& f, LieDirection d) {
    auto inner = f;
    double mu = f.params().mu;
    KirillovVector::ProfileFn fn;
    switch (d) {
        case LieDirection::X:
            fn = [inner](double x, int order) -> TaylorJet {
                return (-kI) * TaylorJet::variable(x, order) * inner.jet(x, order);
            };
            break;
        case LieDirection::Y:
            fn = [inner](double x, int order) -> TaylorJet {
                TaylorJet df = inner.jet(x, order + 1).derived();
                return TaylorJet::variable(x, order) * df;
            };
            break;
        case LieDirection::Z:
            fn = [inner, mu](double x, int order) -> TaylorJet {
                TaylorJet j = inner.jet(x, order + 2);
                TaylorJet d2 = j.derived().derived();
                TaylorJet xv = TaylorJet::variable(x, order);
                return (kI * mu) * xv.recip() * j.truncated(order) - kI * (xv * d2);
            };
            break;
    }
    return KirillovVector(f.params(), f.lo(), f.hi(), fn);
}

KirillovVector weight_power(const KirillovVector& f, double p) {
    auto inner = f;
    auto fn = [inner, p](double x, int order) -> TaylorJet {
        return TaylorJet::variable(x, order).abs_pow(p) * inner.jet(x, order);
    };
    return KirillovVector(f.params(), f.lo(), f.hi(), fn);
}

void multiplier_moments(double H, int jmax, double theta, C* out) {
    if (!(H >= 1.0)) throw DomainError("multiplier: H must be >= 1");
    if (jmax < 0 || jmax > 16) throw DomainError("multiplier: moment order outside [0, 16]");
    const double u = std::abs(theta) * H;

    if (u < 1e-4) {
        // Taylor in theta*H; remainder below 1e-12 at the switchover.
        for (int j = 0; j <= jmax; ++j) {
            C term{1.0, 0.0};
            C sum{};
            double fact = 1.0;
            for (int i = 0; i <= 4; ++i) {
                sum += term / (fact * (j + i + 1.0));
                term *= kI * theta * H;
                fact *= (i + 1.0);
            }
            out[j] = std::pow(H, j) * sum;
        }
        return;
    }

    if (u <= std::max(32.0, 4.0 * jmax)) {
        // Middle regime: the upward recursion amplifies error by ~j/u per
        // step, so for moderate u integrate directly (t = H tau).
        int panels = std::max(1, static_cast<int>(std::ceil(u / 6.0)));
        const GaussRule& rule = gauss_rule(24);
        std::vector<C> acc(static_cast<std::size_t>(jmax) + 1, C{});
        for (int p = 0; p < panels; ++p) {
            double lo = static_cast<double>(p) / panels, hi = static_cast<double>(p + 1) / panels;
            double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                double tau = mid + half * rule.nodes[i];
                double w = half * rule.weights[i];
                C phase = std::exp(kI * (theta * H * tau)) * w;
                double tp = 1.0;
                for (int j = 0; j <= jmax; ++j) {
                    acc[static_cast<std::size_t>(j)] += phase * tp;
                    tp *= tau;
                }
            }
        }
        for (int j = 0; j <= jmax; ++j) out[j] = std::pow(H, j) * acc[static_cast<std::size_t>(j)];
        return;
    }

    // Oscillatory regime: integration-by-parts recursion, stable for u > 4j.
    C eiuH = std::exp(kI * (theta * H));
    C itheta = kI * theta;
    C I = (eiuH - 1.0) / itheta; // I_0
    out[0] = I / H;
    double Hj = 1.0;
    for (int j = 1; j <= jmax; ++j) {
        Hj *= H;
        I = (Hj * eiuH - static_cast<double>(j) * I) / itheta;
        out[j] = I / H;
    }
}

C multiplier(double H, int k, double a, double x) {
    if (k < 0 || k > 8) throw DomainError("multiplier: k outside [0, 8]");
    std::array<C, 17> m;
    multiplier_moments(H, k, a - x, m.data());
    return m[static_cast<std::size_t>(k)];
}

KirillovVector twist_in_model(const KirillovVector& f, double H, int k, double a) {
    if (!(H >= 1.0)) throw DomainError("twist_in_model: H must be >= 1");
    if (k < 0 || k > 8) throw DomainError("twist_in_model: k outside [0, 8]");
    auto inner = f;
    auto fn = [inner, H, k, a](double x, int order) -> TaylorJet {
        std::array<C, 17> m;
        multiplier_moments(H, k + order, a - x, m.data());
        TaylorJet mj(order);
        double fact = 1.0;
        C pw{1.0, 0.0};
        for (int j = 0; j <= order; ++j) {
            mj.set_coef(j, pw * m[static_cast<std::size_t>(k + j)] / fact);
            pw *= -kI;
            fact *= (j + 1.0);
        }
        return mj * inner.jet(x, order);
    };
    return KirillovVector(f.params(), f.lo(), f.hi(), fn);
}

namespace {

// Adaptive integral over the support in log|x| coordinates.
double support_log_integral(const KirillovVector& f, const std::function<double(double)>& g,
                            double rel_tol) {
    // g takes the point x (signed); integration variable u = log|x|.
    double sign = f.lo() > 0.0 ? 1.0 : -1.0;
    double lo_abs = std::min(std::abs(f.lo()), std::abs(f.hi()));
    double hi_abs = std::max(std::abs(f.lo()), std::abs(f.hi()));
    return adaptive_integrate([&](double u) { return g(sign * std::exp(u)); }, std::log(lo_abs),
                              std::log(hi_abs), rel_tol);
}

} // namespace

double weighted_l2_sq(const KirillovVector& f, double weight_exp, double rel_tol) {
    return support_log_integral(
        f,
        [&](double x) { return std::pow(std::abs(x), weight_exp) * std::norm(f.value(x)); },
        rel_tol);
}

double kirillov_norm(const KirillovVector& f, int s, double rel_tol) {
    if (s < 0 || s > 2)
        throw DomainError("kirillov_norm: order above 2 unsupported (Z needs second derivatives)");
    PairwiseReal acc;
    for (const LieWord& w : lie_words_up_to(s)) {
        KirillovVector v = f;
        for (auto it = w.rbegin(); it != w.rend(); ++it) v = apply_lie(v, *it);
        acc.add(std::sqrt(std::max(0.0, weighted_l2_sq(v, 0.0, rel_tol))));
    }
    return acc.total();
}

double sup_vs_s21_ratio(const KirillovVector& f) {
    const int grid = 10000;
    double best = 0.0, bx = f.lo();
    double len = f.hi() - f.lo();
    for (int i = 0; i < grid; ++i) {
        double x = f.lo() + len * (i + 0.5) / grid;
        double v = std::abs(f.value(x));
        if (v > best) {
            best = v;
            bx = x;
        }
    }
    double h = len / grid;
    for (int level = 0; level < 20; ++level) {
        double l = std::abs(f.value(bx - h)), r = std::abs(f.value(bx + h));
        if (l > best && l >= r) {
            best = l;
            bx -= h;
        } else if (r > best) {
            best = r;
            bx += h;
        } else {
            h *= 0.5;
        }
    }
    double s21 = kirillov_norm(f, 1);
    if (s21 == 0.0) throw DomainError("sup_vs_s21_ratio: zero vector");
    return best / s21;
}

std::complex<double> functional_B(int sign, double nu, const KirillovVector& f,
                                  const KirillovVector& g, double rel_tol) {
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("functional_B: nu outside (0, 1)");
    if (sign != +1 && sign != -1) throw DomainError("functional_B: sign must be +-1");
    double lo = std::max(f.lo(), g.lo());
    double hi = std::min(f.hi(), g.hi());
    if (!(lo < hi)) return C{};
    bool positive_side = lo > 0.0;
    if ((sign == +1) != positive_side) return C{}; // support on the other half-line
    double lo_abs = std::min(std::abs(lo), std::abs(hi));
    double hi_abs = std::max(std::abs(lo), std::abs(hi));
    double sgn = positive_side ? 1.0 : -1.0;
    // |x|^{-(1+nu)/2} dx = e^{(1-nu)u/2} du in log coordinates.
    return adaptive_integrate_complex(
        [&](double u) -> C {
            double x = sgn * std::exp(u);
            return std::exp(0.5 * (1.0 - nu) * u) * f.value(x) * std::conj(g.value(x));
        },
        std::log(lo_abs), std::log(hi_abs), rel_tol);
}

double cauchy_schwarz_majorant(double nu, const KirillovVector& f, const KirillovVector& g) {
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("cauchy_schwarz_majorant: nu outside (0, 1)");
    // int |x|^{-(1+nu)/2} |f|^2 dx = weighted_l2_sq with |x|^{(1-nu)/2} dx/|x|.
    double nf = std::sqrt(std::max(0.0, weighted_l2_sq(f, 0.5 * (1.0 - nu))));
    double ng = std::sqrt(std::max(0.0, weighted_l2_sq(g, 0.5 * (1.0 - nu))));
    return nf * ng;
}

double prop_l2_scan(const KirillovVector& f, int s, const std::vector<double>& H_grid,
                    const std::vector<double>& a_grid, std::vector<ScanRow>* rows, int threads) {
    if (s != 0 && s != 1) throw DomainError("prop_l2_scan: s must be 0 or 1");
    for (double H : H_grid)
        if (!(H >= 1.0 && H <= 1e5)) throw DomainError("prop_l2_scan: H outside [1, 1e5]");
    for (double a : a_grid)
        if (a == 0.0) throw DomainError("prop_l2_scan: a-grid must exclude 0");

    double denom_norm = kirillov_norm(f, s + 1);
    double nu_real = f.params().nu.real();

    struct Cell {
        double H, a;
    };
    std::vector<Cell> cells;
    for (double H : H_grid)
        for (double a : a_grid) cells.push_back({H, a});
    std::vector<ScanRow> local(cells.size());
    parallel_for(cells.size(), threads, [&](std::size_t i) {
        double H = cells[i].H, a = cells[i].a;
        double lhs = kirillov_norm(twist_in_model(f, H, 0, a), s);
        lhs *= lhs;
        double rhs = (1.0 + 1.0 / std::abs(a)) * std::pow(H, 4.0 * s - 1.0) * denom_norm * denom_norm;
        local[i] = ScanRow{nu_real, H, a, lhs, rhs, lhs / rhs, s};
    });
    double worst = 0.0;
    for (const auto& row : local) {
        if (rows) rows->push_back(row);
        worst = std::max(worst, row.ratio);
    }
    return worst;
}

double bilinear_twist_scan(double nu, const KirillovVector& f, const KirillovVector& g,
                           const std::vector<double>& H_grid, const std::vector<double>& a_grid,
                           std::vector<ScanRow>* rows, int threads) {
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("bilinear_twist_scan: nu outside (0, 1)");
    double nf = kirillov_norm(weight_power(f, 0.25 * (1.0 - nu)), 2);
    double ng = kirillov_norm(weight_power(g, 0.25 * (1.0 - nu)), 2);

    struct Cell {
        double H, a;
    };
    std::vector<Cell> cells;
    for (double H : H_grid)
        for (double a : a_grid) cells.push_back({H, a});
    std::vector<ScanRow> local(cells.size());
    parallel_for(cells.size(), threads, [&](std::size_t i) {
        double H = cells[i].H, a = cells[i].a;
        KirillovVector tf = twist_in_model(f, H, 0, a);
        KirillovVector tg = twist_in_model(g, H, 0, a);
        double lhs = std::abs(functional_B(+1, nu, tf, tg)) + std::abs(functional_B(-1, nu, tf, tg));
        double rhs = (1.0 + 1.0 / std::abs(a)) / H * nf * ng;
        local[i] = ScanRow{nu, H, a, lhs, rhs, lhs / rhs, 2};
    });
    double worst = 0.0;
    for (const auto& row : local) {
        if (rows) rows->push_back(row);
        worst = std::max(worst, row.ratio);
    }
    return worst;
}

double complementary_constant(double nu) {
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("complementary_constant: nu outside (0, 1)");
    // Rhat(1) = int |x|^{nu-1} e^{-ix} dx = 2 Gamma(nu) cos(pi nu / 2).
    double rhat1 = 2.0 * std::tgamma(nu) * std::cos(0.5 * M_PI * nu);
    return std::sqrt(std::abs(rhat1));
}

LineVector line_bump(double lo, double hi) {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    LineVector v;
    v.lo = lo;
    v.hi = hi;
    v.value = [mid, half, lo, hi](double x) -> double {
        if (!(x > lo && x < hi)) return 0.0;
        double u = (x - mid) / half;
        return std::exp(1.0 - 1.0 / (1.0 - u * u));
    };
    return v;
}

namespace {

// fhat(xi) = int f(x) e^{-ix xi} dx by composite Gauss panels sized to the
// oscillation.
C line_fourier(const LineVector& f, double xi) {
    double len = f.hi - f.lo;
    int panels = std::max(1, static_cast<int>(std::ceil(std::abs(xi) * len / 4.0)));
    const GaussRule& rule = gauss_rule(16);
    PairwiseComplex acc;
    for (int p = 0; p < panels; ++p) {
        double a = f.lo + len * p / panels, b = f.lo + len * (p + 1) / panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        C s{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double x = mid + half * rule.nodes[i];
            s += rule.weights[i] * (f.value(x) * std::exp(-kI * (x * xi)));
        }
        acc.add(half * s);
    }
    return acc.total();
}

} // namespace

double complementary_unitarity_check(double nu, const LineVector& f) {
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("complementary_unitarity_check: nu outside (0, 1)");
    double len = f.hi - f.lo;
    if (!(len > 0.0)) throw DomainError("complementary_unitarity_check: empty support");
    double peak = 0.0;
    for (int i = 0; i <= 64; ++i) peak = std::max(peak, std::abs(f.value(f.lo + len * i / 64.0)));
    if (peak == 0.0) throw DomainError("complementary_unitarity_check: zero vector");

    // Autocorrelation G(w) = int f(x) f(x+w) dx, even in w.
    auto G = [&](double w) -> double {
        double a = f.lo, b = f.hi - w;
        if (!(b > a)) return 0.0;
        int panels = 8;
        PairwiseReal acc;
        for (int p = 0; p < panels; ++p) {
            double pa = a + (b - a) * p / panels, pb = a + (b - a) * (p + 1) / panels;
            acc.add(gauss_integrate([&](double x) { return f.value(x) * f.value(x + w); }, pa, pb, 16));
        }
        return acc.total();
    };
    // lhs = int int f(x) f(y) |x-y|^{nu-1} dx dy = 2 int_0^len w^{nu-1} G(w) dw,
    // with the endpoint singularity removed by w = s^{1/nu}.
    double lhs = 2.0 / nu *
                 adaptive_integrate([&](double s) { return G(std::pow(s, 1.0 / nu)); }, 0.0,
                                    std::pow(len, nu), 1e-9);

    // rhs = C_mu^2 int |xi|^{-nu} |fhat|^2 dxi (fhat even in modulus for
    // real f). Under the f^(xi) = int f e^{-ix xi} dx convention Plancherel
    // carries a 1/(2 pi), so the unitary normalization is Rhat(1)/(2 pi).
    double c2 = 2.0 * std::tgamma(nu) * std::cos(0.5 * M_PI * nu) / (2.0 * M_PI);
    auto spec = [&](double xi) { return std::norm(line_fourier(f, xi)); };
    // [0, 1]: substitute xi = s^{1/(1-nu)} to absorb the |xi|^{-nu} endpoint.
    double head = 1.0 / (1.0 - nu) *
                  adaptive_integrate([&](double s) { return spec(std::pow(s, 1.0 / (1.0 - nu))); },
                                     0.0, 1.0, 1e-9);
    // Octaves until the spectral tail is negligible.
    double tail = 0.0;
    double lo = 1.0;
    for (int oct = 0; oct < 24; ++oct) {
        double hi = 2.0 * lo;
        double piece = adaptive_integrate([&](double xi) { return std::pow(xi, -nu) * spec(xi); },
                                          lo, hi, 1e-8, 1e-14);
        tail += piece;
        if (std::abs(piece) < 1e-11 * (head + tail)) break;
        lo = hi;
    }
    double rhs = c2 * 2.0 * (head + tail);
    return std::abs(lhs - rhs) / std::abs(lhs);
}

} // namespace horolab
