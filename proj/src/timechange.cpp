#include "horolab/timechange.hpp"

#include <cmath>

#include "horolab/quadrature.hpp"
#include "horolab/summation.hpp"
#include "horolab/twisted.hpp"

namespace horolab {

namespace {
using C = std::complex<double>;
C eix(double phase) { return C(std::cos(phase), std::sin(phase)); }
} // namespace

TimeChange::TimeChange(Observable g) : g_(std::move(g)) {
    double sup = sobolev_norm_estimate(g_, 0, NormKind::Sup);
    if (sup > 0.5 + 1e-12)
        throw ConstructionError("TimeChange: sup|g| must be <= 1/2 to keep rho in [1/2, 3/2]");
}

namespace {
// The bump profile is flat-C-infinity at its support edges, which pinches
// Gauss-Legendre convergence; hitting the 1e-8 cocycle-identity budget
// needs short panels at full node count (measured: 3e-10 over 50 flow
// units at 1/16-length panels, 32 nodes).
constexpr double kTauPanel = 0.0625;
constexpr int kTauNodes = 32;
} // namespace

double cocycle_tau(const TimeChange& tc, const SurfacePoint& x, double t,
                   const QuadratureSpec& q) {
    validate(q);
    if (!(std::abs(t) <= 1e6)) throw DomainError("cocycle_tau: |t| > 1e6");
    if (t == 0.0) return 0.0;
    double sign = t > 0.0 ? 1.0 : -1.0;
    double len = std::abs(t);
    PairwiseReal acc;
    for (double s0 = 0.0; s0 < len; s0 += kTauPanel) {
        double s1 = std::min(s0 + kTauPanel, len);
        acc.add(gauss_integrate(
            [&](double s) { return tc.rho(reduce(flow_n(x.rep, sign * s))); }, s0, s1, kTauNodes));
    }
    return sign * acc.total();
}

namespace {

// Cumulative tau along the forward orbit at unit spacing, with partial
// panels by Gauss quadrature: supports many tau evaluations against one
// orbit pass.
class TauGrid {
  public:
    TauGrid(const TimeChange& tc, const SurfacePoint& x, int nodes)
        : tc_(&tc), orbit_(x), nodes_(nodes) {
        cum_.push_back(0.0);
    }

    double tau(double t) {
        if (!(t >= 0.0)) throw DomainError("TauGrid: negative time");
        std::size_t m = static_cast<std::size_t>(std::floor(t / kTauPanel));
        ensure(m + 1);
        double base = cum_[m];
        double fl = static_cast<double>(m) * kTauPanel;
        if (t == fl) return base;
        return base + gauss_integrate([&](double s) { return rho_at(s); }, fl, t, kTauNodes);
    }

    double rho_at(double s) { return tc_->rho(orbit_.at(s)); }
    OrbitCache& orbit() { return orbit_; }

  private:
    void ensure(std::size_t m) {
        while (cum_.size() <= m) {
            double s0 = static_cast<double>(cum_.size() - 1) * kTauPanel;
            cum_.push_back(cum_.back() + gauss_integrate([&](double s) { return rho_at(s); }, s0,
                                                         s0 + kTauPanel, kTauNodes));
        }
    }

    const TimeChange* tc_;
    OrbitCache orbit_;
    int nodes_;
    std::vector<double> cum_;
};

} // namespace

double invert_tau(const TimeChange& tc, const SurfacePoint& x, double tau_target,
                  const QuadratureSpec& q) {
    validate(q);
    if (!(tau_target >= 0.0)) throw DomainError("invert_tau: target must be >= 0");
    if (tau_target == 0.0) return 0.0;
    if (!(tau_target <= 5e5)) throw DomainError("invert_tau: target too large");

    TauGrid grid(tc, x, q.nodes_per_panel);
    // rho in [1/2, 3/2] brackets the root in [2 tau/3, 2 tau].
    double lo = 2.0 * tau_target / 3.0, hi = 2.0 * tau_target;
    double t = tau_target;
    for (int iter = 0; iter < 200; ++iter) {
        double err = grid.tau(t) - tau_target;
        if (std::abs(err) <= 1e-9) return t;
        if (err > 0.0)
            hi = t;
        else
            lo = t;
        double step = err / grid.rho_at(t);
        double next = t - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    throw NumericError("invert_tau: iteration cap (200) exceeded");
}

SurfacePoint timechange_flow(const TimeChange& tc, const SurfacePoint& x, double tau,
                             const QuadratureSpec& q) {
    return reduce(flow_n(x.rep, invert_tau(tc, x, tau, q)));
}

double rho_volume_integral(const TimeChange& tc, const Observable& f) {
    return volume_integral(f) + product_volume_integral(f, tc.perturbation());
}

namespace {

// One half-panel of the substituted integral: carries tau to the Gauss
// nodes by integrating the Legendre series of rho, returns the panel
// integral of e^{ia tau} tau^k f rho and advances tau by the panel mass.
struct RhoPanelIntegrator {
    TauGrid* grid;
    const Observable* f;
    const TimeChange* tc;
    double a;
    int k;
    int nodes;
    std::uint64_t samples = 0;

    C panel(double s0, double s1, double tau_start) {
        const GaussRule& rule = gauss_rule(nodes);
        const int n = nodes;
        const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
        std::vector<double> rho(static_cast<std::size_t>(n)), fval(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            SurfacePoint p = grid->orbit().at(mid + half * rule.nodes[static_cast<std::size_t>(i)]);
            rho[static_cast<std::size_t>(i)] = tc->rho(p);
            fval[static_cast<std::size_t>(i)] = f->value(p);
            ++samples;
        }
        // Legendre coefficients of rho on the panel (exact through the
        // rule's polynomial degree).
        std::vector<double> coef(static_cast<std::size_t>(n), 0.0);
        std::vector<double> P(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i < n; ++i) {
            legendre_values(rule.nodes[static_cast<std::size_t>(i)], n, P.data());
            double w = rule.weights[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(i)];
            for (int m = 0; m < n; ++m) coef[static_cast<std::size_t>(m)] += w * P[static_cast<std::size_t>(m)];
        }
        for (int m = 0; m < n; ++m) coef[static_cast<std::size_t>(m)] *= (2.0 * m + 1.0) / 2.0;

        C integral{};
        for (int i = 0; i < n; ++i) {
            double xi = rule.nodes[static_cast<std::size_t>(i)];
            legendre_values(xi, n, P.data());
            // int_{-1}^{xi} P_m = (P_{m+1} - P_{m-1})/(2m+1), and 0 at -1.
            double anti = coef[0] * (xi + 1.0);
            for (int m = 1; m < n; ++m)
                anti += coef[static_cast<std::size_t>(m)] *
                        (P[static_cast<std::size_t>(m) + 1] - P[static_cast<std::size_t>(m) - 1]) /
                        (2.0 * m + 1.0);
            double tau_i = tau_start + half * anti;
            double tk = 1.0;
            for (int j = 0; j < k; ++j) tk *= tau_i;
            integral += rule.weights[static_cast<std::size_t>(i)] *
                        (eix(a * tau_i) * (tk * fval[static_cast<std::size_t>(i)] *
                                           rho[static_cast<std::size_t>(i)]));
        }
        return half * integral;
    }

    double panel_mass(double s0, double s1) {
        return gauss_integrate([&](double s) { return tc->rho(grid->orbit().at(s)); }, s0, s1, nodes);
    }
};

} // namespace

TwistReport twisted_average_rho(const Observable& f, const SurfacePoint& x0, const TimeChange& tc,
                                const TwistParams& p, const QuadratureSpec& q) {
    validate(p);
    validate(q);
    double S = invert_tau(tc, x0, p.T, q);

    TauGrid grid(tc, x0, q.nodes_per_panel);
    RhoPanelIntegrator pi{&grid, &f, &tc, p.a, p.k, q.nodes_per_panel};

    // Same panel policy as the straight twisted average; rho <= 3/2 keeps
    // the substituted phase resolved, and the rho = 1 degeneration then
    // compares node-aligned quadratures.
    double L = twist_panel_length(p.a, q);
    PairwiseComplex acc;
    double err_sum = 0.0;
    double tau_cursor = 0.0;
    for (double s0 = 0.0; s0 < S; s0 += L) {
        double s1 = std::min(s0 + L, S);
        double mid = 0.5 * (s0 + s1);
        C coarse = pi.panel(s0, s1, tau_cursor);
        double mass_left = pi.panel_mass(s0, mid);
        C fine = pi.panel(s0, mid, tau_cursor) + pi.panel(mid, s1, tau_cursor + mass_left);
        acc.add(fine);
        err_sum += std::abs(fine - coarse);
        tau_cursor += mass_left + pi.panel_mass(mid, s1);
    }
    TwistReport rep;
    rep.value = acc.total() / p.T;
    if (!std::isfinite(rep.value.real()) || !std::isfinite(rep.value.imag()))
        throw NumericError("twisted_average_rho: non-finite result");
    rep.abs_error_estimate = err_sum / p.T;
    rep.samples_used = pi.samples;
    rep.max_cusp_height = grid.orbit().max_cusp_height();
    rep.refinement_warning =
        rep.abs_error_estimate > std::max(q.target_rel_error * std::abs(rep.value), 1e-14);
    return rep;
}

Observable zero_rho_average_pair(const TimeChange& tc, const Observable& f0, const Observable& f1) {
    if (f0.kind() != Observable::Kind::Bump || f1.kind() != Observable::Kind::Bump)
        throw ConstructionError("zero_rho_average_pair: both inputs must be bumps");
    double v1 = rho_volume_integral(tc, f1);
    if (std::abs(v1) < 1e-12)
        throw ConstructionError("zero_rho_average_pair: degenerate normalizer");
    double coeff = rho_volume_integral(tc, f0) / v1;
    return Observable::pair_difference(f0.bump_spec(0), f1.bump_spec(0), coeff);
}

double commutation_residual(const TimeChange& tc, const Observable& f, const SurfacePoint& p,
                            double h) {
    // X_rho (Y f): exact jets inside, division by rho at the point.
    double xyf = f.lie_monomial(p, {LieDirection::X, LieDirection::Y});
    double lhs_first = xyf / tc.rho(p);
    // Y (X_rho f): one finite difference of the quotient (X f)/rho.
    auto quotient = [&](const GroupElement& g) {
        SurfacePoint sp = reduce(g);
        return f.lie_monomial(sp, {LieDirection::X}) / tc.rho(sp);
    };
    double lhs_second = lie_derivative(quotient, p.rep, LieDirection::Y, h);
    double lhs = lhs_first - lhs_second;

    double rho = tc.rho(p);
    double yrho = tc.perturbation().lie_monomial(p, {LieDirection::Y});
    double xf = f.lie_monomial(p, {LieDirection::X});
    double rhs = (yrho / rho - 1.0) * xf / rho;
    return std::abs(lhs - rhs);
}

} // namespace horolab
