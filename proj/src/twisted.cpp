#include "horolab/twisted.hpp"

#include <algorithm>
#include <cmath>

#include "horolab/quadrature.hpp"
#include "horolab/summation.hpp"

namespace horolab {

namespace {

using C = std::complex<double>;

C eix(double phase) { return C(std::cos(phase), std::sin(phase)); }

double t_pow(double t, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= t;
    return r;
}

struct PanelIntegrator {
    OrbitCache* orbit;
    const Observable* f;
    double a;
    int k;
    int nodes;
    std::uint64_t samples = 0;

    C integrand(double t) {
        samples++;
        return eix(a * t) * t_pow(t, k) * f->value(orbit->at(t));
    }

    C gauss(double lo, double hi) {
        const GaussRule& r = gauss_rule(nodes);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        C s{};
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            s += r.weights[i] * integrand(mid + half * r.nodes[i]);
        return half * s;
    }

    // Fine value (two halves) plus refinement error estimate.
    C panel(double lo, double hi, double& err) {
        C coarse = gauss(lo, hi);
        double mid = 0.5 * (lo + hi);
        C fine = gauss(lo, mid) + gauss(mid, hi);
        err = std::abs(fine - coarse);
        return fine;
    }
};

} // namespace

void validate(const TwistParams& p) {
    if (!(p.T >= 1.0)) throw DomainError("TwistParams: T must be >= 1");
    if (p.k < 0 || p.k > 8) throw DomainError("TwistParams: k outside [0, 8]");
    if (!(p.H >= 0.0 && p.H <= p.T)) throw DomainError("TwistParams: H outside [0, T]");
    if (!std::isfinite(p.a)) throw DomainError("TwistParams: non-finite frequency");
}

double twist_panel_length(double a, const QuadratureSpec& q) {
    if (q.panel_length > 0.0) return q.panel_length;
    // Orbit crossings of the support can be a few hundredths of a flow
    // unit wide (grazing incidences, cusp excursions), so the automatic
    // panel is capped at 1/2 rather than 1.
    if (a == 0.0) return 0.5;
    return std::min(0.5, M_PI / (4.0 * std::abs(a)));
}

TwistReport twisted_average(const Observable& f, OrbitCache& orbit, const TwistParams& p,
                            const QuadratureSpec& q) {
    validate(p);
    validate(q);
    orbit.ensure(p.T);

    PanelIntegrator pi{&orbit, &f, p.a, p.k, q.nodes_per_panel};
    const double L = twist_panel_length(p.a, q);
    PairwiseComplex acc;
    double err_sum = 0.0;
    for (double t0 = 0.0; t0 < p.T; t0 += L) {
        double t1 = std::min(t0 + L, p.T);
        double err;
        acc.add(pi.panel(t0, t1, err));
        err_sum += err;
    }
    TwistReport rep;
    rep.value = acc.total() / p.T;
    if (!std::isfinite(rep.value.real()) || !std::isfinite(rep.value.imag()))
        throw NumericError("twisted_average: non-finite result");
    rep.abs_error_estimate = err_sum / p.T;
    rep.samples_used = pi.samples;
    rep.max_cusp_height = orbit.max_cusp_height();
    rep.refinement_warning =
        rep.abs_error_estimate > std::max(q.target_rel_error * std::abs(rep.value), 1e-14);
    return rep;
}

TwistReport twisted_average(const Observable& f, const SurfacePoint& x0, const TwistParams& p,
                            const QuadratureSpec& q) {
    OrbitCache orbit(x0);
    return twisted_average(f, orbit, p, q);
}

TwistReport plain_average(const Observable& f, const SurfacePoint& x0, double T,
                          const QuadratureSpec& q) {
    TwistParams p;
    p.a = 0.0;
    p.T = T;
    p.k = 0;
    return twisted_average(f, x0, p, q);
}

namespace {

// Cumulative antiderivative F(v) = int_0^v e^{iau} f(x0 n(u)) du along one
// orbit, stored at fine-panel boundaries; F at arbitrary v costs one short
// Gauss panel. Implements the window integrals of f * sigma_H without the
// smoothing identity being assumed.
class CumulativeTwist {
  public:
    CumulativeTwist(const Observable& f, OrbitCache& orbit, double a, double horizon, int nodes)
        : f_(&f), orbit_(&orbit), a_(a), nodes_(nodes) {
        L_ = twist_panel_length(a, QuadratureSpec{});
        std::size_t count = static_cast<std::size_t>(std::ceil(horizon / L_)) + 2;
        orbit_->ensure(horizon + L_);
        cum_.reserve(count + 1);
        cum_.push_back(C{});
        PairwiseComplex acc;
        for (std::size_t m = 0; m < count; ++m) {
            acc.add(gauss(m * L_, (m + 1) * L_));
            cum_.push_back(acc.total());
        }
    }

    std::uint64_t samples() const { return samples_; }

    C F(double v) {
        double fl = std::floor(v / L_);
        std::size_t m = static_cast<std::size_t>(fl);
        if (m + 1 >= cum_.size()) throw NumericError("CumulativeTwist: out of horizon");
        double t0 = fl * L_;
        if (v == t0) return cum_[m];
        return cum_[m] + gauss(t0, v);
    }

    // (f * sigma_H)(x0 n(t)) = (1/H) e^{-iat} (F(t+H) - F(t)).
    C smooth_at(double t, double H) { return (1.0 / H) * eix(-a_ * t) * (F(t + H) - F(t)); }

  private:
    C gauss(double lo, double hi) {
        const GaussRule& r = gauss_rule(nodes_);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        C s{};
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            double t = mid + half * r.nodes[i];
            s += r.weights[i] * (eix(a_ * t) * f_->value(orbit_->at(t)));
            ++samples_;
        }
        return half * s;
    }

    const Observable* f_;
    OrbitCache* orbit_;
    double a_;
    int nodes_;
    double L_;
    std::vector<C> cum_;
    std::uint64_t samples_ = 0;
};

} // namespace

double smoothing_discrepancy(const Observable& f, const SurfacePoint& x0, const TwistParams& p,
                             const QuadratureSpec& q) {
    validate(p);
    validate(q);
    if (p.H == 0.0) return 0.0;
    if (!(p.H >= 1.0 && p.H <= p.T / 10.0))
        throw DomainError("smoothing_discrepancy: H outside [1, T/10]");

    OrbitCache orbit(x0);
    TwistReport direct = twisted_average(f, orbit, p, q);

    CumulativeTwist cum(f, orbit, p.a, p.T + p.H, q.nodes_per_panel);
    const double L = twist_panel_length(p.a, q);
    auto outer = [&](double t) { return eix(p.a * t) * t_pow(t, p.k) * cum.smooth_at(t, p.H); };
    auto gauss_outer = [&](double lo, double hi) {
        const GaussRule& r = gauss_rule(q.nodes_per_panel);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        C s{};
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * outer(mid + half * r.nodes[i]);
        return half * s;
    };
    PairwiseComplex acc;
    for (double t0 = 0.0; t0 < p.T; t0 += L) {
        double t1 = std::min(t0 + L, p.T);
        double mid = 0.5 * (t0 + t1);
        acc.add(gauss_outer(t0, mid) + gauss_outer(mid, t1));
    }
    C smoothed = acc.total() / p.T;
    return std::abs(smoothed - direct.value);
}

CauchySchwarzSides cauchy_schwarz_sides(const Observable& f, const SurfacePoint& x0,
                                        const TwistParams& p, const QuadratureSpec& q) {
    validate(p);
    validate(q);
    if (!(p.H >= 1.0 && p.H <= p.T))
        throw DomainError("cauchy_schwarz_sides: H outside [1, T]");

    OrbitCache orbit(x0);
    CumulativeTwist cum(f, orbit, p.a, p.T + p.H, q.nodes_per_panel);

    // One shared positive-weight node set makes the discrete inequality
    // exact: |sum w psi t^k g|^2 <= (sum w t^{2k}) (sum w |g|^2) and
    // sum w = T, t <= T.
    const double L = twist_panel_length(p.a, q);
    const GaussRule& r = gauss_rule(q.nodes_per_panel);
    PairwiseComplex lhs_acc;
    PairwiseReal rhs_acc;
    for (double t0 = 0.0; t0 < p.T; t0 += L) {
        double t1 = std::min(t0 + L, p.T);
        const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            double t = mid + half * r.nodes[i];
            double w = half * r.weights[i];
            C g = cum.smooth_at(t, p.H);
            lhs_acc.add(w * eix(p.a * t) * t_pow(t, p.k) * g);
            rhs_acc.add(w * std::norm(g));
        }
    }
    CauchySchwarzSides sides;
    sides.lhs = std::norm(lhs_acc.total() / p.T);
    sides.rhs = t_pow(p.T, 2 * p.k) * rhs_acc.total() / p.T;
    return sides;
}

std::array<double, 3> derivative_transport_check(const Observable& f, const SurfacePoint& x0,
                                                 double t, double h) {
    if (!(std::abs(t) <= 1e3)) throw DomainError("derivative_transport_check: |t| > 1e3");
    auto eval = [&](const GroupElement& g) { return f.value(reduce(g)); };
    auto eval_shift = [&](const GroupElement& g) { return f.value(reduce(compose(g, n_of(t)))); };
    GroupElement gt = reduce(compose(x0.rep, n_of(t))).rep;

    // Both sides by central differences with the same (unnormalized) step,
    // so the checked discrepancy is the transported-direction identity and
    // not the difference of two truncation errors.
    auto fd_direction = [&](const GroupElement& base, double p, double q, double r) {
        GroupElement plus = compose(base, exp_traceless(p, q, r, h));
        GroupElement minus = compose(base, exp_traceless(p, q, r, -h));
        return (eval(plus) - eval(minus)) / (2.0 * h);
    };

    std::array<double, 3> res{};
    // X(n(t).f) = n(t).(X f)
    res[0] = std::abs(lie_derivative(eval_shift, x0.rep, LieDirection::X, h) -
                      fd_direction(gt, 0.0, 1.0, 0.0));
    // Y(n(t).f) = n(t).((Y + tX) f);   Y + tX = (1/2, t; 0, -1/2)
    res[1] = std::abs(lie_derivative(eval_shift, x0.rep, LieDirection::Y, h) -
                      fd_direction(gt, 0.5, t, 0.0));
    // Z(n(t).f) = n(t).((Z - 2tY - t^2 X) f);   matrix (-t, -t^2; 1, t)
    res[2] = std::abs(lie_derivative(eval_shift, x0.rep, LieDirection::Z, h) -
                      fd_direction(gt, -t, -t * t, 1.0));
    return res;
}

std::vector<std::pair<double, TwistReport>> decay_curve(const Observable& f, OrbitCache& orbit,
                                                        double a, int k,
                                                        const std::vector<double>& T_list,
                                                        const QuadratureSpec& q) {
    validate(q);
    if (T_list.empty()) return {};
    for (std::size_t i = 0; i < T_list.size(); ++i) {
        if (!(T_list[i] >= 1.0)) throw DomainError("decay_curve: T must be >= 1");
        if (i > 0 && !(T_list[i] > T_list[i - 1]))
            throw DomainError("decay_curve: T list must be strictly increasing");
    }
    double Tmax = T_list.back();
    orbit.ensure(Tmax);

    PanelIntegrator pi{&orbit, &f, a, k, q.nodes_per_panel};
    const double L = twist_panel_length(a, q);
    PairwiseComplex acc;
    double err_sum = 0.0;
    std::vector<std::pair<double, TwistReport>> out;
    std::size_t next_cp = 0;
    double t0 = 0.0;
    while (next_cp < T_list.size()) {
        double T = T_list[next_cp];
        // Full panels strictly below the checkpoint.
        while (t0 + L <= T) {
            double err;
            acc.add(pi.panel(t0, t0 + L, err));
            err_sum += err;
            t0 += L;
        }
        // Partial panel up to the checkpoint (not merged into the running
        // accumulator; the next checkpoint re-integrates it).
        C partial{};
        double perr = 0.0;
        if (T > t0) partial = pi.panel(t0, T, perr);
        TwistReport rep;
        rep.value = (acc.total() + partial) / T;
        rep.abs_error_estimate = (err_sum + perr) / T;
        rep.samples_used = pi.samples;
        rep.max_cusp_height = orbit.max_cusp_height();
        rep.refinement_warning =
            rep.abs_error_estimate > std::max(q.target_rel_error * std::abs(rep.value), 1e-14);
        out.emplace_back(T, rep);
        ++next_cp;
    }
    return out;
}

std::vector<std::pair<double, TwistReport>> decay_curve(const Observable& f,
                                                        const SurfacePoint& x0, double a, int k,
                                                        const std::vector<double>& T_list,
                                                        const QuadratureSpec& q) {
    OrbitCache orbit(x0);
    return decay_curve(f, orbit, a, k, T_list, q);
}

} // namespace horolab
