#include "horolab/exponents.hpp"

#include <cmath>

namespace horolab {

double venkatesh_b(double alpha0) {
    if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) throw DomainError("venkatesh_b: alpha0 outside [0, 1]");
    double num = 1.0 - 2.0 * alpha0;
    return num * num / (8.0 * (3.0 - 2.0 * alpha0));
}

double bootstrap_eta(int j) {
    if (j < 0) throw DomainError("bootstrap_eta: negative iteration count");
    double eta = 0.0;
    for (int i = 0; i < j; ++i) eta = 1.0 / (9.0 - 2.0 * eta);
    return eta;
}

double eta_fixed_point() { return (9.0 - std::sqrt(73.0)) / 4.0; }

double gamma_max(double b, double b1) {
    if (!(b >= 0.0)) throw DomainError("gamma_max: b must be >= 0");
    if (!(b1 > 0.0)) throw DomainError("gamma_max: b1 must be positive");
    double s = b + 2.0 * b1;
    if (!(s < 6.0)) throw DomainError("gamma_max: needs b + 2 b1 < 6");
    return s / (6.0 - s);
}

double optimize_H(double T, double eta) {
    if (!(T >= 1.0)) throw DomainError("optimize_H: T must be >= 1");
    if (!(eta < 4.5)) throw DomainError("optimize_H: eta must be below 9/2");
    return std::pow(T, 2.0 / (9.0 - 2.0 * eta));
}

TimechangeExponents timechange_exponents(double alpha0) {
    if (!(alpha0 >= 0.0 && alpha0 <= 1.0))
        throw DomainError("timechange_exponents: alpha0 outside [0, 1]");
    TimechangeExponents e;
    double one = 1.0 - alpha0;
    e.twist_rate = one * one / (100.0 - 4.0 * alpha0);
    e.H_exponent = one / (25.0 - alpha0);
    e.gamma_threshold = 0.5 * e.twist_rate;
    return e;
}

double invariant_distribution_exponent(double mu, int sign) {
    if (!(mu > 0.0)) throw DomainError("invariant_distribution_exponent: mu must be positive");
    if (sign != +1 && sign != -1) throw DomainError("invariant_distribution_exponent: sign must be +-1");
    double re = mu >= 0.25 ? 0.0 : std::sqrt(1.0 - 4.0 * mu);
    return 0.5 * (1.0 + sign * re);
}

DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4) throw DomainError("fit_decay_exponent: needs at least 4 points");
    DecayFit fit;
    fit.points.reserve(points.size());
    double prev_T = 0.0;
    for (const auto& [T, v] : points) {
        if (!(T > prev_T)) throw DomainError("fit_decay_exponent: T must be strictly increasing");
        if (!(v > 0.0)) throw DomainError("fit_decay_exponent: values must be positive");
        prev_T = T;
        fit.points.emplace_back(std::log(T), std::log(v));
    }
    double n = static_cast<double>(fit.points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : fit.points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (const auto& [x, y] : fit.points) {
        double r = y - (fit.intercept + fit.slope * x);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

ExponentProfile exponent_profile(double alpha0, double b1) {
    if (!(b1 > 0.0 && b1 < 1.0 / 9.0 + 1e-15))
        throw DomainError("exponent_profile: b1 must lie in (0, 1/9]");
    ExponentProfile p;
    p.alpha0 = alpha0;
    p.lambda1 = 0.25 * (1.0 - alpha0 * alpha0);
    p.b = venkatesh_b(alpha0);
    p.b1 = b1;
    p.eta1 = bootstrap_eta(1);
    p.eta_star = eta_fixed_point();
    p.gamma_max_gap = gamma_max(p.b, b1);
    p.gamma_max_flat = gamma_max(0.0, b1);
    p.timechange = timechange_exponents(alpha0);
    return p;
}

} // namespace horolab
