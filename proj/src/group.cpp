#include "horolab/group.hpp"

#include <cmath>

namespace horolab {

GroupElement canonicalize(GroupElement g) {
    if (!std::isfinite(g.a) || !std::isfinite(g.b) || !std::isfinite(g.c) || !std::isfinite(g.d))
        throw NumericError("canonicalize: non-finite entry");
    double det = g.det();
    if (!(det > 0.0))
        throw NumericError("canonicalize: nonpositive determinant " + std::to_string(det));
    if (det != 1.0) {
        double s = 1.0 / std::sqrt(det);
        g.a *= s;
        g.b *= s;
        g.c *= s;
        g.d *= s;
    }
    // PSL representative: first nonzero of (a, b) nonnegative.
    bool flip = (g.a != 0.0) ? (g.a < 0.0) : (g.b < 0.0);
    if (flip) {
        g.a = -g.a;
        g.b = -g.b;
        g.c = -g.c;
        g.d = -g.d;
    }
    return g;
}

bool is_canonical(const GroupElement& g, double tol) {
    if (std::abs(g.det() - 1.0) > tol) return false;
    if (g.a != 0.0) return g.a >= 0.0;
    return g.b >= 0.0;
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    GroupElement r;
    r.a = g.a * h.a + g.b * h.c;
    r.b = g.a * h.b + g.b * h.d;
    r.c = g.c * h.a + g.d * h.c;
    r.d = g.c * h.b + g.d * h.d;
    return canonicalize(r);
}

GroupElement n_of(double t) { return GroupElement{1.0, t, 0.0, 1.0}; }

GroupElement a_of(double t) {
    double e = std::exp(0.5 * t);
    return GroupElement{e, 0.0, 0.0, 1.0 / e};
}

GroupElement lower_of(double t) { return GroupElement{1.0, 0.0, t, 1.0}; }

GroupElement rotation_of(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return canonicalize(GroupElement{c, -s, s, c});
}

GroupElement flow_n(const GroupElement& g, double t) {
    if (!std::isfinite(t)) throw DomainError("flow_n: non-finite time");
    return compose(g, n_of(t));
}

GroupElement flow_a(const GroupElement& g, double t) {
    if (!std::isfinite(t)) throw DomainError("flow_a: non-finite time");
    return compose(g, a_of(t));
}

GroupElement exp_direction(LieDirection d, double t) {
    switch (d) {
        case LieDirection::X: return n_of(t);
        case LieDirection::Y: return a_of(t);
        case LieDirection::Z: return lower_of(t);
    }
    throw DomainError("exp_direction: bad direction");
}

GroupElement exp_traceless(double p, double q, double r, double s) {
    // M^2 = (p^2 + qr) I for traceless M, so exp(sM) = cosh(sl) I +
    // (sinh(sl)/l) M with l = sqrt(p^2 + qr) (trig branch for l imaginary,
    // affine branch for l = 0).
    double disc = p * p + q * r;
    double ch, shl;
    if (disc > 1e-30) {
        double l = std::sqrt(disc);
        ch = std::cosh(s * l);
        shl = std::sinh(s * l) / l;
    } else if (disc < -1e-30) {
        double l = std::sqrt(-disc);
        ch = std::cos(s * l);
        shl = std::sin(s * l) / l;
    } else {
        return canonicalize(GroupElement{1.0 + s * p, s * q, s * r, 1.0 - s * p});
    }
    return canonicalize(GroupElement{ch + shl * p, shl * q, shl * r, ch - shl * p});
}

double lie_derivative(const std::function<double(const GroupElement&)>& f,
                      const GroupElement& g, LieDirection d, double h) {
    if (!(h >= 1e-7 && h <= 1e-3)) throw DomainError("lie_derivative: h outside [1e-7, 1e-3]");
    GroupElement plus = compose(g, exp_direction(d, h));
    GroupElement minus = compose(g, exp_direction(d, -h));
    return (f(plus) - f(minus)) / (2.0 * h);
}

double lie_derivative_traceless(const std::function<double(const GroupElement&)>& f,
                                const GroupElement& g, double p, double q, double r,
                                double h) {
    if (!(h >= 1e-7 && h <= 1e-3)) throw DomainError("lie_derivative: h outside [1e-7, 1e-3]");
    double norm = std::sqrt(p * p + q * q + r * r);
    if (norm == 0.0) return 0.0;
    // Step along the unit direction; rescale the difference quotient.
    double pu = p / norm, qu = q / norm, ru = r / norm;
    GroupElement plus = compose(g, exp_traceless(pu, qu, ru, h));
    GroupElement minus = compose(g, exp_traceless(pu, qu, ru, -h));
    return norm * (f(plus) - f(minus)) / (2.0 * h);
}

} // namespace horolab
