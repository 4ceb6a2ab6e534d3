#include <doctest.h>

#include <cmath>

#include "horolab/jets.hpp"

using namespace horolab;
using C = std::complex<double>;

TEST_CASE("taylor jet arithmetic against closed forms") {
    // f(x) = exp(-1/(1-x^2)) at x = 0.3, derivatives vs central differences.
    auto f = [](double x) { return std::exp(-1.0 / (1.0 - x * x)); };
    double x0 = 0.3;
    TaylorJet u = TaylorJet::variable(x0, 6);
    TaylorJet w = TaylorJet::constant(1.0, 6) - u * u;
    TaylorJet jet = ((-1.0) * w.recip()).exp();

    CHECK(std::abs(jet.value() - C(f(x0), 0)) < 1e-15);
    double h = 1e-5;
    double d1 = (f(x0 + h) - f(x0 - h)) / (2 * h);
    double d2 = (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / (h * h);
    CHECK(std::abs(jet.derivative(1).real() - d1) < 1e-8);
    CHECK(std::abs(jet.derivative(2).real() - d2) < 1e-4);
}

TEST_CASE("taylor jet derived/log/abs_pow") {
    TaylorJet x = TaylorJet::variable(2.0, 5);
    TaylorJet lx = x.log();
    CHECK(std::abs(lx.value() - C(std::log(2.0), 0)) < 1e-15);
    CHECK(std::abs(lx.derivative(1) - C(0.5, 0)) < 1e-15);
    CHECK(std::abs(lx.derivative(2) - C(-0.25, 0)) < 1e-15);

    TaylorJet p = x.abs_pow(0.3); // x^0.3 at 2
    CHECK(std::abs(p.value() - C(std::pow(2.0, 0.3), 0)) < 1e-14);
    CHECK(std::abs(p.derivative(1) - C(0.3 * std::pow(2.0, -0.7), 0)) < 1e-13);

    TaylorJet neg = TaylorJet::variable(-2.0, 3).abs_pow(0.5); // |x|^{1/2} at -2
    CHECK(std::abs(neg.value() - C(std::sqrt(2.0), 0)) < 1e-14);
    // d/dx |x|^{1/2} = -1/(2 sqrt(2)) at x = -2... sign: |x| = -x there.
    CHECK(std::abs(neg.derivative(1) - C(-0.5 / std::sqrt(2.0), 0)) < 1e-14);
}

TEST_CASE("multijet mixed partials of a product") {
    // F(s1, s2) = (1 + s1)(2 + 3 s2): d2F/ds1 ds2 = 3.
    MultiJet a = MultiJet::variable(1.0, 0, 2);
    MultiJet b = MultiJet::constant(2.0, 2) + 3.0 * MultiJet::variable(0.0, 1, 2);
    CHECK((a * b).top() == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("multijet elementary functions match univariate derivatives") {
    // g(s) = phi(c + s): top of 1-var jet is phi'(c).
    auto check1 = [](double c, auto&& apply, double expected) {
        MultiJet v = MultiJet::variable(c, 0, 1);
        CHECK(apply(v).top() == doctest::Approx(expected).epsilon(1e-12));
    };
    check1(2.0, [](const MultiJet& j) { return j.recip(); }, -0.25);
    check1(0.7, [](const MultiJet& j) { return j.exp(); }, std::exp(0.7));
    check1(3.0, [](const MultiJet& j) { return j.log(); }, 1.0 / 3.0);
    check1(0.4, [](const MultiJet& j) { return j.atan(); }, 1.0 / (1.0 + 0.16));

    // Third mixed partial of atan(c + s1 + s2 + s3) is atan'''(c).
    double c = 0.4;
    MultiJet s = MultiJet::constant(c, 3) + MultiJet::variable(0.0, 0, 3) +
                 MultiJet::variable(0.0, 1, 3) + MultiJet::variable(0.0, 2, 3);
    double q = 1.0 + c * c;
    double d3 = (6.0 * c * c - 2.0) / (q * q * q);
    CHECK(s.atan().top() == doctest::Approx(d3).epsilon(1e-10));
}
