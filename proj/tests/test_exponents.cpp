#include <doctest.h>

#include <cmath>
#include <random>

#include "horolab/exponents.hpp"

using namespace horolab;

TEST_CASE("venkatesh exponent") {
    CHECK(venkatesh_b(0.0) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(venkatesh_b(0.5) == 0.0);
    // Monotone decreasing on [0, 1/2].
    double prev = venkatesh_b(0.0);
    for (double a = 0.01; a <= 0.5; a += 0.01) {
        double v = venkatesh_b(a);
        CHECK(v <= prev);
        prev = v;
    }
    CHECK_THROWS_AS(venkatesh_b(1.5), DomainError);
}

TEST_CASE("bootstrap recursion") {
    CHECK(bootstrap_eta(0) == 0.0);
    CHECK(bootstrap_eta(1) == doctest::Approx(1.0 / 9.0).epsilon(1e-16));
    CHECK(bootstrap_eta(2) == doctest::Approx(9.0 / 79.0).epsilon(1e-15));
    CHECK(std::abs(bootstrap_eta(50) - eta_fixed_point()) < 1e-12);

    // Monotone increase, bounded by the fixed point (strictly increasing
    // until double precision saturates at the limit).
    double star = eta_fixed_point();
    double prev = -1.0;
    for (int j = 0; j <= 100; ++j) {
        double e = bootstrap_eta(j);
        CHECK(e >= prev);
        if (star - e > 1e-14) CHECK(e > prev);
        CHECK(e <= star + 1e-15);
        prev = e;
    }
}

TEST_CASE("fixed point identities") {
    double y = eta_fixed_point();
    CHECK(y == doctest::Approx(0.11399906367062).epsilon(1e-12));
    CHECK(std::abs(2.0 * y * y - 9.0 * y + 1.0) < 1e-14);
    CHECK(std::abs(1.0 / (9.0 - 2.0 * y) - y) < 1e-14);
    CHECK(y < 1.0 / 8.772);
}

TEST_CASE("gamma_max") {
    CHECK(gamma_max(0.0, 1.0 / 9.0) == doctest::Approx(1.0 / 26.0).epsilon(1e-15));
    CHECK(gamma_max(1.0 / 24.0, 1.0 / 9.0) == doctest::Approx(19.0 / 413.0).epsilon(1e-14));
    CHECK(gamma_max(0.0, 1e-12) < 1e-11); // b + 2b1 -> 0
    // Equality with 1/(2 r0 - 1).
    for (double b : {0.0, 0.02, 0.04})
        for (double b1 : {0.05, 0.1, 1.0 / 9.0}) {
            double r0 = 3.0 / (b + 2.0 * b1);
            CHECK(gamma_max(b, b1) == doctest::Approx(1.0 / (2.0 * r0 - 1.0)).epsilon(1e-14));
        }
    // Strictly increasing in each argument.
    CHECK(gamma_max(0.01, 0.1) > gamma_max(0.0, 0.1));
    CHECK(gamma_max(0.01, 0.11) > gamma_max(0.01, 0.1));
    CHECK_THROWS_AS(gamma_max(6.0, 0.1), DomainError);
}

TEST_CASE("optimize_H") {
    CHECK(optimize_H(512.0, 0.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(optimize_H(1.0, 0.3) == 1.0);
    // Consistency with the recursion: the exponent at the fixed point is 2 eta*.
    double star = eta_fixed_point();
    CHECK(optimize_H(64.0, star) == doctest::Approx(std::pow(64.0, 2.0 * star)).epsilon(1e-13));
}

TEST_CASE("timechange exponents") {
    TimechangeExponents e0 = timechange_exponents(0.0);
    CHECK(e0.twist_rate == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(e0.H_exponent == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(e0.gamma_threshold == doctest::Approx(0.005).epsilon(1e-15));
    TimechangeExponents e1 = timechange_exponents(1.0);
    CHECK(e1.twist_rate == 0.0);
    CHECK(e1.H_exponent == 0.0);
    CHECK(e1.gamma_threshold == 0.0);
    // rate (100 - 4 a0) = (1 - a0)^2 exactly.
    for (double a : {0.0, 0.3, 0.8}) {
        TimechangeExponents e = timechange_exponents(a);
        CHECK(e.twist_rate * (100.0 - 4.0 * a) == doctest::Approx((1 - a) * (1 - a)).epsilon(1e-14));
    }
}

TEST_CASE("invariant distribution exponents") {
    CHECK(invariant_distribution_exponent(0.25, +1) == 0.5);
    CHECK(invariant_distribution_exponent(0.25, -1) == 0.5);
    CHECK(invariant_distribution_exponent(3.0 / 16.0, -1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(invariant_distribution_exponent(0.7, +1) == 0.5);
    CHECK(invariant_distribution_exponent(0.7, -1) == 0.5);
}

TEST_CASE("decay fit") {
    // Exact power law.
    std::vector<std::pair<double, double>> pts;
    for (double T : {10.0, 100.0, 1000.0, 10000.0, 100000.0})
        pts.emplace_back(T, 5.0 * std::pow(T, -0.3));
    DecayFit fit = fit_decay_exponent(pts);
    CHECK(fit.slope == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);

    // Constant values: slope 0.
    std::vector<std::pair<double, double>> flat;
    for (double T : {1.0, 2.0, 4.0, 8.0}) flat.emplace_back(T, 3.0);
    CHECK(fit_decay_exponent(flat).slope == doctest::Approx(0.0));

    // Noisy power law: slope within 0.02 of the truth.
    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<std::pair<double, double>> noisy;
    for (int e = 0; e < 12; ++e) {
        double T = std::pow(2.0, 5 + e);
        noisy.emplace_back(T, 2.0 * std::pow(T, -0.5) * std::exp(noise(rng)));
    }
    CHECK(std::abs(fit_decay_exponent(noisy).slope + 0.5) < 0.02);

    CHECK_THROWS_AS(fit_decay_exponent({{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(fit_decay_exponent({{1.0, 1.0}, {2.0, -1.0}, {3.0, 1.0}, {4.0, 1.0}}),
                    DomainError);
    CHECK_THROWS_AS(fit_decay_exponent({{1.0, 1.0}, {1.0, 1.0}, {3.0, 1.0}, {4.0, 1.0}}),
                    DomainError);
}

TEST_CASE("exponent profile ties the table together") {
    ExponentProfile p = exponent_profile(0.0, 1.0 / 9.0);
    CHECK(p.b == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(p.gamma_max_flat == doctest::Approx(1.0 / 26.0).epsilon(1e-15));
    CHECK(p.eta1 == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(p.lambda1 == doctest::Approx(0.25).epsilon(1e-15));
}
