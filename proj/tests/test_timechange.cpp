#include <doctest.h>

#include <cmath>
#include <random>

#include "horolab/timechange.hpp"

using namespace horolab;

namespace {
TimeChange default_time_change() {
    BumpSpec rb;
    rb.cx = 0.0;
    rb.cy = 2.0;
    rb.ctheta = 1.5708;
    rb.wx = 0.25;
    rb.wy = 0.35;
    rb.wtheta = 1.0;
    rb.amplitude = 0.4 * std::exp(3.0); // peak 0.4
    return TimeChange(make_bump(rb));
}
} // namespace

TEST_CASE("construction bounds") {
    BumpSpec rb = default_bump0();
    rb.amplitude = 0.8 * std::exp(3.0); // peak 0.8 > 1/2
    CHECK_THROWS_AS(TimeChange(make_bump(rb)), ConstructionError);
    TimeChange tc = default_time_change();
    // rho in [1/2, 3/2] on a sample of points.
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ux(-0.4, 0.4), uy(1.1, 4.0), ut(0.1, 3.0);
    for (int i = 0; i < 200; ++i) {
        double r = tc.rho_chart(ux(rng), uy(rng), ut(rng));
        CHECK(r >= 0.5);
        CHECK(r <= 1.5);
    }
}

TEST_CASE("identity time change degenerations") {
    TimeChange id = TimeChange::identity();
    SurfacePoint x0 = default_base_point();
    CHECK(cocycle_tau(id, x0, 17.5) == doctest::Approx(17.5).epsilon(1e-14));
    CHECK(invert_tau(id, x0, 123.456) == doctest::Approx(123.456).epsilon(1e-11));
    CHECK(invert_tau(id, x0, 0.0) == 0.0);

    SurfacePoint via_tc = timechange_flow(id, x0, 41.0);
    SurfacePoint direct = reduce(flow_n(x0.rep, 41.0));
    CHECK(std::abs(via_tc.x - direct.x) < 1e-9);
    CHECK(std::abs(via_tc.y - direct.y) < 1e-9);

    Observable f = default_zero_average_observable();
    CHECK(rho_volume_integral(id, f) == doctest::Approx(volume_integral(f)).epsilon(1e-12));

    TwistParams p{1.0, 300.0, 0, 0.0};
    TwistReport rho_rep = twisted_average_rho(f, x0, id, p);
    TwistReport plain_rep = twisted_average(f, x0, p);
    CHECK(std::abs(rho_rep.value - plain_rep.value) < 1e-8);
}

TEST_CASE("cocycle identity and bounds") {
    TimeChange tc = default_time_change();
    SurfacePoint x0 = default_base_point();

    double t = 7.3, s = 2.9;
    double lhs = cocycle_tau(tc, x0, t + s);
    double rhs = cocycle_tau(tc, x0, t) + cocycle_tau(tc, reduce(flow_n(x0.rep, t)), s);
    CHECK(std::abs(lhs - rhs) < 1e-8);

    // Grid of (t, s) samples.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int i = 0; i < 100; ++i) {
        double ti = u(rng), si = u(rng);
        double l = cocycle_tau(tc, x0, ti + si);
        double r = cocycle_tau(tc, x0, ti) + cocycle_tau(tc, reduce(flow_n(x0.rep, ti)), si);
        CHECK(std::abs(l - r) < 1e-8);
    }

    // t/2 <= tau <= 3t/2 and strict monotonicity with slope >= 1/2.
    for (double ti : {1.0, 10.0, 100.0}) {
        double tau = cocycle_tau(tc, x0, ti);
        CHECK(tau >= ti / 2.0);
        CHECK(tau <= 1.5 * ti);
    }
    double t1 = 20.0, t2 = 28.0;
    CHECK(cocycle_tau(tc, x0, t2) - cocycle_tau(tc, x0, t1) >= (t2 - t1) / 2.0 - 1e-12);
}

TEST_CASE("tau inversion round trip") {
    TimeChange tc = default_time_change();
    SurfacePoint x0 = default_base_point();
    double t = 123.456;
    double tau = cocycle_tau(tc, x0, t);
    double back = invert_tau(tc, x0, tau);
    CHECK(std::abs(back - t) < 1e-8);
    CHECK_THROWS_AS(invert_tau(tc, x0, -1.0), DomainError);
}

TEST_CASE("time-changed flow property") {
    TimeChange tc = default_time_change();
    SurfacePoint x0 = default_base_point();
    double tau1 = 11.0, tau2 = 17.0;
    SurfacePoint whole = timechange_flow(tc, x0, tau1 + tau2);
    SurfacePoint steps = timechange_flow(tc, timechange_flow(tc, x0, tau1), tau2);
    CHECK(std::abs(whole.x - steps.x) < 1e-7);
    CHECK(std::abs(whole.y - steps.y) < 1e-7);
    SurfacePoint fixed = timechange_flow(tc, x0, 0.0);
    CHECK(std::abs(fixed.x - x0.x) < 1e-12);
}

TEST_CASE("rho volume integral") {
    TimeChange tc = default_time_change();
    Observable one = Observable::constant(1.0);
    double v = rho_volume_integral(tc, one);
    CHECK(v >= 0.5);
    CHECK(v <= 1.5);
    // Linearity in f.
    Observable f0 = make_bump(default_bump0());
    Observable f1 = make_bump(default_bump1());
    Observable pair = Observable::pair_difference(default_bump0(), default_bump1(), 2.0);
    double lin = rho_volume_integral(tc, f0) - 2.0 * rho_volume_integral(tc, f1);
    CHECK(rho_volume_integral(tc, pair) == doctest::Approx(lin).epsilon(1e-10));
}

TEST_CASE("zero rho-average pair") {
    TimeChange tc = default_time_change();
    Observable f = zero_rho_average_pair(tc, make_bump(default_bump0()), make_bump(default_bump1()));
    CHECK(std::abs(rho_volume_integral(tc, f)) < 1e-8);
}

TEST_CASE("oscillatory decay of the constant observable") {
    // f = 1: the substituted integral is exactly (1/T) int_0^T e^{iat} dt,
    // so |value| <= 2/(|a| T) up to quadrature error.
    TimeChange tc = default_time_change();
    SurfacePoint x0 = default_base_point();
    Observable one = Observable::constant(1.0);
    TwistParams p{1.0, 400.0, 0, 0.0};
    TwistReport r = twisted_average_rho(one, x0, tc, p);
    CHECK(std::abs(r.value) <= 3.0 / (std::abs(p.a) * p.T));
}

TEST_CASE("commutation relation spot check") {
    TimeChange tc = default_time_change();
    Observable f = make_bump(default_bump0());
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ux(-0.25, 0.0), uy(1.3, 1.9), ut(0.8, 1.7);
    for (int i = 0; i < 10; ++i) {
        SurfacePoint p = reduce(from_iwasawa(ux(rng), uy(rng), ut(rng)));
        CHECK(commutation_residual(tc, f, p) < 1e-3);
    }
}
