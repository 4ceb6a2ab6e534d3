#include <doctest.h>

#include <cmath>

#include "horolab/quadrature.hpp"
#include "horolab/summation.hpp"
#include "horolab/twisted.hpp"

using namespace horolab;
using C = std::complex<double>;

TEST_CASE("constant observable over a full period") {
    Observable one = Observable::constant(1.0);
    SurfacePoint x0 = default_base_point();
    TwistParams p{1.0, 2.0 * M_PI, 0, 0.0};
    TwistReport r = twisted_average(one, x0, p);
    CHECK(std::abs(r.value) < 1e-10);

    // And the closed form (e^{iaT}-1)/(iaT) at a generic T.
    p.T = 5.0;
    r = twisted_average(one, x0, p);
    C expect = (std::exp(C(0, 5.0)) - 1.0) / C(0, 5.0);
    CHECK(std::abs(r.value - expect) < 1e-12);
}

TEST_CASE("a = 0 equals plain average") {
    Observable f = default_zero_average_observable();
    SurfacePoint x0 = default_base_point();
    TwistParams p{0.0, 500.0, 0, 0.0};
    TwistReport tw = twisted_average(f, x0, p);
    TwistReport pl = plain_average(f, x0, 500.0);
    CHECK(tw.value.real() == pl.value.real());
    CHECK(tw.value.imag() == pl.value.imag());
}

TEST_CASE("plain average of a constant and additivity") {
    Observable c = Observable::constant(2.5);
    SurfacePoint x0 = default_base_point();
    CHECK(std::abs(plain_average(c, x0, 100.0).value - C(2.5, 0)) < 1e-12);

    Observable f = default_zero_average_observable();
    double T = 300.0, T1 = 120.0;
    C whole = plain_average(f, x0, T).value * T;
    SurfacePoint mid = reduce(flow_n(x0.rep, T1));
    C split = plain_average(f, x0, T1).value * T1 + plain_average(f, mid, T - T1).value * (T - T1);
    CHECK(std::abs(whole - split) < 1e-9);
}

TEST_CASE("self-refinement oracle at higher node density") {
    Observable f = default_zero_average_observable();
    SurfacePoint x0 = default_base_point();
    TwistParams p{1.0, 10000.0, 0, 0.0};
    QuadratureSpec coarse; // 12 nodes
    QuadratureSpec dense;
    dense.nodes_per_panel = 24;
    dense.panel_length = 0.5 * twist_panel_length(1.0, coarse); // 4x total density
    TwistReport a = twisted_average(f, x0, p, coarse);
    TwistReport b = twisted_average(f, x0, p, dense);
    CHECK(std::abs(a.value - b.value) < 1e-6);
    CHECK(a.abs_error_estimate < 1e-4); // coarse-vs-fine estimate is conservative
}

TEST_CASE("linearity across the pair decomposition") {
    Observable pair = default_zero_average_observable();
    Observable b0 = make_bump(default_bump0());
    Observable b1 = make_bump(default_bump1());
    SurfacePoint x0 = default_base_point();
    TwistParams p{1.0, 500.0, 0, 0.0};
    C whole = twisted_average(pair, x0, p).value;
    C parts = twisted_average(b0, x0, p).value -
              pair.pair_coeff() * twisted_average(b1, x0, p).value;
    CHECK(std::abs(whole - parts) < 1e-9);
}

TEST_CASE("crude bound |f*sigma_T^k| <= T^k S_inf0") {
    Observable f = default_zero_average_observable();
    double sup = sobolev_norm_estimate(f, 0, NormKind::Sup);
    SurfacePoint x0 = default_base_point();
    for (int k : {0, 1, 2}) {
        TwistParams p{1.0, 64.0, k, 0.0};
        TwistReport r = twisted_average(f, x0, p);
        CHECK(std::abs(r.value) <= std::pow(64.0, k) * sup * (1.0 + 1e-9));
    }
}

TEST_CASE("plain average converges toward the volume integral") {
    Observable f = default_zero_average_observable();
    SurfacePoint x0 = default_base_point();
    std::vector<double> errs;
    for (double T : {100.0, 1000.0, 10000.0, 100000.0})
        errs.push_back(std::abs(plain_average(f, x0, T).value)); // integral is 0
    CHECK(errs.back() < errs.front());
    CHECK(errs.back() < 0.02);
}

TEST_CASE("smoothing discrepancy degenerate cases") {
    Observable zero = Observable::constant(0.0);
    SurfacePoint x0 = default_base_point();
    TwistParams p{1.0, 200.0, 0, 0.0};
    CHECK(smoothing_discrepancy(zero, x0, p) == 0.0); // H = 0 path
    p.H = 15.0;
    CHECK(smoothing_discrepancy(zero, x0, p) == doctest::Approx(0.0));
}

TEST_CASE("smoothing discrepancy against brute-force double quadrature") {
    Observable f = default_zero_average_observable();
    SurfacePoint x0 = default_base_point();
    TwistParams p{1.0, 100.0, 0, 10.0};
    double fast = smoothing_discrepancy(f, x0, p);

    // Brute force: (1/TH) int_0^T int_0^H psi(t+z) f(x0 n(t+z)) dz dt
    // minus the direct twisted average, both by raw tensor quadrature.
    OrbitCache orbit(x0);
    orbit.ensure(p.T + p.H);
    auto inner = [&](double t) {
        PairwiseComplex acc;
        double L = twist_panel_length(p.a, QuadratureSpec{});
        for (double z0 = 0.0; z0 < p.H; z0 += L) {
            double z1 = std::min(z0 + L, p.H);
            acc.add(gauss_integrate(
                [&](double z) {
                    return std::exp(C(0, p.a * (t + z))) * f.value(orbit.at(t + z));
                },
                z0, z1, 16));
        }
        return acc.total() / p.H;
    };
    PairwiseComplex outer;
    double L = twist_panel_length(p.a, QuadratureSpec{});
    for (double t0 = 0.0; t0 < p.T; t0 += L) {
        double t1 = std::min(t0 + L, p.T);
        outer.add(gauss_integrate([&](double t) { return inner(t); }, t0, t1, 16));
    }
    C smoothed_brute = outer.total() / p.T;
    TwistReport direct = twisted_average(f, x0, p);
    double brute = std::abs(smoothed_brute - direct.value);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-4));
}

TEST_CASE("cauchy-schwarz step is an exact discrete inequality") {
    Observable f = default_zero_average_observable();
    SurfacePoint x0 = default_base_point();
    for (double H : {10.0, 50.0}) {
        for (int k : {0, 1}) {
            TwistParams p{1.0, 1000.0, k, H};
            CauchySchwarzSides sides = cauchy_schwarz_sides(f, x0, p);
            CHECK(sides.lhs <= sides.rhs * (1.0 + 1e-12));
            CHECK(sides.rhs > 0.0);
        }
    }
}

TEST_CASE("derivative transport residuals") {
    Observable f = default_zero_average_observable();
    SurfacePoint x0 = default_base_point();
    auto r0 = derivative_transport_check(f, x0, 0.0);
    for (double r : r0) CHECK(r < 1e-8);
    auto r1 = derivative_transport_check(f, x0, 1.0);
    for (double r : r1) CHECK(r < 1e-4);
    auto r100 = derivative_transport_check(f, x0, 100.0);
    for (double r : r100) CHECK(r < 1e-4 * (1.0 + 100.0 * 100.0));
    CHECK_THROWS_AS(derivative_transport_check(f, x0, 2000.0), DomainError);
}

TEST_CASE("decay curve singleton consistency and caching") {
    Observable f = default_zero_average_observable();
    SurfacePoint x0 = default_base_point();
    auto curve = decay_curve(f, x0, 1.0, 0, {256.0});
    TwistParams p{1.0, 256.0, 0, 0.0};
    TwistReport direct = twisted_average(f, x0, p);
    CHECK(curve.size() == 1);
    CHECK(std::abs(curve[0].second.value - direct.value) < 1e-12);

    // Multiple checkpoints from one pass match individual runs.
    auto multi = decay_curve(f, x0, 1.0, 0, {128.0, 256.0, 512.0});
    for (const auto& [T, rep] : multi) {
        TwistParams pi{1.0, T, 0, 0.0};
        CHECK(std::abs(rep.value - twisted_average(f, x0, pi).value) < 1e-10);
    }
    CHECK_THROWS_AS(decay_curve(f, x0, 1.0, 0, {256.0, 128.0}), DomainError);
}

TEST_CASE("twist params validation") {
    Observable f = Observable::constant(1.0);
    SurfacePoint x0 = default_base_point();
    TwistParams bad{1.0, 0.5, 0, 0.0};
    CHECK_THROWS_AS(twisted_average(f, x0, bad), DomainError);
    bad = TwistParams{1.0, 10.0, 9, 0.0};
    CHECK_THROWS_AS(twisted_average(f, x0, bad), DomainError);
    bad = TwistParams{1.0, 10.0, 0, 20.0};
    CHECK_THROWS_AS(twisted_average(f, x0, bad), DomainError);
}
