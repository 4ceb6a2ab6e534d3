#include <doctest.h>

#include <cmath>
#include <random>

#include "horolab/lattice.hpp"
#include "oracles.hpp"

using namespace horolab;

namespace {
double coord_dist(const SurfacePoint& p, const SurfacePoint& q) {
    double dth = std::abs(p.theta - q.theta);
    dth = std::min(dth, M_PI - dth); // angle mod pi
    return std::max({std::abs(p.x - q.x), std::abs(p.y - q.y), dth});
}

GroupElement random_gamma(std::mt19937_64& rng, int max_len) {
    // Random word over {T, T^-1, S} of bounded length, as a group element.
    GroupElement g;
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_int_distribution<int> len(0, max_len);
    int L = len(rng);
    for (int i = 0; i < L; ++i) {
        switch (pick(rng)) {
            case 0: g = compose(g, n_of(1.0)); break;
            case 1: g = compose(g, n_of(-1.0)); break;
            default: g = compose(g, canonicalize(GroupElement{0.0, -1.0, 1.0, 0.0})); break;
        }
    }
    return g;
}
} // namespace

TEST_CASE("reduce examples") {
    // Base point z = i (identity): already reduced.
    SurfacePoint id = reduce(GroupElement{});
    CHECK(id.x == doctest::Approx(0.0));
    CHECK(id.y == doctest::Approx(1.0));
    CHECK(is_reduced(id));

    // z = 0.7 + 0.8i reduces to ~0.4110 + 1.0959i.
    SurfacePoint p = reduce(from_iwasawa(0.7, 0.8, 0.3));
    CHECK(p.x == doctest::Approx(0.41095890410958).epsilon(1e-8));
    CHECK(p.y == doctest::Approx(1.09589041095890).epsilon(1e-8));

    // Brute-force word oracle agrees.
    double rx, ry;
    oracles::brute_force_reduce(0.7, 0.8, 4, rx, ry);
    CHECK(p.x == doctest::Approx(rx).epsilon(1e-9));
    CHECK(p.y == doctest::Approx(ry).epsilon(1e-9));

    // High in the cusp: only the x-translation applies.
    SurfacePoint c = reduce(from_iwasawa(0.3, 10.0, 1.0));
    CHECK(c.x == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("is_reduced examples") {
    SurfacePoint p;
    p.x = 2.0;
    p.y = 1.0;
    p.rep = from_iwasawa(2.0, 1.0, 0.0);
    CHECK_FALSE(is_reduced(p));
    CHECK(is_reduced(reduce(GroupElement{})));
}

TEST_CASE("reduce properties over random elements") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.0, 3.0);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        // Random matrix with norm up to ~1e3, projected to det 1.
        double s = std::pow(10.0, scale(rng));
        GroupElement g{entry(rng) * s, entry(rng) * s, entry(rng) * s, entry(rng) * s};
        double det = g.det();
        if (std::abs(det) < 1e-6) continue;
        if (det < 0.0) {
            std::swap(g.a, g.b);
            std::swap(g.c, g.d);
        }
        g = canonicalize(g);
        SurfacePoint p = reduce(g);
        CHECK(is_reduced(p));
        // Idempotence.
        SurfacePoint q = reduce(p.rep);
        CHECK(coord_dist(p, q) < 1e-9);
        ++checked;
    }
    CHECK(checked > 9000);
}

TEST_CASE("gamma invariance of reduce") {
    std::mt19937_64 rng(11);
    GroupElement g = from_iwasawa(0.21, 0.9, 0.5);
    SurfacePoint base = reduce(g);
    for (int i = 0; i < 200; ++i) {
        GroupElement gamma = random_gamma(rng, 6);
        SurfacePoint p = reduce(compose(gamma, g));
        CHECK(coord_dist(p, base) < 1e-9);
    }
}

TEST_CASE("orbit consistency across intermediate reduction") {
    SurfacePoint x0 = default_base_point();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    for (int i = 0; i < 25; ++i) {
        double t1 = u(rng), t2 = u(rng);
        SurfacePoint one = reduce(flow_n(x0.rep, t1 + t2));
        SurfacePoint two = reduce(flow_n(reduce(flow_n(x0.rep, t1)).rep, t2));
        CHECK(coord_dist(one, two) < 1e-8);
    }
}

TEST_CASE("reduction divergence guard") {
    CHECK_THROWS_AS(reduce(from_iwasawa(0.7, 0.3, 0.1), 0), NumericError);
}

TEST_CASE("boundary tie-breaking") {
    // |z| = 1 resolved toward x <= 0.
    SurfacePoint p = reduce(from_iwasawa(0.5, std::sqrt(3.0) / 2.0, 0.2));
    CHECK(p.x <= 1e-9);
    CHECK(p.x * p.x + p.y * p.y >= 1.0 - 1e-9);
}
