#include <doctest.h>

#include <cmath>
#include <random>

#include "horolab/quadrature.hpp"
#include "horolab/sparse.hpp"

using namespace horolab;

TEST_CASE("fejer kernel basics") {
    FejerKernel kern{0.1, 10.0};
    CHECK(fejer_eval(kern, 0.0) == doctest::Approx(10.0).epsilon(1e-15)); // 1/delta
    CHECK(fejer_eval(kern, 0.1) == 0.0);
    CHECK(fejer_eval(kern, -0.2) == 0.0);
    // Unit mass by trapezoid refinement.
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        double t = -kern.delta + 2.0 * kern.delta * i / n;
        double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * fejer_eval(kern, t);
    }
    sum *= 2.0 * kern.delta / n;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(validate(FejerKernel{0.6, 1.0}), DomainError); // delta >= K/2
}

TEST_CASE("fejer coefficients") {
    FejerKernel kern{0.1, 10.0};
    CHECK(fejer_coefficient(kern, 0) == doctest::Approx(0.1).epsilon(1e-15)); // 1/K
    // |a_k| <= 1/K and match against direct integration for |k| <= 100.
    for (long long k = -100; k <= 100; ++k) {
        double a = fejer_coefficient(kern, k);
        CHECK(std::abs(a) <= 1.0 / kern.K + 1e-15);
        CHECK(std::abs(a - fejer_coefficient_direct(kern, k)) < 1e-10);
    }
    // sum |a_k| <= 2/delta over the truncation M = 1e4 K/delta.
    FejerKernel small{0.1, 1.0};
    long long M = static_cast<long long>(1e4 * small.K / small.delta);
    double sum = fejer_coefficient(small, 0);
    for (long long k = 1; k <= M; ++k) sum += 2.0 * std::abs(fejer_coefficient(small, k));
    CHECK(sum <= 2.0 / small.delta);
    CHECK(sum >= 0.99 / small.delta); // truncated full sum sits near 1/delta
}

TEST_CASE("poisson periodization") {
    // t = 0 against LHS = 1/delta.
    FejerKernel kern{0.1, 10.0};
    CHECK(fejer_eval(kern, 0.0) == doctest::Approx(1.0 / kern.delta));
    CHECK(periodization_check(kern, 0.0, 1e-9) < 1e-8);
    // t = K/2: left side vanishes.
    CHECK(fejer_eval(kern, kern.K / 2.0) == 0.0);
    CHECK(periodization_check(kern, kern.K / 2.0, 1e-9) < 1e-8);

    std::mt19937_64 rng(5);
    for (double delta : {0.01, 0.1})
        for (double K : {1.0, 10.0, 100.0}) {
            FejerKernel kn{delta, K};
            std::uniform_real_distribution<double> u(-2.0 * K, 2.0 * K);
            double worst = 0.0;
            for (int i = 0; i < 1000; ++i) worst = std::max(worst, periodization_check(kn, u(rng), 1e-9));
            CHECK(worst < 1e-8);
        }
    CHECK_THROWS_AS(periodization_check(kern, 0.0, 1e-13), DomainError);
}

TEST_CASE("ap_sum basics") {
    SurfacePoint x0 = default_base_point();
    Observable c = Observable::constant(1.5);
    CHECK(ap_sum(c, x0, 10.0, 1000).sum == doctest::Approx(1500.0).epsilon(1e-12));

    Observable f = default_zero_average_observable();
    OrbitSumReport one = ap_sum(f, x0, 7.0, 1);
    CHECK(one.sum == doctest::Approx(f.value(reduce(flow_n(x0.rep, 7.0)))).epsilon(1e-12));

    // |sum|/count decreasing across decades (progression equidistribution).
    double prev = 1e9;
    for (std::uint64_t count : {1000ull, 10000ull, 100000ull}) {
        double avg = std::abs(ap_sum(f, x0, 10.0, count).sum) / static_cast<double>(count);
        CHECK(avg < prev);
        prev = avg;
    }
}

TEST_CASE("weighted orbit sum approximates the progression sum") {
    SurfacePoint x0 = default_base_point();
    Observable f = default_zero_average_observable();
    Observable zero = Observable::constant(0.0);
    FejerKernel kern{1e-3, 5.0};

    CHECK(weighted_orbit_sum(zero, x0, kern, 100.0) == 0.0);

    double T = 2000.0;
    double w = weighted_orbit_sum(f, x0, kern, T);
    double s = ap_sum(f, x0, kern.K, static_cast<std::uint64_t>(std::floor(T / kern.K))).sum;
    double s_inf1 = sobolev_norm_estimate(f, 1, NormKind::Sup);
    double bound = (1.0 + T * kern.delta / kern.K) * s_inf1;
    CHECK(std::abs(w - s) <= bound); // measured C stays below 1 here
    MESSAGE("weighted-vs-progression C = ", std::abs(w - s) / bound);

    // T < K: at most one kernel bump, so the integral is below sup|f|.
    double tiny = weighted_orbit_sum(f, x0, FejerKernel{0.25, 3000.0}, 100.0);
    CHECK(std::abs(tiny) <= sobolev_norm_estimate(f, 0, NormKind::Sup));
}

TEST_CASE("block decomposition") {
    CHECK(next_block_start(100, 0.0, 0.0) == 111);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ug(0.0, 0.9), ue(0.0, 1.0), un(2.0, 6.0);
    for (int i = 0; i < 1000; ++i) {
        double gamma = ug(rng);
        double eps = ue(rng) * 0.49 * (1.0 - gamma);
        std::uint64_t N = static_cast<std::uint64_t>(std::pow(10.0, un(rng)));
        SparseSchedule s = block_decompose(gamma, eps, N);
        // Tiling of [N1, N]: contiguous, no gaps/overlaps, total length.
        std::uint64_t expect = s.N1;
        std::uint64_t total = 0;
        for (const auto& blk : s.blocks) {
            CHECK(blk.start == expect);
            expect = blk.start + blk.length;
            total += blk.length;
        }
        CHECK(expect == s.N + 1);
        CHECK(total == s.N - s.N1 + 1);
        CHECK(total <= s.N);
    }
    CHECK_THROWS_AS(block_decompose(0.5, 0.4, 1000), DomainError);
    CHECK_THROWS_AS(block_decompose(1.2, 0.0, 1000), DomainError);
}

TEST_CASE("taylor block error") {
    CHECK(taylor_block_error(100.0, 5.0, 0.0) == 0.0);
    CHECK(taylor_block_error(100.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    double N0 = 1e6, t = std::pow(N0, 0.47);
    CHECK(taylor_block_error(N0, t, 0.05) <= 2.0 * t * t * std::pow(N0, 0.05 - 1.0));
}

TEST_CASE("sparse sum") {
    SurfacePoint x0 = default_base_point();
    Observable f = default_zero_average_observable();

    // gamma = 0 is the integer-time Birkhoff average, bit for bit.
    SparseReport r0 = sparse_sum(f, x0, 0.0, 5000);
    OrbitSumReport ap = ap_sum(f, x0, 1.0, 5000);
    CHECK(r0.average == ap.sum / 5000.0);
    CHECK(r0.max_taylor_err == 0.0);

    // Constants average to themselves for sparse times too.
    SparseReport rc = sparse_sum(Observable::constant(2.0), x0, 1.0 / 30.0, 2000);
    CHECK(rc.average == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rc.n_blocks > 0);

    // Per-sample corrections keep the evaluation exact: against a direct
    // per-sample oracle at moderate N.
    const std::uint64_t N = 3000;
    SparseReport rb = sparse_sum(f, x0, 1.0 / 30.0, N);
    double direct = 0.0;
    for (std::uint64_t j = 1; j <= N; ++j)
        direct += f.value(reduce(flow_n(x0.rep, std::pow(static_cast<double>(j), 1.0 + 1.0 / 30.0))));
    CHECK(rb.average == doctest::Approx(direct / static_cast<double>(N)).epsilon(1e-9));
    CHECK(rb.max_taylor_err < 1.0);

    CHECK_THROWS_AS(sparse_sum(f, x0, -0.1, 100), DomainError);
    CHECK_THROWS_AS(sparse_sum(f, x0, 0.1, 20000000ull), DomainError);
}

TEST_CASE("schedule params") {
    ScheduleParams s = schedule_params(0.0, 1.0 / 9.0, 10.0, 0.1);
    CHECK(s.r == doctest::Approx(13.5).epsilon(1e-15));
    CHECK(s.delta == doctest::Approx(std::pow(10.0, -0.1)).epsilon(1e-15));
    ScheduleParams s2 = schedule_params(1.0 / 24.0, 1.0 / 9.0, 10.0, 0.1);
    CHECK(s2.r == doctest::Approx(216.0 / 19.0).epsilon(1e-14));
    CHECK(s2.T == doctest::Approx(std::pow(10.0, 216.0 / 19.0)).epsilon(1e-12));
    CHECK(s2.K0 == doctest::Approx(std::pow(10.0, 216.0 / 19.0 / 24.0)).epsilon(1e-12));
    CHECK_THROWS_AS(schedule_params(-1.0, 0.1, 10.0, 0.1), DomainError);
    CHECK_THROWS_AS(schedule_params(0.0, 3.1, 10.0, 0.1), DomainError);
}
