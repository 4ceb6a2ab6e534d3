#include "horolab/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "horolab/parallel.hpp"
#include "horolab/quadrature.hpp"
#include "horolab/summation.hpp"

namespace horolab {

void validate(const FejerKernel& kern) {
    if (!(kern.delta > 0.0 && kern.delta <= 1.0)) throw DomainError("FejerKernel: delta outside (0, 1]");
    if (!(kern.K > 0.0)) throw DomainError("FejerKernel: K must be positive");
    if (!(kern.delta < kern.K / 2.0)) throw DomainError("FejerKernel: needs delta < K/2");
}

double fejer_eval(const FejerKernel& kern, double t) {
    return std::max((kern.delta - std::abs(t)) / (kern.delta * kern.delta), 0.0);
}

double fejer_coefficient(const FejerKernel& kern, long long k) {
    if (k == 0) return 1.0 / kern.K;
    double u = M_PI * kern.delta * static_cast<double>(k) / kern.K;
    double s = std::sin(u) / u;
    return s * s / kern.K;
}

std::vector<double> fejer_coefficients(const FejerKernel& kern, long long k_lo, long long k_hi) {
    if (k_hi < k_lo) throw DomainError("fejer_coefficients: empty range");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (long long k = k_lo; k <= k_hi; ++k) out.push_back(fejer_coefficient(kern, k));
    return out;
}

double fejer_coefficient_direct(const FejerKernel& kern, long long k) {
    // g_delta is even, so only the cosine part survives; split at the kink
    // and size panels to the oscillation 2 pi k delta / K.
    double omega = 2.0 * M_PI * static_cast<double>(k) / kern.K;
    int panels = std::max(1, static_cast<int>(std::ceil(std::abs(omega) * kern.delta / 3.0)));
    PairwiseReal acc;
    for (int p = 0; p < 2 * panels; ++p) {
        double a = -kern.delta + kern.delta * p / panels;
        double b = a + kern.delta / panels;
        acc.add(gauss_integrate(
            [&](double t) { return fejer_eval(kern, t) * std::cos(omega * t); }, a, b, 16));
    }
    return acc.total() / kern.K;
}

namespace {

// sum_{k=1}^inf cos(kx)/k^2 = pi^2/6 - pi x/2 + x^2/4 on [0, 2pi].
double clausen2_cos(double x) {
    x = std::fmod(x, 2.0 * M_PI);
    if (x < 0.0) x += 2.0 * M_PI;
    return M_PI * M_PI / 6.0 - 0.5 * M_PI * x + 0.25 * x * x;
}

} // namespace

double periodization_check(const FejerKernel& kern, double t, double tail_tol) {
    validate(kern);
    if (!(tail_tol >= 1e-12)) throw DomainError("periodization_check: tail_tol below 1e-12");

    // Left side: at most one periodized copy covers t since delta < K/2.
    double lhs = 0.0;
    double j0 = -std::round(t / kern.K);
    for (double j : {j0 - 1.0, j0, j0 + 1.0}) lhs += fejer_eval(kern, t + j * kern.K);

    // Right side: a_0 + sum_{k>=1} 2 a_k cos(omega k), omega = 2 pi t / K.
    // Explicit terms up to min(M, cap); using
    //   2 a_k cos(omega k) = (K/pi^2 delta^2) [cos(omega k)
    //        - cos((omega+alpha)k)/2 - cos((omega-alpha)k)/2] / k^2
    // with alpha = 2 pi delta / K, the remainder past the cap is the
    // difference of full Clausen sums and the accumulated partial sums.
    const double omega = 2.0 * M_PI * t / kern.K;
    const double alpha = 2.0 * M_PI * kern.delta / kern.K;
    const double scale = kern.K / (M_PI * M_PI * kern.delta * kern.delta);
    double m_needed = 2.0 * kern.K / (M_PI * M_PI * kern.delta * kern.delta * tail_tol);
    const long long cap = 20000;
    long long M = m_needed > static_cast<double>(cap) ? cap
                                                      : static_cast<long long>(std::ceil(m_needed));

    double rhs = fejer_coefficient(kern, 0);
    double p_omega = 0.0, p_plus = 0.0, p_minus = 0.0; // partial Clausen sums
    for (long long k = 1; k <= M; ++k) {
        double kk = static_cast<double>(k);
        rhs += 2.0 * fejer_coefficient(kern, k) * std::cos(omega * kk);
        p_omega += std::cos(omega * kk) / (kk * kk);
        p_plus += std::cos((omega + alpha) * kk) / (kk * kk);
        p_minus += std::cos((omega - alpha) * kk) / (kk * kk);
    }
    if (m_needed > static_cast<double>(cap)) {
        double tail = (clausen2_cos(omega) - p_omega) -
                      0.5 * (clausen2_cos(omega + alpha) - p_plus) -
                      0.5 * (clausen2_cos(omega - alpha) - p_minus);
        rhs += scale * tail;
    }
    return std::abs(lhs - rhs);
}

OrbitSumReport ap_sum(const Observable& f, const SurfacePoint& x0, double K, std::uint64_t count) {
    if (!(K > 0.0)) throw DomainError("ap_sum: K must be positive");
    OrbitSumReport rep;
    PairwiseReal acc;
    SurfacePoint p = is_reduced(x0) ? x0 : reduce(x0.rep);
    rep.max_cusp_height = p.y;
    for (std::uint64_t j = 0; j < count; ++j) {
        p = step_n(p, K);
        if (p.y > rep.max_cusp_height) rep.max_cusp_height = p.y;
        acc.add(f.value(p));
    }
    rep.sum = acc.total();
    return rep;
}

double weighted_orbit_sum(const Observable& f, const SurfacePoint& x0, const FejerKernel& kern,
                          double T) {
    validate(kern);
    if (!(T > 0.0)) throw DomainError("weighted_orbit_sum: T must be positive");
    PairwiseReal acc;
    std::uint64_t m_max = static_cast<std::uint64_t>(std::floor((T + kern.delta) / kern.K));
    for (std::uint64_t m = 0; m <= m_max; ++m) {
        double center = static_cast<double>(m) * kern.K;
        // Split at the kernel kink.
        for (int half = 0; half < 2; ++half) {
            double lo = half == 0 ? std::max(0.0, center - kern.delta) : center;
            double hi = half == 0 ? center : std::min(T, center + kern.delta);
            if (!(hi > lo)) continue;
            acc.add(gauss_integrate(
                [&](double t) {
                    return fejer_eval(kern, t - center) * f.value(reduce(flow_n(x0.rep, t)));
                },
                lo, hi, 12));
        }
    }
    return acc.total();
}

std::uint64_t next_block_start(std::uint64_t nk, double gamma, double epsilon) {
    double exponent = 0.5 * (1.0 - gamma) - epsilon;
    return nk +
           static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(nk), exponent))) + 1;
}

SparseSchedule block_decompose(double gamma, double epsilon, std::uint64_t N) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("block_decompose: gamma outside [0, 1)");
    if (!(epsilon >= 0.0 && epsilon < 0.5 * (1.0 - gamma)))
        throw DomainError("block_decompose: needs 0 <= epsilon < (1 - gamma)/2");
    if (N == 0) throw DomainError("block_decompose: N must be positive");

    SparseSchedule s;
    s.gamma = gamma;
    s.epsilon = epsilon;
    s.N = N;
    s.N1 = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(N), 1.0 - epsilon)));
    if (s.N1 < 1) s.N1 = 1;
    std::uint64_t nk = s.N1;
    while (nk <= N) {
        std::uint64_t next = next_block_start(nk, gamma, epsilon);
        std::uint64_t len = next - nk;
        if (nk + len - 1 > N) len = N - nk + 1; // tail block truncated at N
        s.blocks.push_back({nk, len});
        nk += len;
    }
    return s;
}

double taylor_block_error(double N0, double t, double gamma) {
    if (!(N0 >= 1.0)) throw DomainError("taylor_block_error: N0 must be >= 1");
    if (!(t >= 0.0)) throw DomainError("taylor_block_error: t must be >= 0");
    double exact = std::pow(N0 + t, 1.0 + gamma);
    double approx = std::pow(N0, 1.0 + gamma) + (1.0 + gamma) * t * std::pow(N0, gamma);
    return std::abs(exact - approx);
}

SparseReport sparse_sum(const Observable& f, const SurfacePoint& x0, double gamma, std::uint64_t N,
                        int threads) {
    if (!(gamma >= 0.0)) throw DomainError("sparse_sum: gamma must be >= 0");
    if (N == 0 || N > 10000000ull) throw DomainError("sparse_sum: N outside [1, 1e7]");

    SparseReport rep;
    if (gamma == 0.0) {
        // Integer-time Birkhoff average; identical code path to ap_sum so
        // the degenerate case matches bit for bit.
        OrbitSumReport base = ap_sum(f, x0, 1.0, N);
        rep.average = base.sum / static_cast<double>(N);
        rep.max_cusp_height = base.max_cusp_height;
        return rep;
    }

    if (gamma >= 0.9) {
        // Progression approximation is useless here; evaluate directly.
        PairwiseReal acc;
        SurfacePoint base = is_reduced(x0) ? x0 : reduce(x0.rep);
        double cusp = base.y;
        for (std::uint64_t j = 1; j <= N; ++j) {
            SurfacePoint p = reduce(flow_n(base.rep, std::pow(static_cast<double>(j), 1.0 + gamma)));
            cusp = std::max(cusp, p.y);
            acc.add(f.value(p));
        }
        rep.average = acc.total() / static_cast<double>(N);
        rep.max_cusp_height = cusp;
        return rep;
    }

    const double eps = std::min(0.1, 0.25 * (1.0 - gamma));
    SparseSchedule sched = block_decompose(gamma, eps, N);
    rep.n_blocks = sched.blocks.size();
    SurfacePoint base = is_reduced(x0) ? x0 : reduce(x0.rep);

    // Head [1, N1): direct evaluation at the exact sparse times.
    PairwiseReal head;
    double head_cusp = base.y;
    for (std::uint64_t j = 1; j < sched.N1; ++j) {
        double t = std::pow(static_cast<double>(j), 1.0 + gamma);
        SurfacePoint p = reduce(flow_n(base.rep, t));
        if (p.y > head_cusp) head_cusp = p.y;
        head.add(f.value(p));
    }

    struct BlockResult {
        double sum = 0.0;
        double cusp = 0.0;
        double taylor = 0.0;
    };
    std::vector<BlockResult> results(sched.blocks.size());
    const double corr_tol = 1e-12;
    parallel_for(sched.blocks.size(), threads, [&](std::size_t bi) {
        const auto& blk = sched.blocks[bi];
        double n0 = static_cast<double>(blk.start);
        double t0 = std::pow(n0, 1.0 + gamma);
        double gap = (1.0 + gamma) * std::pow(n0, gamma);
        BlockResult r;
        PairwiseReal acc;
        SurfacePoint p = reduce(flow_n(base.rep, t0));
        r.cusp = p.y;
        for (std::uint64_t m = 0; m < blk.length; ++m) {
            if (m > 0) p = step_n(p, gap);
            double t_prog = t0 + static_cast<double>(m) * gap;
            double t_exact = std::pow(n0 + static_cast<double>(m), 1.0 + gamma);
            double drift = t_exact - t_prog;
            r.taylor = std::max(r.taylor, std::abs(drift));
            SurfacePoint q = std::abs(drift) > corr_tol ? step_n(p, drift) : p;
            if (q.y > r.cusp) r.cusp = q.y;
            acc.add(f.value(q));
        }
        r.sum = acc.total();
        results[bi] = r;
    });

    PairwiseReal total;
    total.add(head.total());
    double cusp = head_cusp, taylor = 0.0;
    for (const auto& r : results) {
        total.add(r.sum);
        cusp = std::max(cusp, r.cusp);
        taylor = std::max(taylor, r.taylor);
    }
    rep.average = total.total() / static_cast<double>(N);
    rep.max_cusp_height = cusp;
    rep.max_taylor_err = taylor;
    return rep;
}

ScheduleParams schedule_params(double b, double b1, double K, double epsilon) {
    if (!(b >= 0.0)) throw DomainError("schedule_params: b must be >= 0");
    if (!(b1 > 0.0)) throw DomainError("schedule_params: b1 must be positive");
    if (!(b + 2.0 * b1 < 6.0)) throw DomainError("schedule_params: needs b + 2 b1 < 6");
    if (!(K > 0.0)) throw DomainError("schedule_params: K must be positive");
    if (!(epsilon > 0.0)) throw DomainError("schedule_params: epsilon must be positive");
    ScheduleParams s;
    s.r = 3.0 / (b + 2.0 * b1);
    s.T = std::pow(K, s.r);
    s.K0 = std::pow(K, s.r * b);
    s.delta = std::pow(K, -epsilon);
    return s;
}

} // namespace horolab
