#pragma once

#include <cstdint>
#include <vector>

#include "horolab/observable.hpp"
#include "horolab/orbit_cache.hpp"

namespace horolab {

// Unit-mass triangle kernel g_delta(t) = max(delta^{-2}(delta - |t|), 0)
// periodized with gap K; delta < K/2 keeps the copies disjoint.
struct FejerKernel {
    double delta = 0.1;
    double K = 1.0;
};

void validate(const FejerKernel& kern);

double fejer_eval(const FejerKernel& kern, double t);

// Fourier coefficient a_k = K^{-1} sinc^2(pi delta k / K) of the
// periodization (sinc u = sin u / u).
double fejer_coefficient(const FejerKernel& kern, long long k);
std::vector<double> fejer_coefficients(const FejerKernel& kern, long long k_lo, long long k_hi);

// a_k by direct numerical integration of K^{-1} int e^{-2 pi i k t / K}
// g_delta(t) dt (the independent route the closed form is checked against).
double fejer_coefficient_direct(const FejerKernel& kern, long long k);

// |sum_j g_delta(t + jK) - sum_k exp(2 pi i k t / K) a_k|. The right side
// is summed explicitly up to min(M(tail_tol), cap) terms with the
// remainder added in closed form (Clausen-type series), so the truncation
// never dominates.
double periodization_check(const FejerKernel& kern, double t, double tail_tol);

struct OrbitSumReport {
    double sum = 0.0;
    double max_cusp_height = 0.0;
};

// sum_{j=1}^{count} f(x0 n(K j)) by incremental flow with reduction.
OrbitSumReport ap_sum(const Observable& f, const SurfacePoint& x0, double K, std::uint64_t count);

// int_0^T (sum_j g_delta(t + Kj)) f(x0 n(t)) dt, integrated window by
// window (the kernel support makes the weight vanish elsewhere).
double weighted_orbit_sum(const Observable& f, const SurfacePoint& x0, const FejerKernel& kern,
                          double T);

// Block decomposition N_{k+1} = N_k + floor(N_k^{(1-gamma)/2 - eps}) + 1
// tiling [N_1, N] with N_1 = ceil(N^{1-eps}).
struct SparseSchedule {
    double gamma = 0.0;
    double epsilon = 0.0;
    std::uint64_t N = 0;
    std::uint64_t N1 = 0;
    struct Block {
        std::uint64_t start;
        std::uint64_t length;
    };
    std::vector<Block> blocks;
};

SparseSchedule block_decompose(double gamma, double epsilon, std::uint64_t N);

// One step of the block recursion: N_k -> N_k + floor(N_k^{(1-gamma)/2 - eps}) + 1.
std::uint64_t next_block_start(std::uint64_t nk, double gamma, double epsilon);

// |(N0+t)^{1+gamma} - N0^{1+gamma} - (1+gamma) t N0^gamma|.
double taylor_block_error(double N0, double t, double gamma);

struct SparseReport {
    double average = 0.0;
    std::uint64_t n_blocks = 0;
    double max_taylor_err = 0.0;
    double max_cusp_height = 0.0;
};

// (1/N) sum_{j=1}^N f(x0 n(j^{1+gamma})), evaluated blockwise: each block
// advances an arithmetic-progression orbit (base N_k^{1+gamma}, gap
// (1+gamma) N_k^gamma) with an exact per-sample correction flow whenever
// the progression time drifts from j^{1+gamma} beyond tolerance. gamma = 0
// routes to the plain integer-time average bit for bit.
SparseReport sparse_sum(const Observable& f, const SurfacePoint& x0, double gamma, std::uint64_t N,
                        int threads = 1);

// Parameter schedule r = 3/(b + 2 b1), T = K^r, K0 = K^{rb}, delta = K^{-eps}.
struct ScheduleParams {
    double r, T, K0, delta;
};
ScheduleParams schedule_params(double b, double b1, double K, double epsilon);

} // namespace horolab
