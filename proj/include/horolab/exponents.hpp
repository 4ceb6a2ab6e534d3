#pragma once

#include <vector>

#include "horolab/errors.hpp"

namespace horolab {

// Supremal admissible equidistribution exponent (1-2a0)^2 / (8(3-2a0)).
double venkatesh_b(double alpha0);

// Bootstrap iterates eta_0 = 0, eta_{j+1} = 1/(9 - 2 eta_j).
double bootstrap_eta(int j);

// The bootstrap limit (9 - sqrt(73))/4, root of 2y^2 - 9y + 1.
double eta_fixed_point();

// Sparse threshold (b + 2 b1)/(6 - (b + 2 b1)); equals 1/(2 r0 - 1) with
// r0 = 3/(b + 2 b1).
double gamma_max(double b, double b1);

// Smoothing window T^{2/(9 - 2 eta)} (callers subtract their own slack).
double optimize_H(double T, double eta);

// Time-change rates: twist decay (1-a0)^2/(100-4a0), window exponent
// (1-a0)/(25-a0), and the sparse threshold at half the decay rate.
struct TimechangeExponents {
    double twist_rate;
    double H_exponent;
    double gamma_threshold;
};
TimechangeExponents timechange_exponents(double alpha0);

// Decay exponent (1 +- Re sqrt(1-4mu))/2 of an invariant distribution.
double invariant_distribution_exponent(double mu, int sign);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // RMS of log residuals
    std::vector<std::pair<double, double>> points; // (log T, log value)
};

// Least squares in log-log coordinates; needs >= 4 points, positive
// values, strictly increasing T.
DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& points);

// All scalar exponents derived from a spectral gap and twisted exponent.
struct ExponentProfile {
    double lambda1 = 0.25;
    double alpha0 = 0.0;
    double b = 0.0;           // equidistribution exponent bound
    double b1 = 0.0;          // twisted exponent (< 1/9)
    double eta1 = 0.0;        // first bootstrap iterate
    double eta_star = 0.0;    // bootstrap limit
    double gamma_max_gap = 0.0;  // with this b
    double gamma_max_flat = 0.0; // with b -> 0 (gap-independent)
    TimechangeExponents timechange{};
};

ExponentProfile exponent_profile(double alpha0, double b1);

} // namespace horolab
