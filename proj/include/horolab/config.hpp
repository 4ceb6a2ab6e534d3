#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horolab/observable.hpp"

namespace horolab {

// Experiment description parsed from the sectioned key=value format (see
// README for the schema). Every field has a default; parse_config reports
// all validation errors at once, each with its line number.
struct ExperimentConfig {
    // [experiment]
    std::string subcommand = "exponents";
    int threads = 1;
    std::string output;   // default "<subcommand>.csv"
    std::string manifest; // default output + ".manifest.json"
    std::string cache;    // orbit cache path; empty = disabled

    // [base_point]
    double bp_x = 0.1234567, bp_y = 1.2345678, bp_theta = 0.7654321;

    // [observable]
    std::string obs_kind = "pair"; // pair | bump | constant
    BumpSpec obs0;
    BumpSpec obs1;
    double obs_value = 1.0; // constant kind

    // [quadrature]
    QuadratureSpec quad;

    // [exponents]
    double exp_alpha0 = 0.0;
    double exp_b1 = 1.0 / 9.0;
    bool exp_json = false;

    // [twist]
    double tw_a = 1.0, tw_T = 10000.0, tw_H = 0.0;
    int tw_k = 0;

    // [decay]
    double dc_a = 1.0;
    int dc_k = 0;
    std::vector<double> dc_T;

    // [sparse]
    double sp_gamma = 1.0 / 30.0;
    double sp_epsilon = 0.0; // 0 = automatic
    std::vector<std::uint64_t> sp_N;

    // [kirillov]
    double ki_nu = 0.5, ki_lo = 1.0, ki_hi = 2.0;
    std::vector<int> ki_s;
    std::vector<double> ki_H, ki_a;

    // [timechange]
    double tc_a = 1.0;
    int tc_k = 0;
    std::vector<double> tc_T;
    double rho_amplitude = 0.4;
    BumpSpec rho_bump;

    // [poisson]
    std::vector<double> po_delta, po_K;
    int po_grid = 1000;
    double po_tail_tol = 1e-9;
    long long po_k_range = 100;

    bool operator==(const ExperimentConfig&) const = default;
};

// Applies list defaults (T lists, grids) and derived output names.
ExperimentConfig default_config();

// Parses the documented format; throws ConfigError listing every problem
// (unknown key, type mismatch, precondition violation) with line numbers.
ExperimentConfig parse_config(const std::string& text);

// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

// FNV-1a hash of the canonical serialization (hex), for run manifests.
std::string config_hash(const ExperimentConfig& c);

} // namespace horolab
