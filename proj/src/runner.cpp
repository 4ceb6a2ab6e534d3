#include "horolab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "horolab/exponents.hpp"
#include "horolab/kirillov.hpp"
#include "horolab/sparse.hpp"
#include "horolab/timechange.hpp"
#include "horolab/twisted.hpp"

namespace horolab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path);
    out << content;
}

int effective_threads(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("HOROLAB_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return t; // environment override wins
    }
    return cfg.threads;
}

// Operation versions recorded in the manifest so every emitted number is
// traceable to the code that produced it.
const std::vector<std::pair<std::string, int>> kOperationVersions = {
    {"twisted_average", 1}, {"plain_average", 1},   {"smoothing_discrepancy", 1},
    {"decay_curve", 1},     {"sparse_sum", 1},      {"ap_sum", 1},
    {"periodization", 1},   {"kirillov_norm", 1},   {"prop_l2_scan", 1},
    {"twisted_average_rho", 1}, {"exponent_profile", 1}, {"fit_decay_exponent", 1},
};

struct CacheHandle {
    // Loads the configured cache when compatible, saves it afterwards.
    static OrbitCache open(const ExperimentConfig& cfg, const SurfacePoint& x0) {
        if (!cfg.cache.empty()) {
            std::ifstream probe(cfg.cache, std::ios::binary);
            if (probe.good()) return OrbitCache::load(cfg.cache, x0);
        }
        return OrbitCache(x0);
    }
    static void close(const ExperimentConfig& cfg, const OrbitCache& cache) {
        if (!cfg.cache.empty()) cache.save(cfg.cache);
    }
};

std::string twist_csv_header(bool rho_column) {
    std::string h = "T,a,k,H,re_value,im_value,abs_value,err_est,max_cusp_height";
    if (rho_column) h += ",rho_id";
    return h + "\n";
}

std::string twist_csv_row(double T, double a, int k, double H, const TwistReport& r,
                          const std::string& rho_id = {}) {
    std::ostringstream o;
    o << fmt(T) << "," << fmt(a) << "," << k << "," << fmt(H) << "," << fmt(r.value.real()) << ","
      << fmt(r.value.imag()) << "," << fmt(std::abs(r.value)) << "," << fmt(r.abs_error_estimate)
      << "," << fmt(r.max_cusp_height);
    if (!rho_id.empty()) o << "," << rho_id;
    o << "\n";
    return o.str();
}

} // namespace

Observable observable_from_config(const ExperimentConfig& cfg) {
    if (cfg.obs_kind == "constant") return Observable::constant(cfg.obs_value);
    if (cfg.obs_kind == "bump") return make_bump(cfg.obs0);
    return make_zero_average_pair(make_bump(cfg.obs0), make_bump(cfg.obs1));
}

SurfacePoint base_point_from_config(const ExperimentConfig& cfg) {
    return reduce(from_iwasawa(cfg.bp_x, cfg.bp_y, cfg.bp_theta));
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    auto t_start = std::chrono::steady_clock::now();
    RunResult result;
    std::string csv;
    int threads = effective_threads(cfg);

    if (cfg.subcommand == "exponents") {
        ExponentProfile p = exponent_profile(cfg.exp_alpha0, cfg.exp_b1);
        std::ostringstream table;
        char line[160];
        auto row = [&](const char* name, double v) {
            std::snprintf(line, sizeof(line), "  %-28s %.12g\n", name, v);
            table << line;
        };
        table << "derived exponents (alpha0 = " << fmt(p.alpha0) << ", b1 = " << fmt(p.b1) << ")\n";
        row("lambda1", p.lambda1);
        row("b", p.b);
        row("r0 = 3/(b+2b1)", 3.0 / (p.b + 2.0 * p.b1));
        row("eta_1", p.eta1);
        row("eta_star", p.eta_star);
        row("gamma_max(b, b1)", p.gamma_max_gap);
        row("gamma_max(0, b1)", p.gamma_max_flat);
        row("timechange twist rate", p.timechange.twist_rate);
        row("timechange H exponent", p.timechange.H_exponent);
        row("timechange gamma threshold", p.timechange.gamma_threshold);
        result.stdout_text = table.str();
        if (cfg.exp_json) {
            nlohmann::json j{{"alpha0", p.alpha0},
                             {"lambda1", p.lambda1},
                             {"b", p.b},
                             {"b1", p.b1},
                             {"r0", 3.0 / (p.b + 2.0 * p.b1)},
                             {"eta1", p.eta1},
                             {"eta_star", p.eta_star},
                             {"gamma_max_gap", p.gamma_max_gap},
                             {"gamma_max_flat", p.gamma_max_flat},
                             {"timechange_twist_rate", p.timechange.twist_rate},
                             {"timechange_H_exponent", p.timechange.H_exponent},
                             {"timechange_gamma_threshold", p.timechange.gamma_threshold}};
            result.stdout_text += j.dump(2) + "\n";
        }
        csv = result.stdout_text;
    } else if (cfg.subcommand == "twist") {
        Observable f = observable_from_config(cfg);
        SurfacePoint x0 = base_point_from_config(cfg);
        OrbitCache orbit = CacheHandle::open(cfg, x0);
        TwistParams p{cfg.tw_a, cfg.tw_T, cfg.tw_k, cfg.tw_H};
        csv = twist_csv_header(false);
        if (cfg.tw_H > 0.0) {
            double disc = smoothing_discrepancy(f, x0, p, cfg.quad);
            TwistReport r = twisted_average(f, orbit, p, cfg.quad);
            csv += twist_csv_row(p.T, p.a, p.k, p.H, r);
            csv += "# smoothing_discrepancy = " + fmt(disc) + "\n";
            result.worst_error_estimate = r.abs_error_estimate;
        } else {
            TwistReport r = twisted_average(f, orbit, p, cfg.quad);
            csv += twist_csv_row(p.T, p.a, p.k, p.H, r);
            result.worst_error_estimate = r.abs_error_estimate;
        }
        CacheHandle::close(cfg, orbit);
    } else if (cfg.subcommand == "decay") {
        Observable f = observable_from_config(cfg);
        SurfacePoint x0 = base_point_from_config(cfg);
        OrbitCache orbit = CacheHandle::open(cfg, x0);
        auto curve = decay_curve(f, orbit, cfg.dc_a, cfg.dc_k, cfg.dc_T, cfg.quad);
        csv = twist_csv_header(false);
        std::vector<std::pair<double, double>> pts;
        for (const auto& [T, r] : curve) {
            csv += twist_csv_row(T, cfg.dc_a, cfg.dc_k, 0.0, r);
            result.worst_error_estimate = std::max(result.worst_error_estimate, r.abs_error_estimate);
            if (std::abs(r.value) > 0.0) pts.emplace_back(T, std::abs(r.value));
        }
        if (pts.size() >= 4) {
            DecayFit fit = fit_decay_exponent(pts);
            csv += "# fit slope=" + fmt(fit.slope) + " intercept=" + fmt(fit.intercept) +
                   " residual=" + fmt(fit.residual) + "\n";
            result.stdout_text = "decay slope " + fmt(fit.slope) + " over " +
                                 std::to_string(pts.size()) + " points\n";
        }
        CacheHandle::close(cfg, orbit);
    } else if (cfg.subcommand == "sparse") {
        Observable f = observable_from_config(cfg);
        SurfacePoint x0 = base_point_from_config(cfg);
        csv = "gamma,N,sum,abs_sum,n_blocks,max_taylor_err,max_cusp_height\n";
        for (std::uint64_t N : cfg.sp_N) {
            SparseReport r = sparse_sum(f, x0, cfg.sp_gamma, N, threads);
            std::ostringstream o;
            o << fmt(cfg.sp_gamma) << "," << N << "," << fmt(r.average) << ","
              << fmt(std::abs(r.average)) << "," << r.n_blocks << "," << fmt(r.max_taylor_err)
              << "," << fmt(r.max_cusp_height) << "\n";
            csv += o.str();
        }
    } else if (cfg.subcommand == "kirillov") {
        SeriesParams params = series_from_mu(0.25 * (1.0 - cfg.ki_nu * cfg.ki_nu));
        KirillovVector f = kirillov_bump(params, cfg.ki_lo, cfg.ki_hi);
        csv = "nu,s,H,a,lhs,rhs,ratio\n";
        for (int s : cfg.ki_s) {
            std::vector<ScanRow> rows;
            prop_l2_scan(f, s, cfg.ki_H, cfg.ki_a, &rows, threads);
            for (const auto& r : rows) {
                std::ostringstream o;
                o << fmt(r.nu) << "," << r.s << "," << fmt(r.H) << "," << fmt(r.a) << ","
                  << fmt(r.lhs) << "," << fmt(r.rhs) << "," << fmt(r.ratio) << "\n";
                csv += o.str();
            }
        }
    } else if (cfg.subcommand == "timechange") {
        BumpSpec rb = cfg.rho_bump;
        rb.amplitude = cfg.rho_amplitude * std::exp(3.0); // peak value = rho_amplitude
        TimeChange tc{make_bump(rb)};
        Observable f = zero_rho_average_pair(tc, make_bump(cfg.obs0), make_bump(cfg.obs1));
        SurfacePoint x0 = base_point_from_config(cfg);
        csv = twist_csv_header(true);
        std::string rho_id = "rho_" + fmt(cfg.rho_amplitude);
        for (double T : cfg.tc_T) {
            TwistParams p{cfg.tc_a, T, cfg.tc_k, 0.0};
            TwistReport r = twisted_average_rho(f, x0, tc, p, cfg.quad);
            csv += twist_csv_row(T, cfg.tc_a, cfg.tc_k, 0.0, r, rho_id);
            result.worst_error_estimate = std::max(result.worst_error_estimate, r.abs_error_estimate);
        }
    } else if (cfg.subcommand == "poisson") {
        csv = "delta,K,grid_points,max_discrepancy,max_coeff_err\n";
        for (double d : cfg.po_delta)
            for (double K : cfg.po_K) {
                FejerKernel kern{d, K};
                double worst = 0.0;
                for (int i = 0; i < cfg.po_grid; ++i) {
                    double t = -K + 2.0 * K * (i + 0.5) / cfg.po_grid;
                    worst = std::max(worst, periodization_check(kern, t, cfg.po_tail_tol));
                }
                // Coefficients against direct numerical integration.
                double coeff_err = 0.0;
                for (long long k = -cfg.po_k_range; k <= cfg.po_k_range; ++k)
                    coeff_err = std::max(coeff_err, std::abs(fejer_coefficient_direct(kern, k) -
                                                             fejer_coefficient(kern, k)));
                std::ostringstream o;
                o << fmt(d) << "," << fmt(K) << "," << cfg.po_grid << "," << fmt(worst) << ","
                  << fmt(coeff_err) << "\n";
                csv += o.str();
                result.worst_error_estimate = std::max(result.worst_error_estimate, worst);
            }
    } else {
        throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
    }

    write_file(cfg.output, csv);
    result.outputs.push_back(cfg.output);

    auto t_end = std::chrono::steady_clock::now();
    nlohmann::json manifest{
        {"config_hash", config_hash(cfg)},
        {"code_version", kCodeVersion},
        {"wall_time_s", std::chrono::duration<double>(t_end - t_start).count()},
        {"worst_error_estimate", result.worst_error_estimate},
        {"threads", threads},
        {"outputs", result.outputs},
    };
    nlohmann::json ops;
    for (const auto& [name, version] : kOperationVersions) ops[name] = version;
    manifest["operations"] = ops;
    write_file(cfg.manifest, manifest.dump(2) + "\n");
    result.outputs.push_back(cfg.manifest);
    return result;
}

} // namespace horolab
