// horolab: experiment runner for horocycle period integrals, sparse-orbit
// averages, Kirillov-model scans and exponent tables.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "horolab/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw horolab::ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CommonFlags {
    std::string config_path;
    std::string output;
    std::string cache;
    int threads = 0;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--config", flags.config_path, "experiment config file (key=value sections)");
    sub->add_option("--output", flags.output, "output CSV path override");
    sub->add_option("--cache", flags.cache, "orbit cache file");
    sub->add_option("--threads", flags.threads, "worker threads (HOROLAB_THREADS env overrides)");
}

horolab::ExperimentConfig build_config(const CommonFlags& flags, const std::string& subcommand) {
    horolab::ExperimentConfig cfg = flags.config_path.empty()
                                        ? horolab::default_config()
                                        : horolab::parse_config(slurp(flags.config_path));
    // Re-derive default output names when the CLI changes the subcommand
    // or overrides the output path.
    std::string parsed = cfg.subcommand;
    cfg.subcommand = subcommand;
    if (cfg.output.empty() || cfg.output == parsed + ".csv") cfg.output = subcommand + ".csv";
    if (cfg.manifest.empty() || cfg.manifest == parsed + ".csv.manifest.json")
        cfg.manifest = cfg.output + ".manifest.json";
    if (!flags.output.empty()) {
        cfg.output = flags.output;
        cfg.manifest = flags.output + ".manifest.json";
    }
    if (!flags.cache.empty()) cfg.cache = flags.cache;
    if (flags.threads >= 1) cfg.threads = flags.threads;
    return cfg;
}

int run(const horolab::ExperimentConfig& cfg) {
    horolab::RunResult res = horolab::run_experiment(cfg);
    if (!res.stdout_text.empty()) std::cout << res.stdout_text;
    for (const auto& f : res.outputs) std::cerr << "wrote " << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"horolab - numerical laboratory for horocycle averages"};
    app.require_subcommand(1);

    CommonFlags flags;
    double alpha0 = 0.0, b1 = 1.0 / 9.0;
    bool json = false;

    CLI::App* exponents = app.add_subcommand("exponents", "derived exponent table");
    add_common(exponents, flags);
    exponents->add_option("--alpha0", alpha0, "spectral parameter sqrt(1-4 lambda1)");
    exponents->add_option("--b1", b1, "twisted exponent (<= 1/9)");
    exponents->add_flag("--json", json, "also print JSON");

    CLI::App* twist = app.add_subcommand("twist", "single twisted average");
    add_common(twist, flags);
    CLI::App* decay = app.add_subcommand("decay", "decay curve over a T list with log-log fit");
    add_common(decay, flags);
    CLI::App* sparse = app.add_subcommand("sparse", "sparse-time averages (1/N) sum f(x0 n(j^{1+gamma}))");
    add_common(sparse, flags);
    CLI::App* kirillov = app.add_subcommand("kirillov", "Kirillov-model inequality scans");
    add_common(kirillov, flags);
    CLI::App* timechange = app.add_subcommand("timechange", "twisted averages along a time-changed flow");
    add_common(timechange, flags);
    CLI::App* poisson = app.add_subcommand("poisson", "Fejer periodization checks");
    add_common(poisson, flags);

    try {
        CLI11_PARSE(app, argc, argv);
        std::string name;
        for (CLI::App* sub : {exponents, twist, decay, sparse, kirillov, timechange, poisson})
            if (sub->parsed()) name = sub->get_name();
        horolab::ExperimentConfig cfg = build_config(flags, name);
        if (name == "exponents") {
            if (exponents->count("--alpha0")) cfg.exp_alpha0 = alpha0;
            if (exponents->count("--b1")) cfg.exp_b1 = b1;
            if (json) cfg.exp_json = true;
        }
        return run(cfg);
    } catch (const horolab::ConfigError& e) {
        nlohmann::json j{{"error", e.what()}, {"kind", "config"}};
        std::cerr << j.dump() << "\n";
        return 2;
    } catch (const horolab::CacheError& e) {
        nlohmann::json j{{"error", e.what()}, {"kind", "cache"}};
        std::cerr << j.dump() << "\n";
        return 4;
    } catch (const horolab::DomainError& e) {
        nlohmann::json j{{"error", e.what()}, {"kind", "config"}};
        std::cerr << j.dump() << "\n";
        return 2;
    } catch (const horolab::ConstructionError& e) {
        nlohmann::json j{{"error", e.what()}, {"kind", "config"}};
        std::cerr << j.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json j{{"error", e.what()}, {"kind", "numeric"}};
        std::cerr << j.dump() << "\n";
        return 3;
    }
}
