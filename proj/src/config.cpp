#include "horolab/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>

namespace horolab {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += " ";
        if constexpr (std::is_same_v<T, double>)
            s += fmt_double(v[i]);
        else
            s += std::to_string(v[i]);
    }
    return s;
}

const std::vector<std::string> kSubcommands = {"exponents", "twist",      "decay",  "sparse",
                                               "kirillov",  "timechange", "poisson"};

struct Parser {
    std::vector<std::string> errors;
    int line_no = 0;

    void fail(const std::string& msg) {
        errors.push_back("line " + std::to_string(line_no) + ": " + msg);
    }

    bool parse_double(const std::string& v, double& out) {
        try {
            std::size_t pos = 0;
            out = std::stod(v, &pos);
            while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
            if (pos != v.size()) throw std::invalid_argument("trailing");
            return true;
        } catch (...) {
            fail("expected a number, got '" + v + "'");
            return false;
        }
    }
    bool parse_int(const std::string& v, long long& out) {
        try {
            std::size_t pos = 0;
            out = std::stoll(v, &pos);
            while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
            if (pos != v.size()) throw std::invalid_argument("trailing");
            return true;
        } catch (...) {
            fail("expected an integer, got '" + v + "'");
            return false;
        }
    }
    bool parse_bool(const std::string& v, bool& out) {
        if (v == "true" || v == "1") {
            out = true;
            return true;
        }
        if (v == "false" || v == "0") {
            out = false;
            return true;
        }
        fail("expected true/false, got '" + v + "'");
        return false;
    }
    template <class T>
    bool parse_list(const std::string& v, std::vector<T>& out) {
        std::istringstream is(v);
        std::vector<T> items;
        std::string tok;
        while (is >> tok) {
            if constexpr (std::is_same_v<T, double>) {
                double d;
                if (!parse_double(tok, d)) return false;
                items.push_back(d);
            } else {
                long long i;
                if (!parse_int(tok, i)) return false;
                if constexpr (std::is_unsigned_v<T>) {
                    if (i < 0) {
                        fail("expected a nonnegative integer, got '" + tok + "'");
                        return false;
                    }
                }
                items.push_back(static_cast<T>(i));
            }
        }
        if (items.empty()) {
            fail("expected a non-empty list");
            return false;
        }
        out = std::move(items);
        return true;
    }
    bool parse_triple(const std::string& v, double& a, double& b, double& c) {
        std::vector<double> items;
        if (!parse_list(v, items)) return false;
        if (items.size() != 3) {
            fail("expected exactly 3 numbers");
            return false;
        }
        a = items[0];
        b = items[1];
        c = items[2];
        return true;
    }
};

} // namespace

ExperimentConfig default_config() {
    ExperimentConfig c;
    c.obs0 = default_bump0();
    c.obs1 = default_bump1();
    for (int e = 7; e <= 17; ++e) c.dc_T.push_back(std::pow(2.0, e));
    c.sp_N = {10000, 100000, 1000000};
    c.ki_s = {0, 1};
    c.ki_H = {1.0, 10.0, 100.0, 1000.0, 10000.0};
    c.ki_a = {0.1, 1.0, 10.0};
    for (int e = 7; e <= 15; ++e) c.tc_T.push_back(std::pow(2.0, e));
    c.rho_bump.cx = 0.0;
    c.rho_bump.cy = 2.0;
    c.rho_bump.ctheta = 1.5708;
    c.rho_bump.wx = 0.25;
    c.rho_bump.wy = 0.35;
    c.rho_bump.wtheta = 1.0;
    c.rho_bump.amplitude = 1.0;
    c.po_delta = {0.01, 0.1};
    c.po_K = {1.0, 10.0, 100.0};
    return c;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c = default_config();
    Parser p;
    std::string section;
    std::istringstream stream(text);
    std::string line;

    // key lines recorded for cross-key validation messages
    std::map<std::string, int> key_lines;

    while (std::getline(stream, line)) {
        ++p.line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto ltrim = line.find_first_not_of(" \t\r");
        if (ltrim == std::string::npos) continue;
        auto rtrim = line.find_last_not_of(" \t\r");
        line = line.substr(ltrim, rtrim - ltrim + 1);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                p.fail("malformed section header");
                continue;
            }
            section = line.substr(1, line.size() - 2);
            static const std::vector<std::string> kSections = {
                "experiment", "base_point", "observable", "quadrature", "exponents",
                "twist",      "decay",      "sparse",     "kirillov",   "timechange",
                "poisson"};
            bool known = false;
            for (const auto& s : kSections) known |= (s == section);
            if (!known) p.fail("unknown section [" + section + "]");
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            p.fail("expected key = value");
            continue;
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        key = trim(key);
        value = trim(value);
        std::string full = section + "." + key;
        key_lines[full] = p.line_no;

        long long i = 0;
        if (full == "experiment.subcommand") {
            bool ok = false;
            for (const auto& s : kSubcommands) ok |= (s == value);
            if (!ok)
                p.fail("unknown subcommand '" + value + "'");
            else
                c.subcommand = value;
        } else if (full == "experiment.threads") {
            if (p.parse_int(value, i)) {
                if (i < 1 || i > 256)
                    p.fail("threads outside [1, 256]");
                else
                    c.threads = static_cast<int>(i);
            }
        } else if (full == "experiment.output") {
            c.output = value;
        } else if (full == "experiment.manifest") {
            c.manifest = value;
        } else if (full == "experiment.cache") {
            c.cache = value;
        } else if (full == "base_point.x") {
            p.parse_double(value, c.bp_x);
        } else if (full == "base_point.y") {
            if (p.parse_double(value, c.bp_y) && !(c.bp_y > 0.0)) p.fail("base_point.y must be positive");
        } else if (full == "base_point.theta") {
            p.parse_double(value, c.bp_theta);
        } else if (full == "observable.kind") {
            if (value != "pair" && value != "bump" && value != "constant")
                p.fail("observable.kind must be pair|bump|constant");
            else
                c.obs_kind = value;
        } else if (full == "observable.center") {
            p.parse_triple(value, c.obs0.cx, c.obs0.cy, c.obs0.ctheta);
        } else if (full == "observable.widths") {
            p.parse_triple(value, c.obs0.wx, c.obs0.wy, c.obs0.wtheta);
        } else if (full == "observable.amplitude") {
            p.parse_double(value, c.obs0.amplitude);
        } else if (full == "observable.center2") {
            p.parse_triple(value, c.obs1.cx, c.obs1.cy, c.obs1.ctheta);
        } else if (full == "observable.widths2") {
            p.parse_triple(value, c.obs1.wx, c.obs1.wy, c.obs1.wtheta);
        } else if (full == "observable.amplitude2") {
            p.parse_double(value, c.obs1.amplitude);
        } else if (full == "observable.value") {
            p.parse_double(value, c.obs_value);
        } else if (full == "quadrature.nodes_per_panel") {
            if (p.parse_int(value, i)) c.quad.nodes_per_panel = static_cast<int>(i);
        } else if (full == "quadrature.panel_length") {
            p.parse_double(value, c.quad.panel_length);
        } else if (full == "quadrature.target_rel_error") {
            p.parse_double(value, c.quad.target_rel_error);
        } else if (full == "exponents.alpha0") {
            p.parse_double(value, c.exp_alpha0);
        } else if (full == "exponents.b1") {
            p.parse_double(value, c.exp_b1);
        } else if (full == "exponents.json") {
            p.parse_bool(value, c.exp_json);
        } else if (full == "twist.a") {
            p.parse_double(value, c.tw_a);
        } else if (full == "twist.T") {
            p.parse_double(value, c.tw_T);
        } else if (full == "twist.k") {
            if (p.parse_int(value, i)) c.tw_k = static_cast<int>(i);
        } else if (full == "twist.H") {
            p.parse_double(value, c.tw_H);
        } else if (full == "decay.a") {
            p.parse_double(value, c.dc_a);
        } else if (full == "decay.k") {
            if (p.parse_int(value, i)) c.dc_k = static_cast<int>(i);
        } else if (full == "decay.T_list") {
            p.parse_list(value, c.dc_T);
        } else if (full == "sparse.gamma") {
            p.parse_double(value, c.sp_gamma);
        } else if (full == "sparse.epsilon") {
            p.parse_double(value, c.sp_epsilon);
        } else if (full == "sparse.N_list") {
            p.parse_list(value, c.sp_N);
        } else if (full == "kirillov.nu") {
            p.parse_double(value, c.ki_nu);
        } else if (full == "kirillov.support") {
            std::vector<double> v2;
            if (p.parse_list(value, v2)) {
                if (v2.size() != 2)
                    p.fail("kirillov.support needs exactly 2 numbers");
                else {
                    c.ki_lo = v2[0];
                    c.ki_hi = v2[1];
                }
            }
        } else if (full == "kirillov.s_list") {
            std::vector<std::int64_t> v2;
            if (p.parse_list(value, v2)) {
                c.ki_s.clear();
                for (auto s : v2) c.ki_s.push_back(static_cast<int>(s));
            }
        } else if (full == "kirillov.H_grid") {
            p.parse_list(value, c.ki_H);
        } else if (full == "kirillov.a_grid") {
            p.parse_list(value, c.ki_a);
        } else if (full == "timechange.a") {
            p.parse_double(value, c.tc_a);
        } else if (full == "timechange.k") {
            if (p.parse_int(value, i)) c.tc_k = static_cast<int>(i);
        } else if (full == "timechange.T_list") {
            p.parse_list(value, c.tc_T);
        } else if (full == "timechange.rho_amplitude") {
            p.parse_double(value, c.rho_amplitude);
        } else if (full == "timechange.rho_center") {
            p.parse_triple(value, c.rho_bump.cx, c.rho_bump.cy, c.rho_bump.ctheta);
        } else if (full == "timechange.rho_widths") {
            p.parse_triple(value, c.rho_bump.wx, c.rho_bump.wy, c.rho_bump.wtheta);
        } else if (full == "poisson.delta_list") {
            p.parse_list(value, c.po_delta);
        } else if (full == "poisson.K_list") {
            p.parse_list(value, c.po_K);
        } else if (full == "poisson.grid") {
            if (p.parse_int(value, i)) c.po_grid = static_cast<int>(i);
        } else if (full == "poisson.tail_tol") {
            p.parse_double(value, c.po_tail_tol);
        } else if (full == "poisson.k_range") {
            p.parse_int(value, c.po_k_range);
        } else {
            p.fail("unknown key '" + key + "' in section [" + section + "]");
        }
    }

    // Cross-key preconditions, each naming the offending keys.
    auto key_line = [&](const std::string& k) {
        auto it = key_lines.find(k);
        return it == key_lines.end() ? std::string("default") : ("line " + std::to_string(it->second));
    };
    if (!(c.sp_gamma >= 0.0 && c.sp_gamma < 1.0))
        p.errors.push_back("sparse.gamma (" + key_line("sparse.gamma") + "): must lie in [0, 1)");
    else if (c.sp_epsilon != 0.0 && !(c.sp_epsilon > 0.0 && c.sp_epsilon < 0.5 * (1.0 - c.sp_gamma)))
        p.errors.push_back("sparse.gamma and sparse.epsilon (" + key_line("sparse.gamma") + ", " +
                           key_line("sparse.epsilon") +
                           "): precondition epsilon < (1 - gamma)/2 violated");
    if (!(c.ki_nu > 0.0 && c.ki_nu < 1.0))
        p.errors.push_back("kirillov.nu (" + key_line("kirillov.nu") + "): must lie in (0, 1)");
    if (c.quad.nodes_per_panel < 4 || c.quad.nodes_per_panel > 32)
        p.errors.push_back("quadrature.nodes_per_panel (" + key_line("quadrature.nodes_per_panel") +
                           "): outside [4, 32]");
    if (!(c.quad.target_rel_error >= 1e-12 && c.quad.target_rel_error <= 1e-3))
        p.errors.push_back("quadrature.target_rel_error (" + key_line("quadrature.target_rel_error") +
                           "): outside [1e-12, 1e-3]");
    if (!(c.tw_T >= 1.0))
        p.errors.push_back("twist.T (" + key_line("twist.T") + "): must be >= 1");
    if (c.tw_k < 0 || c.tw_k > 8)
        p.errors.push_back("twist.k (" + key_line("twist.k") + "): outside [0, 8]");
    if (!(c.tw_H >= 0.0 && c.tw_H <= c.tw_T))
        p.errors.push_back("twist.H and twist.T (" + key_line("twist.H") + ", " + key_line("twist.T") +
                           "): precondition 0 <= H <= T violated");
    if (!(c.exp_alpha0 >= 0.0 && c.exp_alpha0 <= 1.0))
        p.errors.push_back("exponents.alpha0 (" + key_line("exponents.alpha0") + "): outside [0, 1]");
    if (!(c.exp_b1 > 0.0 && c.exp_b1 <= 1.0 / 9.0))
        p.errors.push_back("exponents.b1 (" + key_line("exponents.b1") + "): outside (0, 1/9]");
    for (double d : c.po_delta)
        for (double K : c.po_K)
            if (!(d < K / 2.0))
                p.errors.push_back("poisson.delta_list and poisson.K_list (" +
                                   key_line("poisson.delta_list") + ", " + key_line("poisson.K_list") +
                                   "): need delta < K/2 for every pair");

    if (!p.errors.empty()) {
        std::string all = "configuration invalid:";
        for (const auto& e : p.errors) all += "\n  " + e;
        throw ConfigError(all);
    }

    if (c.output.empty()) c.output = c.subcommand + ".csv";
    if (c.manifest.empty()) c.manifest = c.output + ".manifest.json";
    return c;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "[experiment]\n";
    o << "subcommand = " << c.subcommand << "\n";
    o << "threads = " << c.threads << "\n";
    o << "output = " << c.output << "\n";
    o << "manifest = " << c.manifest << "\n";
    if (!c.cache.empty()) o << "cache = " << c.cache << "\n";
    o << "\n[base_point]\n";
    o << "x = " << fmt_double(c.bp_x) << "\n";
    o << "y = " << fmt_double(c.bp_y) << "\n";
    o << "theta = " << fmt_double(c.bp_theta) << "\n";
    o << "\n[observable]\n";
    o << "kind = " << c.obs_kind << "\n";
    o << "center = " << fmt_double(c.obs0.cx) << " " << fmt_double(c.obs0.cy) << " "
      << fmt_double(c.obs0.ctheta) << "\n";
    o << "widths = " << fmt_double(c.obs0.wx) << " " << fmt_double(c.obs0.wy) << " "
      << fmt_double(c.obs0.wtheta) << "\n";
    o << "amplitude = " << fmt_double(c.obs0.amplitude) << "\n";
    o << "center2 = " << fmt_double(c.obs1.cx) << " " << fmt_double(c.obs1.cy) << " "
      << fmt_double(c.obs1.ctheta) << "\n";
    o << "widths2 = " << fmt_double(c.obs1.wx) << " " << fmt_double(c.obs1.wy) << " "
      << fmt_double(c.obs1.wtheta) << "\n";
    o << "amplitude2 = " << fmt_double(c.obs1.amplitude) << "\n";
    o << "value = " << fmt_double(c.obs_value) << "\n";
    o << "\n[quadrature]\n";
    o << "nodes_per_panel = " << c.quad.nodes_per_panel << "\n";
    o << "panel_length = " << fmt_double(c.quad.panel_length) << "\n";
    o << "target_rel_error = " << fmt_double(c.quad.target_rel_error) << "\n";
    o << "\n[exponents]\n";
    o << "alpha0 = " << fmt_double(c.exp_alpha0) << "\n";
    o << "b1 = " << fmt_double(c.exp_b1) << "\n";
    o << "json = " << (c.exp_json ? "true" : "false") << "\n";
    o << "\n[twist]\n";
    o << "a = " << fmt_double(c.tw_a) << "\n";
    o << "T = " << fmt_double(c.tw_T) << "\n";
    o << "k = " << c.tw_k << "\n";
    o << "H = " << fmt_double(c.tw_H) << "\n";
    o << "\n[decay]\n";
    o << "a = " << fmt_double(c.dc_a) << "\n";
    o << "k = " << c.dc_k << "\n";
    o << "T_list = " << fmt_list(c.dc_T) << "\n";
    o << "\n[sparse]\n";
    o << "gamma = " << fmt_double(c.sp_gamma) << "\n";
    o << "epsilon = " << fmt_double(c.sp_epsilon) << "\n";
    o << "N_list = " << fmt_list(c.sp_N) << "\n";
    o << "\n[kirillov]\n";
    o << "nu = " << fmt_double(c.ki_nu) << "\n";
    o << "support = " << fmt_double(c.ki_lo) << " " << fmt_double(c.ki_hi) << "\n";
    o << "s_list = " << fmt_list(std::vector<std::int64_t>(c.ki_s.begin(), c.ki_s.end())) << "\n";
    o << "H_grid = " << fmt_list(c.ki_H) << "\n";
    o << "a_grid = " << fmt_list(c.ki_a) << "\n";
    o << "\n[timechange]\n";
    o << "a = " << fmt_double(c.tc_a) << "\n";
    o << "k = " << c.tc_k << "\n";
    o << "T_list = " << fmt_list(c.tc_T) << "\n";
    o << "rho_amplitude = " << fmt_double(c.rho_amplitude) << "\n";
    o << "rho_center = " << fmt_double(c.rho_bump.cx) << " " << fmt_double(c.rho_bump.cy) << " "
      << fmt_double(c.rho_bump.ctheta) << "\n";
    o << "rho_widths = " << fmt_double(c.rho_bump.wx) << " " << fmt_double(c.rho_bump.wy) << " "
      << fmt_double(c.rho_bump.wtheta) << "\n";
    o << "\n[poisson]\n";
    o << "delta_list = " << fmt_list(c.po_delta) << "\n";
    o << "K_list = " << fmt_list(c.po_K) << "\n";
    o << "grid = " << c.po_grid << "\n";
    o << "tail_tol = " << fmt_double(c.po_tail_tol) << "\n";
    o << "k_range = " << c.po_k_range << "\n";
    return o.str();
}

std::string config_hash(const ExperimentConfig& c) {
    std::string s = serialize_config(c);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace horolab
