#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "horolab/orbit_cache.hpp"
#include "horolab/runner.hpp"

using namespace horolab;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
} // namespace

TEST_CASE("minimal config fills defaults") {
    ExperimentConfig c = parse_config("[experiment]\nsubcommand = decay\n");
    CHECK(c.subcommand == "decay");
    CHECK(c.threads == 1);
    CHECK(c.output == "decay.csv");
    CHECK(c.manifest == "decay.csv.manifest.json");
    CHECK(c.bp_x == doctest::Approx(0.1234567));
    CHECK(c.obs_kind == "pair");
    CHECK(c.obs0 == default_bump0());
    CHECK(c.dc_T.size() == 11);
}

TEST_CASE("validation reports all errors with line numbers") {
    std::string text =
        "[experiment]\n"
        "subcommand = decay\n"
        "bogus_key = 1\n"
        "[sparse]\n"
        "gamma = 0.5\n"
        "epsilon = 0.4\n"
        "[twist]\n"
        "T = nonsense\n";
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);       // unknown key
        CHECK(msg.find("bogus_key") != std::string::npos);
        CHECK(msg.find("line 8") != std::string::npos);       // type mismatch
        CHECK(msg.find("sparse.gamma") != std::string::npos); // names both keys
        CHECK(msg.find("sparse.epsilon") != std::string::npos);
        CHECK(msg.find("(1 - gamma)/2") != std::string::npos);
    }
}

TEST_CASE("serialize/parse round trip") {
    ExperimentConfig c = parse_config(
        "[experiment]\nsubcommand = sparse\nthreads = 2\n"
        "[sparse]\ngamma = 0.02\nN_list = 100 1000\n"
        "[observable]\nkind = bump\namplitude = 2.5\n");
    ExperimentConfig c2 = parse_config(serialize_config(c));
    CHECK(c == c2);
    CHECK(config_hash(c) == config_hash(c2));
}

TEST_CASE("run_experiment is deterministic") {
    ExperimentConfig c = parse_config(
        "[experiment]\nsubcommand = twist\noutput = /tmp/horolab_det.csv\n"
        "[twist]\na = 1\nT = 64\n");
    run_experiment(c);
    std::string first = slurp("/tmp/horolab_det.csv");
    run_experiment(c);
    std::string second = slurp("/tmp/horolab_det.csv");
    CHECK(first == second);
    CHECK(first.find("T,a,k,H,re_value,im_value,abs_value,err_est,max_cusp_height") == 0);
}

TEST_CASE("orbit cache file round trip and corruption detection") {
    SurfacePoint x0 = default_base_point();
    OrbitCache cache(x0);
    cache.ensure(50.0);
    const std::string path = "/tmp/horolab_cache_test.bin";
    cache.save(path);

    OrbitCache loaded = OrbitCache::load(path, x0);
    CHECK(loaded.size() == cache.size());
    // Continuing the orbit from a loaded cache matches bit for bit.
    SurfacePoint a = cache.at(50.75);
    SurfacePoint b = loaded.at(50.75);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.theta == b.theta);

    // Wrong base point rejected.
    SurfacePoint other = reduce(from_iwasawa(0.3, 1.7, 0.4));
    CHECK_THROWS_AS(OrbitCache::load(path, other), CacheError);

    // Truncated file rejected.
    {
        std::string bytes = slurp(path);
        std::ofstream out(path, std::ios::binary);
        out << bytes.substr(0, bytes.size() / 2 | 1);
    }
    CHECK_THROWS_AS(OrbitCache::load(path, x0), CacheError);
    std::remove(path.c_str());
}

TEST_CASE("cached decay run reproduces the cold run byte for byte") {
    const std::string cache_path = "/tmp/horolab_cache_decay.bin";
    std::remove(cache_path.c_str());
    ExperimentConfig c = parse_config(
        "[experiment]\nsubcommand = decay\noutput = /tmp/horolab_decay.csv\n"
        "cache = /tmp/horolab_cache_decay.bin\n"
        "[decay]\na = 1\nT_list = 32 64 128\n");
    run_experiment(c); // cold: builds and saves the cache
    std::string cold = slurp("/tmp/horolab_decay.csv");
    run_experiment(c); // warm: loads the cache
    std::string warm = slurp("/tmp/horolab_decay.csv");
    CHECK(cold == warm);
    std::remove(cache_path.c_str());
    std::remove("/tmp/horolab_decay.csv");
}

TEST_CASE("exponents run emits the table") {
    ExperimentConfig c = parse_config(
        "[experiment]\nsubcommand = exponents\noutput = /tmp/horolab_exp.txt\n"
        "[exponents]\nalpha0 = 0\nb1 = 0.11111111111111111\n");
    RunResult r = run_experiment(c);
    CHECK(r.stdout_text.find("gamma_max") != std::string::npos);
    std::string table = slurp("/tmp/horolab_exp.txt");
    CHECK(table.find("0.0416666666667") != std::string::npos); // b = 1/24
    CHECK(table.find("0.0384615384615") != std::string::npos); // 1/26
    std::remove("/tmp/horolab_exp.txt");
}
