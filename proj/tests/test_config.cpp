#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "membrane/config.hpp"

using namespace membrane;

TEST_CASE("config parses sections and typed values") {
    const Config cfg = Config::parse_string(
        "# comment\n"
        "[solver]\n"
        "max_outer = 100\n"
        "tau = 0.25\n"
        "accelerate = false\n"
        "\n"
        "[experiment]\n"
        "M = 6\n");
    CHECK(cfg.get_int("solver.max_outer", 0) == 100);
    CHECK(cfg.get_double("solver.tau", -1) == doctest::Approx(0.25));
    CHECK(cfg.get_bool("solver.accelerate", true) == false);
    CHECK(cfg.get_double("experiment.M", 0) == doctest::Approx(6.0));
    CHECK(cfg.get_int("solver.missing", 7) == 7);
    CHECK(cfg.has("experiment.M"));
    CHECK(!cfg.has("experiment.N"));
}

TEST_CASE("malformed config lines are rejected") {
    CHECK_THROWS(Config::parse_string("key = 1\n"));          // outside a section
    CHECK_THROWS(Config::parse_string("[s]\nno equals\n"));
    CHECK_THROWS(Config::parse_string("[s\nk = 1\n"));
    CHECK_THROWS(Config::parse_string("[]\nk = 1\n"));
    const Config cfg = Config::parse_string("[s]\nk = abc\n");
    CHECK_THROWS(cfg.get_double("s.k", 0));
    CHECK_THROWS(cfg.get_int("s.k", 0));
    CHECK_THROWS(cfg.get_bool("s.k", false));
}

TEST_CASE("unknown keys are errors") {
    const Config cfg = Config::parse_string("[solver]\nmax_outer = 5\nbogus = 1\n");
    CHECK_THROWS(cfg.require_known({"solver.max_outer"}));
    CHECK_NOTHROW(cfg.require_known({"solver.max_outer", "solver.bogus"}));
}

TEST_CASE("manifest round-trips and is deterministic up to wall clock") {
    ExperimentManifest m;
    m.id = "demo";
    m.seed = 77;
    m.config_echo["solver.tau"] = "0.1";
    m.metrics["energy"] = 3.863703305156273;
    m.metrics["kink_1"] = -0.22474487139158905;
    m.artifacts = {"a.csv", "b.stack"};
    m.wall_clock_seconds = 1.5;

    const auto dir = std::filesystem::temp_directory_path() / "membrane_manifest_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "manifest.json").string();
    m.write(path);
    const ExperimentManifest r = ExperimentManifest::read(path);
    CHECK(r.id == m.id);
    CHECK(r.seed == m.seed);
    CHECK(r.metrics.at("energy") == m.metrics.at("energy"));
    CHECK(r.artifacts == m.artifacts);

    ExperimentManifest m2 = m;
    m2.wall_clock_seconds = 99.0;
    auto strip = [](std::string s) {
        const auto pos = s.find("wall_clock_seconds");
        return s.substr(0, pos);
    };
    CHECK(strip(m.to_json()) == strip(m2.to_json()));
    CHECK(m.to_json() == r.to_json());  // identical including wall clock
}
