#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "helmres/errors.hpp"
#include "helmres/scenario.hpp"

using namespace helmres;
namespace fs = std::filesystem;

TEST_CASE("key-value config parsing") {
    const auto c = KeyValueConfig::parse(
        "# comment\n"
        "system.epsilon = 1e-3   # trailing\n"
        "system.centers = 0,0; 1.5,0\n"
        "sweep.epsilons = 1e-2, 2.5e-3\n"
        "imaging.robustness = yes\n",
        "t.cfg");
    CHECK(c.num("system.epsilon", 0) == 1e-3);
    CHECK(c.num("system.h", 7) == 7);
    CHECK(c.list("sweep.epsilons", {}) == std::vector<double>{1e-2, 2.5e-3});
    CHECK(c.flag("imaging.robustness", false));
    const auto p = c.points("system.centers", 2);
    REQUIRE(p.size() == 2);
    CHECK(p[1][0] == 1.5);
    CHECK_THROWS_AS(c.points("system.centers", 3), ConfigError);
    CHECK_THROWS_AS(c.str("signal.kind"), ConfigError);

    CHECK_THROWS_AS(KeyValueConfig::parse("system.epsilon 3"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("system.eps = 3"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("seed = 1\nseed = 2"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("system.h = one").num("system.h", 1), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("scan.points = 3.5").integer("scan.points", 1), ConfigError);
    try {
        KeyValueConfig::parse("\n\nsystem.h = x", "f.cfg").num("system.h", 1);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("f.cfg:3: system.h") != std::string::npos);
    }
}

TEST_CASE("scenario loading") {
    auto c = KeyValueConfig::parse("system.epsilon = 1e-3\nsystem.centers = 0,0; 1.5,0\nsystem.capacity = auto\n");
    auto s = scenario_from_config(c, RunKind::resonances);
    CHECK(s.system.centers.size() == 2);
    CHECK(s.capacity_from_mesh);
    // required fields per run kind, reported by name
    try {
        scenario_from_config(KeyValueConfig::parse("system.centers = 0,0", "r.cfg"), RunKind::resonances);
        FAIL("expected a missing-field error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("system.epsilon") != std::string::npos);
    }
    CHECK_THROWS_AS(scenario_from_config(KeyValueConfig::parse("run = psf"), RunKind::capacity), ConfigError);
    CHECK_NOTHROW(scenario_from_config(KeyValueConfig::parse("run = sweep\nsystem.centers = 0,0\nsweep.epsilons = 1e-2\n"
                                                             "scan.origin = 0,0,1\nimaging.source = 0,0,1\n"
                                                             "signal.kind = raised_cosine"),
                                       RunKind::imaging));
    // physical errors surface at load
    CHECK_THROWS_AS(scenario_from_config(KeyValueConfig::parse("system.epsilon = -1e-2\nsystem.centers = 0,0"),
                                         RunKind::resonances),
                    ParameterError);
    CHECK_THROWS_AS(scenario_from_config(KeyValueConfig::parse("system.epsilon = 1e-2\nsystem.centers = 0,0; 0.01,0"),
                                         RunKind::resonances),
                    GeometryError);
    CHECK_THROWS_AS(scenario_from_config(KeyValueConfig::parse("aperture.shape = ellipse\naperture.a = 1"),
                                         RunKind::capacity),
                    ConfigError);
    CHECK(parse_run_kind(to_string(RunKind::validate_integrals)) == RunKind::validate_integrals);
}

TEST_CASE("output helpers") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(-0.0) == "0");
    CHECK(fmt17(2.0) == "2");
    CsvWriter w({"a", "b"});
    CHECK_THROWS_AS(w.row(std::vector<double>{1.0}), Error);
}

TEST_CASE("scenario runs write a manifest") {
    const fs::path dir = fs::temp_directory_path() / "helmres_test_run" / "nested";
    fs::remove_all(dir.parent_path());
    Scenario s = default_scenario(RunKind::resonances);
    s.out_dir = dir.string();
    std::ostringstream log;
    CHECK(run_scenario(s, log) == 0);
    CHECK(fs::exists(dir / "manifest.json"));
    const std::string first = read_file((dir / "resonances.csv").string());
    int lines = 0;
    for (char ch : first) lines += ch == '\n';
    CHECK(lines == 1 + 4);
    CHECK(run_scenario(s, log) == 0);
    CHECK(read_file((dir / "resonances.csv").string()) == first);
    const std::string man = read_file((dir / "manifest.json").string());
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(first)));
    CHECK(man.find(hex) != std::string::npos);
    fs::remove_all(dir.parent_path());
}
