#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pairedval/calibration.hpp"
#include "pairedval/error.hpp"

using namespace pairedval;

namespace {

SimScenario small(std::uint64_t seed = 9) {
    SimScenario s;
    s.name = "small";
    s.n_teeth = 60;
    s.prevalence = 0.7;
    s.p_profit = 0.2;
    s.p_loss = 0.1;
    s.replications = 1000;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("SplitMix64 reference values") {
    // First outputs for seed 1234567 from the reference implementation.
    SplitMix64 r(1234567);
    CHECK(r() == 6457827717110365317ULL);
    CHECK(r() == 3203168211198807973ULL);
    CHECK(r() == 9817491932198370423ULL);
    SplitMix64 u(7);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("replicate streams are deterministic and distinct") {
    SplitMix64 a = SplitMix64::stream(5, 3), b = SplitMix64::stream(5, 3), c = SplitMix64::stream(5, 4);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
}

TEST_CASE("simulated tables") {
    SimScenario s = small();
    SplitMix64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const MatchedSampleTable t = simulate_mst(s, rng);
        CHECK(t.total() <= s.n_teeth);
        CHECK(t.good >= 0);
        CHECK(t.bad >= 0);
    }
    s.p_loss = 0.0;
    for (int i = 0; i < 200; ++i) CHECK(simulate_mst(s, rng).loss == 0);
    s.prevalence = 1.0;
    for (int i = 0; i < 50; ++i) CHECK(simulate_mst(s, rng).total() == s.n_teeth);
}

TEST_CASE("symmetric null has equal profit and loss means") {
    SimScenario s = small();
    s.p_profit = s.p_loss = 0.25;
    SplitMix64 rng(2);
    double rho = 0.0, lambda = 0.0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) {
        const auto t = simulate_mst(s, rng);
        rho += double(t.profit);
        lambda += double(t.loss);
    }
    // Each mean is 60 * 0.7 * 0.25 = 10.5 with sd ~ 2.9 / sqrt(reps).
    CHECK(rho / reps == doctest::Approx(10.5).epsilon(0.01));
    CHECK(lambda / reps == doctest::Approx(10.5).epsilon(0.01));
    CHECK(std::abs(rho - lambda) / reps < 0.1);
}

TEST_CASE("calibration is reproducible and thread-count independent") {
    const TestConfig cfg{};
    const CalibrationSummary a = calibrate(small(), cfg, 1);
    const CalibrationSummary b = calibrate(small(), cfg, 1);
    const CalibrationSummary c = calibrate(small(), cfg, 4);
    CHECK(to_json(a) == to_json(b));
    CHECK(to_json(a) == to_json(c));
    CHECK(to_json(a) != to_json(calibrate(small(10), cfg, 2)));
    CHECK(a.binomial_reject_rate >= 0.0);
    CHECK(a.binomial_reject_rate <= 1.0);
    CHECK(a.informative <= 1000);
    const auto j = to_json(a);
    CHECK(j.contains("empirical_power"));
    SimScenario null = small();
    null.p_profit = null.p_loss = 0.1;
    CHECK(to_json(calibrate(null, cfg, 2)).contains("type_I_rate"));
}

TEST_CASE("scenario validation") {
    const TestConfig cfg{};
    SimScenario s = small();
    s.replications = 999;
    CHECK_THROWS_AS(calibrate(s, cfg), Error);
    s = small();
    s.p_profit = 0.7;
    s.p_loss = 0.5;
    CHECK_THROWS_AS(s.validate(), Error);
    s = small();
    s.prevalence = 1.5;
    CHECK_THROWS_AS(s.validate(), Error);
    s = small();
    s.n_teeth = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    CHECK(small().true_sensitivity() == doctest::Approx(0.5 * 0.7 + 0.2));
}

TEST_CASE("TOML scenarios") {
    const std::string text = R"(# shared defaults
n_teeth = 40
replications = 2000
seed = 11

[null]
p_profit = 0.3
p_loss = 0.3

[alt]   # stronger effect
p_profit = 0.6
p_loss = 0.1
n_teeth = 25
name = "renamed"
)";
    const auto v = scenarios_from_toml(text, "s.toml");
    REQUIRE(v.size() == 2);
    CHECK(v[0].name == "null");
    CHECK(v[0].n_teeth == 40);
    CHECK(v[0].replications == 2000);
    CHECK(v[0].seed == 11);
    CHECK(v[0].is_null());
    CHECK(v[1].name == "renamed");
    CHECK(v[1].n_teeth == 25);
    CHECK(v[1].p_profit == 0.6);

    const auto flat = scenarios_from_toml("p_profit = 0.2\np_loss = 0.1\n", "f.toml");
    REQUIRE(flat.size() == 1);
    CHECK(flat[0].p_loss == 0.1);

    CHECK_THROWS_AS(scenarios_from_toml("colour = 3\n", "x.toml"), InputError);
    CHECK_THROWS_AS(scenarios_from_toml("n_teeth = many\n", "x.toml"), InputError);
    CHECK_THROWS_AS(scenarios_from_toml("[broken\n", "x.toml"), InputError);
    CHECK_THROWS_AS(scenarios_from_toml("p_profit 0.2\n", "x.toml"), InputError);
}

TEST_CASE("JSON scenarios and file loading") {
    const nlohmann::json one = {{"name", "a"}, {"n_teeth", 30}, {"p_profit", 0.5}, {"p_loss", 0.2}, {"seed", 4}};
    const auto v = scenarios_from_json(one);
    REQUIRE(v.size() == 1);
    CHECK(v[0].n_teeth == 30);
    CHECK(v[0].seed == 4);
    CHECK(scenarios_from_json(nlohmann::json::array({one, one})).size() == 2);
    CHECK_THROWS_AS(scenarios_from_json(nlohmann::json{{"bogus", 1}}), InputError);
    CHECK_THROWS_AS(scenarios_from_json(nlohmann::json{{"n_teeth", "x"}}), InputError);
    CHECK(scenarios_from_json(to_json(v[0]))[0].p_profit == 0.5);

    const auto dir = std::filesystem::temp_directory_path() / "pairedval_cal_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "s.json") << one.dump();
    std::ofstream(dir / "s.toml") << "p_profit = 0.4\np_loss = 0.1\n";
    CHECK(load_scenarios(dir / "s.json")[0].name == "a");
    CHECK(load_scenarios(dir / "s.toml")[0].p_profit == 0.4);
    CHECK_THROWS_AS(load_scenarios(dir / "missing.toml"), InputError);
    std::filesystem::remove_all(dir);
}
