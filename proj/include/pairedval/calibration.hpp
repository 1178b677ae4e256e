#pragma once

// Monte Carlo check of the paired tests: synthetic matched-sample tables are
// drawn from a label-level joint distribution and the rejection rates, the
// formula power and the Wald coverage are measured over many replicates.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pairedval/matching.hpp"
#include "pairedval/paired_tests.hpp"

namespace pairedval {

// Each of n_teeth teeth is GT-positive with probability `prevalence`. A
// positive tooth is a profit with p_profit, a loss with p_loss, and good or
// bad with equal shares of the rest.
struct SimScenario {
    std::string name = "scenario";
    std::int64_t n_teeth = 100;
    double prevalence = 0.5;
    double p_profit = 0.1;
    double p_loss = 0.1;
    std::int64_t replications = 10000;
    std::uint64_t seed = 1;

    // Throws Error on probabilities outside [0, 1], p_profit + p_loss > 1,
    // n_teeth < 1 or replications < 1.
    void validate() const;

    bool is_null() const { return p_profit == p_loss; }
    // Study-arm sensitivity implied by the scenario.
    double true_sensitivity() const { return 0.5 * (1.0 - p_profit - p_loss) + p_profit; }
};

// SplitMix64; satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Independent stream for replicate `index` of a run seeded with `seed`.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index);

private:
    std::uint64_t state_;
};

// One synthetic sensitivity table. Deterministic in the generator state.
MatchedSampleTable simulate_mst(const SimScenario& scenario, SplitMix64& rng);

struct CalibrationSummary {
    SimScenario scenario;
    std::int64_t informative = 0;        // replicates with at least one discordant pair
    double binomial_reject_rate = 0.0;   // right-sided exact binomial test at alpha_I
    double mcnemar_reject_rate = 0.0;    // right-sided McNemar test at alpha_I
    double two_direction_rate = 0.0;     // binomial test with data-chosen direction
    double analytic_power = 0.0;         // mean formula power at the realized n
    double ci_coverage = 0.0;            // Wald CI of the study sensitivity
    double alpha_I = 0.05;
    double confidence = 0.95;
};

// Runs scenario.replications replicates on up to `threads` worker threads
// (0 = hardware concurrency). Results do not depend on the thread count.
// Throws Error unless replications >= 1000.
CalibrationSummary calibrate(const SimScenario& scenario, const TestConfig& cfg,
                             unsigned threads = 0);

// Scenario files: a JSON object, a JSON array of objects, or flat TOML with
// optional [name] sections. Keys: name, n_teeth, prevalence, p_profit,
// p_loss, replications, seed.
std::vector<SimScenario> load_scenarios(const std::filesystem::path& path);
std::vector<SimScenario> scenarios_from_json(const nlohmann::json& j);
std::vector<SimScenario> scenarios_from_toml(std::string_view text, const std::string& origin);

nlohmann::json to_json(const SimScenario& s);
nlohmann::json to_json(const CalibrationSummary& s);

}  // namespace pairedval
