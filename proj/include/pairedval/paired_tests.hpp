#pragma once

// Endpoint estimates and the two marginal hypothesis tests on matched-sample
// tables: continuity-corrected McNemar and the exact one-sided binomial test
// with its normal-approximation critical region, Type-II error and power.

#include <optional>
#include <span>
#include <vector>

#include "pairedval/matching.hpp"

namespace pairedval {

struct TestConfig {
    double alpha_I = 0.05;     // significance level
    double alpha_II = 0.10;    // acceptable Type-II error
    double confidence = 0.95;  // CI coverage c

    // Throws Error unless every field lies in (0, 1).
    void validate() const;
};

struct SensSpec {
    double sensitivity = 0.0;
    double specificity = 0.0;
};

// Throws Error("undefined endpoint") when |P| or |N| is zero.
SensSpec sens_spec(const DecisionMatrix& dm);

struct EndpointResult {
    double estimate = 0.0;
    double half_width = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Wald interval estimate ± z_{(1+c)/2} sqrt(p(1-p)/denom), clipped to [0, 1].
EndpointResult wald_ci(double estimate, std::int64_t denom, double confidence);

enum class Direction : std::uint8_t { right, left };  // profit > loss / profit < loss

std::string_view to_string(Direction d);

struct McNemarResult {
    double chi2 = 0.0;
    double p_one_sided = 1.0;
    Direction direction = Direction::right;
    bool reject_H0 = false;
};

// Throws Error("no discordant pairs") when profit + loss == 0.
McNemarResult mcnemar_test(const MatchedSampleTable& table, const TestConfig& cfg);

struct BinomialTestResult {
    std::int64_t n = 0;
    std::int64_t x = 0;
    Direction direction = Direction::right;
    double p_one_sided = 1.0;
    // Lower end of the critical region [x_alpha, n]. Equals n + 1 (empty
    // region) when the normal approximation overshoots for tiny n.
    std::int64_t x_alpha = 0;
    double e_II = 1.0;
    double power = 0.0;
    bool reject_H0 = false;
};

// Unrounded critical value n/2 + z_{1-alpha} sqrt(n/4) + 1/2.
double critical_value(std::int64_t n, double alpha_I);
// Nearest integer, ties upward.
std::int64_t critical_region_start(std::int64_t n, double alpha_I);

BinomialTestResult binomial_test(const MatchedSampleTable& table, const TestConfig& cfg);

// (1+β²)PR / (β²P + R).
double f_beta(double precision, double sensitivity, double beta);

struct EndpointRow {
    AnomalyType anomaly = AnomalyType::caries;
    EndpointResult sens_control;
    EndpointResult sens_study;
    EndpointResult spec_control;
    EndpointResult spec_study;
};

struct EndpointReport {
    std::vector<EndpointRow> rows;
    // Unweighted mean of every per-anomaly field, interval bounds included.
    EndpointRow average;
};

// Pairs of (control, study) decision matrices, one pair per anomaly present.
struct DecisionPair {
    DecisionMatrix control;
    DecisionMatrix study;
};

EndpointReport endpoint_report(std::span<const DecisionPair> pairs, const TestConfig& cfg);
EndpointReport endpoint_report(const StudyDataset& dataset, const TestConfig& cfg,
                               ConfidenceLabel threshold, double min_dice = kDefaultMinDice);

}  // namespace pairedval
