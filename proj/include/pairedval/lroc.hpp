#pragma once

// Localization ROC curves from confidence-threshold operating points, their
// trapezoidal area, Hanley–McNeil standard errors, and the paired test for
// the difference of two correlated areas.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "pairedval/matching.hpp"
#include "pairedval/paired_tests.hpp"

namespace pairedval {

// Operating-point thresholds in curve order (strictest first).
inline constexpr std::array<int, 10> kLrocThresholds = {100, 90, 80, 70, 60, 50, 40, 30, 20, 10};

struct OperatingPoint {
    ConfidenceLabel threshold;
    double fpr = 0.0;
    double sens = 0.0;
    DecisionMatrix counts;
};

struct CurvePoint {
    double fpr = 0.0;
    double sens = 0.0;
};

struct LrocCurve {
    AnomalyType anomaly = AnomalyType::caries;
    Arm arm = Arm::control;
    std::vector<OperatingPoint> points;  // ordered by kLrocThresholds
    double auc = 0.0;

    std::int64_t positives() const { return points.empty() ? 0 : points.front().counts.positives(); }
    std::int64_t negatives() const { return points.empty() ? 0 : points.front().counts.negatives(); }

    // (0,0), the operating points, then a flat run to fpr = 1. Localized
    // findings never reach (1,1): the curve stops rising after the last point.
    std::vector<CurvePoint> polyline() const;
};

// Throws Error when the dataset has no GT-positive or no GT-negative teeth.
LrocCurve build_lroc(const StudyDataset& dataset, Arm arm, AnomalyType anomaly,
                     double min_dice = kDefaultMinDice);

// Builds a curve from already tallied operating points (same order as
// kLrocThresholds) and fills in its area.
LrocCurve lroc_from_counts(AnomalyType anomaly, Arm arm, std::span<const DecisionMatrix> counts);

// Area under a piecewise-linear curve. Throws Error("invalid curve") if fpr
// decreases anywhere or leaves [0, 1].
double trapezoid_auc(std::span<const CurvePoint> points);
double trapezoid_auc(const LrocCurve& curve);

struct AucStats {
    double a = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double sigma = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Hanley–McNeil standard error of an area with P positives and N negatives;
// the CI a ± z_{(1+c)/2} σ is clipped to [0, 1].
AucStats auc_stats(double a, std::int64_t positives, std::int64_t negatives, double confidence);

struct KendallCorrelations {
    double r_P = 0.0;
    double r_N = 0.0;
};

// (concordant - discordant) / total on each matched-sample table.
KendallCorrelations kendall_correlations(const MatchedSampleTable& sens_table,
                                         const MatchedSampleTable& spec_table);

// Static area-correlation grid with bilinear interpolation.
struct CorrelationTable {
    static std::span<const double> areas();
    static std::span<const double> correlations();
    static double cell(std::size_t row, std::size_t column);
    static double interpolate(double avg_correlation, double avg_area);
};

// Correlation between the two areas from the grid, clipped to [0, max(r_P, r_N)].
double lookup_r(double r_P, double r_N, double a_c, double a_s);

enum class CorrelationMode : std::uint8_t {
    table,    // grid lookup on the average correlation and average area
    average,  // (r_P + r_N) / 2 used directly
};

struct AucComparison {
    double a_c = 0.0;
    double a_s = 0.0;
    double sigma_c = 0.0;
    double sigma_s = 0.0;
    double r_P = 0.0;
    double r_N = 0.0;
    double r = 0.0;
    double sigma_diff = 0.0;
    double z_hat = 0.0;
    double p_one_sided = 0.5;
    double lo = 0.0;  // CI of a_s - a_c
    double hi = 0.0;
    bool reject_H0 = false;
};

AucComparison auc_difference_test(double a_c, double a_s, std::int64_t positives,
                                  std::int64_t negatives, const MatchedSampleTable& sens_table,
                                  const MatchedSampleTable& spec_table, const TestConfig& cfg,
                                  CorrelationMode mode = CorrelationMode::table);
AucComparison auc_difference_test(const LrocCurve& control, const LrocCurve& study,
                                  const MatchedSampleTable& sens_table,
                                  const MatchedSampleTable& spec_table, const TestConfig& cfg,
                                  CorrelationMode mode = CorrelationMode::table);

// "arm,threshold,fpr,sens,tp,fp,tn,fn" rows for both arms.
std::string curves_to_csv(const LrocCurve& control, const LrocCurve& study);

// Standalone SVG plot on [0,1]^2 with both polylines and labelled points.
std::string curves_to_svg(const LrocCurve& control, const LrocCurve& study);

}  // namespace pairedval
