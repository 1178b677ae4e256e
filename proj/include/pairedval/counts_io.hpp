#pragma once

// Pre-tallied counts: the decision matrices and matched-sample tables of one
// anomaly type at a single operating point, optionally with the two areas.
//
// CSV layout (one row per anomaly and arm, header required):
//   anomaly,arm,tp,fp,tn,fn,sens_g,sens_rho,sens_lambda,sens_b,
//   spec_g,spec_rho,spec_lambda,spec_b,auc
// The matched-sample columns and auc are per anomaly and must agree between
// the two arm rows; auc is the area of that row's arm and may be empty.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairedval/matching.hpp"

namespace pairedval {

struct AnomalyCounts {
    AnomalyType anomaly = AnomalyType::caries;
    DecisionMatrix control;
    DecisionMatrix study;
    MatchedSampleTable sens;
    MatchedSampleTable spec;
    std::optional<double> auc_control;
    std::optional<double> auc_study;
};

// Tallies every anomaly that has at least one tooth. Areas are attached when
// both arms have GT-positive and GT-negative teeth.
std::vector<AnomalyCounts> counts_from_dataset(const StudyDataset& dataset, ConfidenceLabel threshold,
                                               double min_dice = kDefaultMinDice);

std::string counts_to_csv(std::span<const AnomalyCounts> counts);

// Throws InputError("origin:line", ...) on malformed rows, duplicate or
// unpaired arms and disagreeing per-anomaly columns.
std::vector<AnomalyCounts> counts_from_csv(std::string_view text, const std::string& origin);
std::vector<AnomalyCounts> load_counts(const std::filesystem::path& path);

}  // namespace pairedval
