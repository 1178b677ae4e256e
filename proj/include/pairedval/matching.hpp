#pragma once

// Instance correspondence, two-out-of-three ground truth, tooth assignment and
// the strict per-tooth labelling (FN > TP > FP > TN) behind every statistic.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pairedval/annotation.hpp"

namespace pairedval {

inline constexpr double kDefaultMinDice = 0.25;

enum class ClassLabel : std::uint8_t { TP, FP, TN, FN };

std::string_view to_string(ClassLabel label);

enum class Endpoint : std::uint8_t { sensitivity, specificity };

std::string_view to_string(Endpoint endpoint);

struct InstancePair {
    std::size_t candidate = 0;
    std::size_t reference = 0;
    double dice = 0.0;
};

struct MatchResult {
    std::vector<InstancePair> pairs;                 // true positive instances
    std::vector<std::size_t> unmatched_candidates;   // false positive instances
    std::vector<std::size_t> unmatched_references;   // false negative instances
};

// Greedy one-to-one pairing in descending Dice order over same-type pairs with
// dice >= min_dice. Ties break on (candidate index, reference index).
MatchResult match_instances(std::span<const Annotation> candidates,
                            std::span<const GroundTruthBox> references, double min_dice);

// Clusters same-type boxes of the three experts (at most one box per expert
// per cluster) and keeps clusters backed by at least two experts. The fused
// box is the coordinate-wise mean of its members, rounded to integers.
std::vector<GroundTruthBox> majority_vote_ground_truth(
    std::span<const std::vector<Annotation>> expert_sets, double min_dice);

// Reference boxes of the image: the explicit list or the voted one.
std::vector<GroundTruthBox> resolve_ground_truth(const ImageRecord& image, double min_dice);

// Teeth whose polygon overlaps the box with positive area; if none do, the
// tooth with the nearest centroid. Throws Error("no regions") on empty input.
std::vector<std::string> assign_to_teeth(const BoundingBox& box, std::span<const ToothRegion> teeth);

struct ToothClassification {
    std::string image_id;
    std::string tooth_id;
    AnomalyType anomaly = AnomalyType::caries;
    Arm arm = Arm::control;
    ClassLabel label = ClassLabel::TN;
    ConfidenceLabel threshold;
};

// Labels every tooth of the image for one anomaly type and arm at one
// operating point. TP and FN instances are placed on teeth by their
// reference box, FP instances by the reader's box.
std::vector<ToothClassification> classify_teeth(const ImageRecord& image, Arm arm,
                                                AnomalyType anomaly, ConfidenceLabel threshold,
                                                double min_dice = kDefaultMinDice);

struct DecisionMatrix {
    AnomalyType anomaly = AnomalyType::caries;
    Arm arm = Arm::control;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t positives() const { return tp + fn; }
    std::int64_t negatives() const { return tn + fp; }
    std::int64_t total() const { return positives() + negatives(); }

    friend bool operator==(const DecisionMatrix&, const DecisionMatrix&) = default;
};

DecisionMatrix tally(std::span<const ToothClassification> labels, AnomalyType anomaly, Arm arm);
DecisionMatrix tally(const StudyDataset& dataset, Arm arm, AnomalyType anomaly,
                     ConfidenceLabel threshold, double min_dice = kDefaultMinDice);

// 2x2 paired table on the GT-positive (sensitivity) or GT-negative
// (specificity) teeth. `profit` counts teeth that improved from control to
// study, `loss` those that deteriorated; good/bad are the concordant cells.
struct MatchedSampleTable {
    AnomalyType anomaly = AnomalyType::caries;
    Endpoint endpoint = Endpoint::sensitivity;
    std::int64_t good = 0;
    std::int64_t profit = 0;
    std::int64_t loss = 0;
    std::int64_t bad = 0;

    std::int64_t total() const { return good + profit + loss + bad; }
    std::int64_t discordant() const { return profit + loss; }

    friend bool operator==(const MatchedSampleTable&, const MatchedSampleTable&) = default;
};

// Joins the two arms on (image, tooth). Throws Error("unpaired data") when
// the key sets differ or a tooth changes ground-truth status between arms.
MatchedSampleTable matched_samples(std::span<const ToothClassification> control,
                                   std::span<const ToothClassification> study, AnomalyType anomaly,
                                   Endpoint endpoint);
MatchedSampleTable matched_samples(const StudyDataset& dataset, AnomalyType anomaly,
                                   Endpoint endpoint, ConfidenceLabel threshold,
                                   double min_dice = kDefaultMinDice);

std::vector<ToothClassification> classify_dataset(const StudyDataset& dataset, Arm arm,
                                                  AnomalyType anomaly, ConfidenceLabel threshold,
                                                  double min_dice = kDefaultMinDice);

// Checks the margin identities linking a matched-sample table to the two
// decision matrices it was built from (e.g. good + profit == |TP^s|).
bool margins_consistent(const MatchedSampleTable& table, const DecisionMatrix& control,
                        const DecisionMatrix& study);

}  // namespace pairedval
