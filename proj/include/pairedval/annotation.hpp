#pragma once

// Domain model for a paired (control vs. AI-assisted) reader study on
// intraoral radiographs: anomaly boxes, tooth regions and their validation.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pairedval {

enum class AnomalyType : std::uint8_t {
    caries,
    apical_lesion,
    root_canal_defect,
    marginal_defect,
    bone_loss,
    calculus,
};

inline constexpr std::array<AnomalyType, 6> kAllAnomalies = {
    AnomalyType::caries,          AnomalyType::apical_lesion, AnomalyType::root_canal_defect,
    AnomalyType::marginal_defect, AnomalyType::bone_loss,     AnomalyType::calculus,
};

std::string_view to_string(AnomalyType type);
// Human readable row label used in reports ("Root canal defect").
std::string_view display_name(AnomalyType type);
std::optional<AnomalyType> parse_anomaly(std::string_view name);

enum class Arm : std::uint8_t { control, study };

std::string_view to_string(Arm arm);
std::optional<Arm> parse_arm(std::string_view name);

// Half-open integer pixel rectangle [x_min, x_max) x [y_min, y_max).
struct BoundingBox {
    std::int64_t x_min = 0;
    std::int64_t y_min = 0;
    std::int64_t x_max = 0;
    std::int64_t y_max = 0;

    std::int64_t width() const { return x_max - x_min; }
    std::int64_t height() const { return y_max - y_min; }
    std::int64_t area() const { return is_degenerate() ? 0 : width() * height(); }
    bool is_degenerate() const { return x_min >= x_max || y_min >= y_max; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Pixel area shared by two boxes (0 when they do not overlap).
std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b);

// 2|A∩B| / (|A|+|B|) on rectangle areas. Degenerate pairs give 0.
double dice(const BoundingBox& a, const BoundingBox& b);

// Reader confidence in percent. Legal values are 0, 10, ..., 100.
struct ConfidenceLabel {
    int value = 100;

    bool is_valid() const { return value >= 0 && value <= 100 && value % 10 == 0; }

    friend auto operator<=>(const ConfidenceLabel&, const ConfidenceLabel&) = default;
};

// Annotations with confidence >= threshold survive; threshold 100 keeps only 100s.
inline bool passes_threshold(ConfidenceLabel c, ConfidenceLabel threshold) {
    return c.value >= threshold.value;
}

struct Annotation {
    AnomalyType anomaly = AnomalyType::caries;
    BoundingBox box;
    ConfidenceLabel confidence;
    Arm arm = Arm::control;
    std::string reader_id;
    // Box proposed by the detection algorithm (study arm only). Only these
    // may carry confidence 0, which is equivalent to deleting the box.
    bool ai_origin = false;
};

// Reference anomaly instance.
struct GroundTruthBox {
    AnomalyType anomaly = AnomalyType::caries;
    BoundingBox box;

    friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct ToothRegion {
    std::string tooth_id;
    std::vector<Point> polygon;
};

struct ImageRecord {
    std::string image_id;
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::vector<ToothRegion> teeth;
    // Exactly one of the two ground-truth sources is populated.
    std::optional<std::vector<GroundTruthBox>> ground_truth;
    std::optional<std::vector<std::vector<Annotation>>> expert_sets;
    std::vector<Annotation> control_annotations;
    std::vector<Annotation> study_annotations;

    const std::vector<Annotation>& annotations(Arm arm) const {
        return arm == Arm::control ? control_annotations : study_annotations;
    }
};

struct StudyDataset {
    std::vector<ImageRecord> images;

    std::size_t image_count() const { return images.size(); }
    std::size_t tooth_count() const;
};

struct Violation {
    std::string image_id;
    std::string field;
    std::string rule;

    friend bool operator==(const Violation&, const Violation&) = default;
};

// Checks every type invariant; an empty result means the dataset is usable.
std::vector<Violation> validate_dataset(const StudyDataset& dataset);

// Drops AI proposals the reader rated 0%. The tally treats "rated 0" and
// "deleted" identically, so both end up in the same state.
StudyDataset normalize_dataset(StudyDataset dataset);

}  // namespace pairedval
