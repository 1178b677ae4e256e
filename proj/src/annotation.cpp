#include "pairedval/annotation.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "pairedval/geometry.hpp"

namespace pairedval {

std::string_view to_string(AnomalyType type) {
    switch (type) {
        case AnomalyType::caries: return "caries";
        case AnomalyType::apical_lesion: return "apical_lesion";
        case AnomalyType::root_canal_defect: return "root_canal_defect";
        case AnomalyType::marginal_defect: return "marginal_defect";
        case AnomalyType::bone_loss: return "bone_loss";
        case AnomalyType::calculus: return "calculus";
    }
    return "unknown";
}

std::string_view display_name(AnomalyType type) {
    switch (type) {
        case AnomalyType::caries: return "Caries";
        case AnomalyType::apical_lesion: return "Apical lesion";
        case AnomalyType::root_canal_defect: return "Root canal defect";
        case AnomalyType::marginal_defect: return "Marginal defect";
        case AnomalyType::bone_loss: return "Bone loss";
        case AnomalyType::calculus: return "Calculus";
    }
    return "Unknown";
}

std::optional<AnomalyType> parse_anomaly(std::string_view name) {
    for (AnomalyType t : kAllAnomalies) {
        if (to_string(t) == name) return t;
    }
    return std::nullopt;
}

std::string_view to_string(Arm arm) { return arm == Arm::control ? "control" : "study"; }

std::optional<Arm> parse_arm(std::string_view name) {
    if (name == "control") return Arm::control;
    if (name == "study") return Arm::study;
    return std::nullopt;
}

std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b) {
    const std::int64_t w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const std::int64_t h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (w <= 0 || h <= 0) return 0;
    return w * h;
}

double dice(const BoundingBox& a, const BoundingBox& b) {
    const std::int64_t total = a.area() + b.area();
    if (total == 0) return 0.0;
    return 2.0 * static_cast<double>(intersection_area(a, b)) / static_cast<double>(total);
}

std::size_t StudyDataset::tooth_count() const {
    std::size_t n = 0;
    for (const auto& image : images) n += image.teeth.size();
    return n;
}

namespace {

class Collector {
public:
    explicit Collector(std::vector<Violation>& out) : out_(out) {}

    void add(const std::string& image, std::string field, std::string rule) {
        out_.push_back({image, std::move(field), std::move(rule)});
    }

    void check_box(const ImageRecord& image, const std::string& field, const BoundingBox& box) {
        if (box.is_degenerate()) {
            add(image.image_id, field, "degenerate box");
            return;
        }
        if (box.x_min < 0 || box.y_min < 0 || box.x_max > image.width || box.y_max > image.height) {
            add(image.image_id, field, "box outside image bounds");
        }
    }

    void check_annotation(const ImageRecord& image, const std::string& field, const Annotation& a,
                          bool expert) {
        check_box(image, field + ".box", a.box);
        if (a.confidence.value < 0 || a.confidence.value > 100) {
            add(image.image_id, field + ".confidence", "outside [0,100]");
        } else if (a.confidence.value % 10 != 0) {
            add(image.image_id, field + ".confidence", "not a multiple of 10");
        } else if (!expert && a.confidence.value == 0 && !(a.arm == Arm::study && a.ai_origin)) {
            add(image.image_id, field + ".confidence",
                "0 only allowed on AI proposals in the study arm");
        }
    }

private:
    std::vector<Violation>& out_;
};

}  // namespace

std::vector<Violation> validate_dataset(const StudyDataset& dataset) {
    std::vector<Violation> out;
    Collector c(out);
    std::set<std::string> image_ids;

    for (const ImageRecord& image : dataset.images) {
        const std::string& id = image.image_id;
        if (!image_ids.insert(id).second) c.add(id, "image_id", "duplicate image id");
        if (image.width <= 0 || image.height <= 0) c.add(id, "size", "non-positive image size");

        std::set<std::string> tooth_ids;
        for (std::size_t t = 0; t < image.teeth.size(); ++t) {
            const ToothRegion& tooth = image.teeth[t];
            const std::string field = fmt::format("teeth[{}]", t);
            if (!tooth_ids.insert(tooth.tooth_id).second) {
                c.add(id, field + ".id", "duplicate tooth id");
            }
            if (tooth.polygon.size() < 3) {
                c.add(id, field + ".polygon", "fewer than 3 vertices");
            } else if (!geometry::is_simple(tooth.polygon)) {
                c.add(id, field + ".polygon", "self-intersecting polygon");
            }
        }

        const bool has_gt = image.ground_truth.has_value();
        const bool has_experts = image.expert_sets.has_value();
        if (has_gt == has_experts) {
            c.add(id, "groundTruth", "exactly one of groundTruth and expertSets required");
        }
        if (has_gt) {
            for (std::size_t i = 0; i < image.ground_truth->size(); ++i) {
                c.check_box(image, fmt::format("groundTruth[{}].box", i), (*image.ground_truth)[i].box);
            }
        }
        if (has_experts) {
            if (image.expert_sets->size() != 3) c.add(id, "expertSets", "exactly 3 expert sets required");
            for (std::size_t e = 0; e < image.expert_sets->size(); ++e) {
                const auto& set = (*image.expert_sets)[e];
                for (std::size_t i = 0; i < set.size(); ++i) {
                    c.check_annotation(image, fmt::format("expertSets[{}][{}]", e, i), set[i], true);
                }
            }
        }
        for (std::size_t i = 0; i < image.control_annotations.size(); ++i) {
            const Annotation& a = image.control_annotations[i];
            const std::string field = fmt::format("control[{}]", i);
            if (a.arm != Arm::control) c.add(id, field + ".arm", "arm does not match list");
            c.check_annotation(image, field, a, false);
        }
        for (std::size_t i = 0; i < image.study_annotations.size(); ++i) {
            const Annotation& a = image.study_annotations[i];
            const std::string field = fmt::format("study[{}]", i);
            if (a.arm != Arm::study) c.add(id, field + ".arm", "arm does not match list");
            c.check_annotation(image, field, a, false);
        }
    }
    return out;
}

StudyDataset normalize_dataset(StudyDataset dataset) {
    for (ImageRecord& image : dataset.images) {
        std::erase_if(image.study_annotations, [](const Annotation& a) {
            return a.ai_origin && a.confidence.value == 0;
        });
    }
    return dataset;
}

}  // namespace pairedval
