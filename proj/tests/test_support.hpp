#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>

#include "pairedval/annotation.hpp"

namespace testing {

using namespace pairedval;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
    }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }

    BoundingBox box(std::int64_t w, std::int64_t h) {
        const std::int64_t x0 = integer(0, w - 2);
        const std::int64_t y0 = integer(0, h - 2);
        return {x0, y0, integer(x0 + 1, w), integer(y0 + 1, h)};
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline ToothRegion rect_tooth(std::string id, double x0, double y0, double x1, double y1) {
    return {std::move(id), {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

inline Annotation ann(AnomalyType type, BoundingBox box, int confidence, Arm arm, bool ai = false) {
    Annotation a;
    a.anomaly = type;
    a.box = box;
    a.confidence = ConfidenceLabel{confidence};
    a.arm = arm;
    a.reader_id = "R1";
    a.ai_origin = ai;
    return a;
}

inline GroundTruthBox gt(AnomalyType type, BoundingBox box) { return {type, box}; }

// Two rectangular teeth side by side on a 200 x 100 image with a gap at x in [95, 105).
inline ImageRecord two_teeth_image(std::string id = "img") {
    ImageRecord im;
    im.image_id = std::move(id);
    im.width = 200;
    im.height = 100;
    im.teeth = {rect_tooth("11", 0, 0, 95, 100), rect_tooth("12", 105, 0, 200, 100)};
    im.ground_truth = std::vector<GroundTruthBox>{};
    return im;
}

}  // namespace testing

#include "pairedval/counts_io.hpp"

namespace testing {

// One single-tooth image per tooth; for every anomaly the tooth's (control,
// study) labels follow the matched-sample tables, positives first.
inline StudyDataset dataset_from_counts(const std::vector<AnomalyCounts>& counts, int confidence = 60) {
    std::int64_t n_teeth = 0;
    for (const AnomalyCounts& c : counts) n_teeth = std::max(n_teeth, c.sens.total() + c.spec.total());
    StudyDataset ds;
    for (std::int64_t i = 0; i < n_teeth; ++i) {
        ImageRecord im;
        im.image_id = "img" + std::to_string(i);
        im.width = 100;
        im.height = 100;
        im.teeth = {rect_tooth("t", 0, 0, 100, 100)};
        im.ground_truth = std::vector<GroundTruthBox>{};
        ds.images.push_back(std::move(im));
    }
    for (const AnomalyCounts& c : counts) {
        const auto k = static_cast<std::int64_t>(c.anomaly);
        const BoundingBox box{5 + 15 * k, 10, 15 + 15 * k, 40};
        std::int64_t i = 0;
        // (control detected, study detected) per block.
        auto fill = [&](std::int64_t n, bool positive, bool det_c, bool det_s) {
            for (std::int64_t j = 0; j < n; ++j, ++i) {
                ImageRecord& im = ds.images[static_cast<std::size_t>(i)];
                if (positive) im.ground_truth->push_back({c.anomaly, box});
                if (det_c) im.control_annotations.push_back(ann(c.anomaly, box, confidence, Arm::control));
                if (det_s) im.study_annotations.push_back(ann(c.anomaly, box, confidence, Arm::study, true));
            }
        };
        fill(c.sens.good, true, true, true);
        fill(c.sens.profit, true, false, true);
        fill(c.sens.loss, true, true, false);
        fill(c.sens.bad, true, false, false);
        fill(c.spec.good, false, false, false);
        fill(c.spec.profit, false, true, false);
        fill(c.spec.loss, false, false, true);
        fill(c.spec.bad, false, true, true);
    }
    return ds;
}

}  // namespace testing
