#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pairedval/matching.hpp"
#include "test_support.hpp"

namespace testing {

// Rule-by-rule labelling of rectangular teeth, written independently of the
// library: iterative arg-max matching, integer overlap, nearest centre.
inline std::vector<ClassLabel> oracle_labels(const std::vector<BoundingBox>& teeth, const std::vector<GroundTruthBox>& all_gt,
                                      const std::vector<Annotation>& all_ann, AnomalyType type, int threshold,
                                      double min_dice) {
    std::vector<BoundingBox> refs, cands;
    for (const auto& g : all_gt) {
        if (g.anomaly == type) refs.push_back(g.box);
    }
    for (const auto& a : all_ann) {
        if (a.anomaly == type && a.confidence.value >= threshold) cands.push_back(a.box);
    }
    std::vector<bool> c_used(cands.size()), r_used(refs.size());
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    while (true) {
        double best = -1.0;
        std::size_t bc = 0, br = 0;
        for (std::size_t c = 0; c < cands.size(); ++c) {
            for (std::size_t r = 0; r < refs.size(); ++r) {
                if (c_used[c] || r_used[r]) continue;
                const double d = dice(cands[c], refs[r]);
                if (d >= min_dice && d > best) {
                    best = d;
                    bc = c;
                    br = r;
                }
            }
        }
        if (best < 0.0) break;
        c_used[bc] = r_used[br] = true;
        pairs.push_back({bc, br});
    }

    auto teeth_of = [&](const BoundingBox& b) {
        std::vector<std::size_t> hit;
        for (std::size_t t = 0; t < teeth.size(); ++t) {
            if (intersection_area(teeth[t], b) > 0) hit.push_back(t);
        }
        if (!hit.empty()) return hit;
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t t = 0; t < teeth.size(); ++t) {
            const double dx = 0.5 * double(teeth[t].x_min + teeth[t].x_max - b.x_min - b.x_max);
            const double dy = 0.5 * double(teeth[t].y_min + teeth[t].y_max - b.y_min - b.y_max);
            const double d = dx * dx + dy * dy;
            if (d < best) {
                best = d;
                arg = t;
            }
        }
        return std::vector<std::size_t>{arg};
    };

    std::vector<bool> fn(teeth.size()), tp(teeth.size()), fp(teeth.size());
    for (auto [c, r] : pairs) {
        for (auto t : teeth_of(refs[r])) tp[t] = true;
    }
    for (std::size_t r = 0; r < refs.size(); ++r) {
        if (!r_used[r]) {
            for (auto t : teeth_of(refs[r])) fn[t] = true;
        }
    }
    for (std::size_t c = 0; c < cands.size(); ++c) {
        if (!c_used[c]) {
            for (auto t : teeth_of(cands[c])) fp[t] = true;
        }
    }
    std::vector<ClassLabel> out;
    for (std::size_t t = 0; t < teeth.size(); ++t) {
        out.push_back(fn[t] ? ClassLabel::FN : tp[t] ? ClassLabel::TP : fp[t] ? ClassLabel::FP : ClassLabel::TN);
    }
    return out;
}

inline BoundingBox jitter(Gen& g, BoundingBox b, std::int64_t w, std::int64_t h) {
    b.x_min = std::clamp<std::int64_t>(b.x_min + g.integer(-2, 2), 0, w - 1);
    b.y_min = std::clamp<std::int64_t>(b.y_min + g.integer(-2, 2), 0, h - 1);
    b.x_max = std::clamp<std::int64_t>(b.x_max + g.integer(-2, 2), b.x_min + 1, w);
    b.y_max = std::clamp<std::int64_t>(b.y_max + g.integer(-2, 2), b.y_min + 1, h);
    return b;
}

// Up to 3 rectangular teeth with gaps on a 40 x 12 image, up to 4 boxes.
inline ImageRecord micro_image(Gen& g, std::vector<BoundingBox>& teeth) {
    ImageRecord im;
    im.image_id = "m";
    im.width = 40;
    im.height = 12;
    const auto n_teeth = g.integer(1, 3);
    teeth.clear();
    std::int64_t x = g.integer(0, 3);
    for (std::int64_t t = 0; t < n_teeth && x < 38; ++t) {
        const std::int64_t x1 = std::min<std::int64_t>(40, x + g.integer(4, 14));
        teeth.push_back({x, g.integer(0, 2), x1, g.integer(9, 12)});
        im.teeth.push_back(testing::rect_tooth(std::to_string(t), double(teeth.back().x_min),
                                               double(teeth.back().y_min), double(teeth.back().x_max),
                                               double(teeth.back().y_max)));
        x = x1 + g.integer(0, 4);
    }
    im.ground_truth = std::vector<GroundTruthBox>{};
    const auto n_boxes = g.integer(0, 4);
    for (std::int64_t i = 0; i < n_boxes; ++i) {
        const AnomalyType type = g.coin() ? AnomalyType::caries : AnomalyType::calculus;
        const bool is_gt = g.coin(0.45);
        if (is_gt || im.ground_truth->empty() || g.coin(0.4)) {
            const BoundingBox b = g.box(40, 12);
            if (is_gt) {
                im.ground_truth->push_back(gt(type, b));
            } else {
                im.control_annotations.push_back(ann(type, b, int(g.integer(1, 10)) * 10, Arm::control));
            }
        } else {
            const auto& ref = (*im.ground_truth)[std::size_t(g.integer(0, std::int64_t(im.ground_truth->size()) - 1))];
            im.control_annotations.push_back(ann(g.coin(0.8) ? ref.anomaly : type, jitter(g, ref.box, 40, 12),
                                                 int(g.integer(1, 10)) * 10, Arm::control));
        }
    }
    return im;
}

// Direct summation in long double with log-space binomial coefficients.
inline long double oracle_pmf(std::int64_t k, std::int64_t n, long double p) {
    if (p == 0.0L) return k == 0 ? 1.0L : 0.0L;
    if (p == 1.0L) return k == n ? 1.0L : 0.0L;
    const long double lc = std::lgamma((long double)n + 1) - std::lgamma((long double)k + 1) -
                           std::lgamma((long double)(n - k) + 1);
    return std::exp(lc + (long double)k * std::log(p) + (long double)(n - k) * std::log1p(-p));
}

inline long double oracle_sf(std::int64_t x, std::int64_t n, long double p) {
    long double s = 0.0L;
    for (std::int64_t k = x; k <= n; ++k) s += oracle_pmf(k, n, p);
    return s;
}

inline long double oracle_cdf(std::int64_t x, std::int64_t n, long double p) {
    long double s = 0.0L;
    for (std::int64_t k = 0; k < x && k <= n; ++k) s += oracle_pmf(k, n, p);
    return s;
}

}  // namespace testing
