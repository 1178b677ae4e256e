#include "pairedval/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "pairedval/error.hpp"
#include "pairedval/geometry.hpp"

namespace pairedval {

std::string_view to_string(ClassLabel label) {
    switch (label) {
        case ClassLabel::TP: return "TP";
        case ClassLabel::FP: return "FP";
        case ClassLabel::TN: return "TN";
        case ClassLabel::FN: return "FN";
    }
    return "?";
}

std::string_view to_string(Endpoint endpoint) {
    return endpoint == Endpoint::sensitivity ? "sensitivity" : "specificity";
}

MatchResult match_instances(std::span<const Annotation> candidates,
                            std::span<const GroundTruthBox> references, double min_dice) {
    std::vector<InstancePair> edges;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (std::size_t r = 0; r < references.size(); ++r) {
            if (candidates[c].anomaly != references[r].anomaly) continue;
            const double d = dice(candidates[c].box, references[r].box);
            if (d > 0.0 && d >= min_dice) edges.push_back({c, r, d});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const InstancePair& a, const InstancePair& b) {
        if (a.dice != b.dice) return a.dice > b.dice;
        return std::tie(a.candidate, a.reference) < std::tie(b.candidate, b.reference);
    });

    std::vector<bool> cand_used(candidates.size(), false);
    std::vector<bool> ref_used(references.size(), false);
    MatchResult result;
    for (const InstancePair& e : edges) {
        if (cand_used[e.candidate] || ref_used[e.reference]) continue;
        cand_used[e.candidate] = true;
        ref_used[e.reference] = true;
        result.pairs.push_back(e);
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (!cand_used[c]) result.unmatched_candidates.push_back(c);
    }
    for (std::size_t r = 0; r < references.size(); ++r) {
        if (!ref_used[r]) result.unmatched_references.push_back(r);
    }
    return result;
}

namespace {

struct VoteNode {
    std::size_t expert;
    std::size_t index;
    const BoundingBox* box;
};

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), experts_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    unsigned& experts(std::size_t root) { return experts_[root]; }

    // Joins two clusters unless they already share an expert.
    bool try_merge(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b || (experts_[a] & experts_[b]) != 0) return false;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        experts_[a] |= experts_[b];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> experts_;
};

std::int64_t rounded_mean(std::int64_t sum, std::size_t count) {
    return static_cast<std::int64_t>(
        std::llround(static_cast<double>(sum) / static_cast<double>(count)));
}

}  // namespace

std::vector<GroundTruthBox> majority_vote_ground_truth(
    std::span<const std::vector<Annotation>> expert_sets, double min_dice) {
    std::vector<GroundTruthBox> out;
    for (AnomalyType type : kAllAnomalies) {
        std::vector<VoteNode> nodes;
        for (std::size_t e = 0; e < expert_sets.size(); ++e) {
            for (std::size_t i = 0; i < expert_sets[e].size(); ++i) {
                if (expert_sets[e][i].anomaly == type) nodes.push_back({e, i, &expert_sets[e][i].box});
            }
        }
        if (nodes.size() < 2) continue;

        struct Edge {
            double dice;
            std::size_t a;
            std::size_t b;
        };
        std::vector<Edge> edges;
        for (std::size_t a = 0; a < nodes.size(); ++a) {
            for (std::size_t b = a + 1; b < nodes.size(); ++b) {
                if (nodes[a].expert == nodes[b].expert) continue;
                const double d = dice(*nodes[a].box, *nodes[b].box);
                if (d > 0.0 && d >= min_dice) edges.push_back({d, a, b});
            }
        }
        std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
            if (x.dice != y.dice) return x.dice > y.dice;
            return std::tie(x.a, x.b) < std::tie(y.a, y.b);
        });

        DisjointSets sets(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) sets.experts(i) = 1u << nodes[i].expert;
        for (const Edge& e : edges) sets.try_merge(e.a, e.b);

        // Roots are the smallest member index, so iterating in node order is deterministic.
        std::map<std::size_t, std::vector<std::size_t>> clusters;
        for (std::size_t i = 0; i < nodes.size(); ++i) clusters[sets.find(i)].push_back(i);
        for (const auto& [root, members] : clusters) {
            if (std::popcount(sets.experts(root)) < 2) continue;
            std::int64_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
            for (std::size_t m : members) {
                x0 += nodes[m].box->x_min;
                y0 += nodes[m].box->y_min;
                x1 += nodes[m].box->x_max;
                y1 += nodes[m].box->y_max;
            }
            const std::size_t k = members.size();
            out.push_back({type,
                           {rounded_mean(x0, k), rounded_mean(y0, k), rounded_mean(x1, k),
                            rounded_mean(y1, k)}});
        }
    }
    return out;
}

std::vector<GroundTruthBox> resolve_ground_truth(const ImageRecord& image, double min_dice) {
    if (image.ground_truth) return *image.ground_truth;
    if (image.expert_sets) return majority_vote_ground_truth(*image.expert_sets, min_dice);
    return {};
}

std::vector<std::string> assign_to_teeth(const BoundingBox& box, std::span<const ToothRegion> teeth) {
    if (teeth.empty()) throw Error("no regions");
    std::vector<std::string> hits;
    for (const ToothRegion& tooth : teeth) {
        if (geometry::overlap_area(tooth.polygon, box) > 1e-9) hits.push_back(tooth.tooth_id);
    }
    if (!hits.empty()) return hits;

    const double cx = 0.5 * static_cast<double>(box.x_min + box.x_max);
    const double cy = 0.5 * static_cast<double>(box.y_min + box.y_max);
    double best = std::numeric_limits<double>::infinity();
    const ToothRegion* nearest = &teeth.front();
    for (const ToothRegion& tooth : teeth) {
        const Point c = geometry::centroid(tooth.polygon);
        const double d = std::hypot(c.x - cx, c.y - cy);
        if (d < best) {
            best = d;
            nearest = &tooth;
        }
    }
    return {nearest->tooth_id};
}

namespace {

void check_threshold(ConfidenceLabel threshold) {
    if (!threshold.is_valid() || threshold.value < 10) {
        throw Error(fmt::format("threshold {} not in {{10, 20, ..., 100}}", threshold.value));
    }
}

}  // namespace

std::vector<ToothClassification> classify_teeth(const ImageRecord& image, Arm arm,
                                                AnomalyType anomaly, ConfidenceLabel threshold,
                                                double min_dice) {
    check_threshold(threshold);

    std::vector<GroundTruthBox> references;
    for (const GroundTruthBox& g : resolve_ground_truth(image, min_dice)) {
        if (g.anomaly == anomaly) references.push_back(g);
    }
    std::vector<Annotation> candidates;
    for (const Annotation& a : image.annotations(arm)) {
        if (a.anomaly == anomaly && passes_threshold(a.confidence, threshold)) candidates.push_back(a);
    }
    const MatchResult match = match_instances(candidates, references, min_dice);

    struct Flags {
        bool tp = false;
        bool fp = false;
        bool fn = false;
    };
    std::map<std::string, Flags> flags;
    for (const ToothRegion& t : image.teeth) flags[t.tooth_id];

    for (const InstancePair& p : match.pairs) {
        for (const auto& id : assign_to_teeth(references[p.reference].box, image.teeth)) flags[id].tp = true;
    }
    for (std::size_t r : match.unmatched_references) {
        for (const auto& id : assign_to_teeth(references[r].box, image.teeth)) flags[id].fn = true;
    }
    for (std::size_t c : match.unmatched_candidates) {
        for (const auto& id : assign_to_teeth(candidates[c].box, image.teeth)) flags[id].fp = true;
    }

    std::vector<ToothClassification> out;
    out.reserve(image.teeth.size());
    for (const ToothRegion& t : image.teeth) {
        const Flags& f = flags[t.tooth_id];
        ClassLabel label = ClassLabel::TN;
        if (f.fn) {
            label = ClassLabel::FN;
        } else if (f.tp) {
            label = ClassLabel::TP;
        } else if (f.fp) {
            label = ClassLabel::FP;
        }
        out.push_back({image.image_id, t.tooth_id, anomaly, arm, label, threshold});
    }
    return out;
}

std::vector<ToothClassification> classify_dataset(const StudyDataset& dataset, Arm arm,
                                                  AnomalyType anomaly, ConfidenceLabel threshold,
                                                  double min_dice) {
    std::vector<ToothClassification> out;
    out.reserve(dataset.tooth_count());
    for (const ImageRecord& image : dataset.images) {
        auto labels = classify_teeth(image, arm, anomaly, threshold, min_dice);
        out.insert(out.end(), std::make_move_iterator(labels.begin()),
                   std::make_move_iterator(labels.end()));
    }
    return out;
}

DecisionMatrix tally(std::span<const ToothClassification> labels, AnomalyType anomaly, Arm arm) {
    DecisionMatrix dm{anomaly, arm};
    for (const ToothClassification& t : labels) {
        if (t.anomaly != anomaly || t.arm != arm) continue;
        switch (t.label) {
            case ClassLabel::TP: ++dm.tp; break;
            case ClassLabel::FP: ++dm.fp; break;
            case ClassLabel::TN: ++dm.tn; break;
            case ClassLabel::FN: ++dm.fn; break;
        }
    }
    return dm;
}

DecisionMatrix tally(const StudyDataset& dataset, Arm arm, AnomalyType anomaly,
                     ConfidenceLabel threshold, double min_dice) {
    const auto labels = classify_dataset(dataset, arm, anomaly, threshold, min_dice);
    return tally(labels, anomaly, arm);
}

namespace {

bool is_positive(ClassLabel l) { return l == ClassLabel::TP || l == ClassLabel::FN; }

}  // namespace

MatchedSampleTable matched_samples(std::span<const ToothClassification> control,
                                   std::span<const ToothClassification> study, AnomalyType anomaly,
                                   Endpoint endpoint) {
    using Key = std::pair<std::string, std::string>;
    std::map<Key, ClassLabel> control_labels;
    for (const auto& t : control) {
        if (t.anomaly != anomaly) continue;
        if (!control_labels.emplace(Key{t.image_id, t.tooth_id}, t.label).second) {
            throw Error(fmt::format("unpaired data: duplicate control tooth {}/{}", t.image_id, t.tooth_id));
        }
    }

    MatchedSampleTable table{anomaly, endpoint};
    std::size_t joined = 0;
    for (const auto& t : study) {
        if (t.anomaly != anomaly) continue;
        auto it = control_labels.find(Key{t.image_id, t.tooth_id});
        if (it == control_labels.end()) {
            throw Error(fmt::format("unpaired data: study tooth {}/{} has no control label", t.image_id,
                                    t.tooth_id));
        }
        ++joined;
        const ClassLabel c = it->second;
        const ClassLabel s = t.label;
        if (is_positive(c) != is_positive(s)) {
            throw Error(fmt::format("unpaired data: ground truth differs between arms on {}/{}",
                                    t.image_id, t.tooth_id));
        }
        if (endpoint == Endpoint::sensitivity) {
            if (!is_positive(c)) continue;
            if (c == ClassLabel::TP && s == ClassLabel::TP) ++table.good;
            else if (c == ClassLabel::FN && s == ClassLabel::TP) ++table.profit;
            else if (c == ClassLabel::TP && s == ClassLabel::FN) ++table.loss;
            else ++table.bad;
        } else {
            if (is_positive(c)) continue;
            if (c == ClassLabel::TN && s == ClassLabel::TN) ++table.good;
            else if (c == ClassLabel::FP && s == ClassLabel::TN) ++table.profit;
            else if (c == ClassLabel::TN && s == ClassLabel::FP) ++table.loss;
            else ++table.bad;
        }
    }
    if (joined != control_labels.size()) {
        throw Error("unpaired data: control and study cover different teeth");
    }
    return table;
}

MatchedSampleTable matched_samples(const StudyDataset& dataset, AnomalyType anomaly,
                                   Endpoint endpoint, ConfidenceLabel threshold, double min_dice) {
    const auto control = classify_dataset(dataset, Arm::control, anomaly, threshold, min_dice);
    const auto study = classify_dataset(dataset, Arm::study, anomaly, threshold, min_dice);
    return matched_samples(control, study, anomaly, endpoint);
}

bool margins_consistent(const MatchedSampleTable& t, const DecisionMatrix& c, const DecisionMatrix& s) {
    if (t.endpoint == Endpoint::sensitivity) {
        return t.good + t.loss == c.tp && t.bad + t.profit == c.fn && t.good + t.profit == s.tp &&
               t.bad + t.loss == s.fn;
    }
    return t.good + t.loss == c.tn && t.bad + t.profit == c.fp && t.good + t.profit == s.tn &&
           t.bad + t.loss == s.fp;
}

}  // namespace pairedval
