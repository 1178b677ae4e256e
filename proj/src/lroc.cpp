#include "pairedval/lroc.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pairedval/distributions.hpp"
#include "pairedval/error.hpp"

namespace pairedval {

std::vector<CurvePoint> LrocCurve::polyline() const {
    std::vector<CurvePoint> out;
    out.reserve(points.size() + 2);
    out.push_back({0.0, 0.0});
    for (const OperatingPoint& p : points) out.push_back({p.fpr, p.sens});
    out.push_back({1.0, points.empty() ? 0.0 : points.back().sens});
    return out;
}

double trapezoid_auc(std::span<const CurvePoint> points) {
    double area = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const CurvePoint& p = points[i];
        if (!(p.fpr >= 0.0 && p.fpr <= 1.0)) throw Error("invalid curve: fpr outside [0, 1]");
        if (i == 0) continue;
        const CurvePoint& q = points[i - 1];
        if (p.fpr < q.fpr) {
            throw Error(fmt::format("invalid curve: fpr decreases at point {} ({} -> {})", i, q.fpr,
                                    p.fpr));
        }
        area += 0.5 * (p.fpr - q.fpr) * (p.sens + q.sens);
    }
    return area;
}

double trapezoid_auc(const LrocCurve& curve) {
    const std::vector<CurvePoint> poly = curve.polyline();
    return trapezoid_auc(poly);
}

LrocCurve lroc_from_counts(AnomalyType anomaly, Arm arm, std::span<const DecisionMatrix> counts) {
    if (counts.size() != kLrocThresholds.size()) {
        throw Error(fmt::format("expected {} operating points, got {}", kLrocThresholds.size(),
                                counts.size()));
    }
    LrocCurve curve;
    curve.anomaly = anomaly;
    curve.arm = arm;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const DecisionMatrix& dm = counts[i];
        if (dm.positives() == 0 || dm.negatives() == 0) {
            throw Error(fmt::format("undefined operating point for {} ({}): |P| = {}, |N| = {}",
                                    to_string(anomaly), to_string(arm), dm.positives(),
                                    dm.negatives()));
        }
        OperatingPoint op;
        op.threshold = ConfidenceLabel{kLrocThresholds[i]};
        op.counts = dm;
        op.sens = static_cast<double>(dm.tp) / static_cast<double>(dm.positives());
        op.fpr = static_cast<double>(dm.fp) / static_cast<double>(dm.negatives());
        curve.points.push_back(op);
    }
    curve.auc = trapezoid_auc(curve);
    return curve;
}

LrocCurve build_lroc(const StudyDataset& dataset, Arm arm, AnomalyType anomaly, double min_dice) {
    std::vector<DecisionMatrix> counts;
    counts.reserve(kLrocThresholds.size());
    for (int k : kLrocThresholds) {
        counts.push_back(tally(dataset, arm, anomaly, ConfidenceLabel{k}, min_dice));
    }
    return lroc_from_counts(anomaly, arm, counts);
}

AucStats auc_stats(double a, std::int64_t positives, std::int64_t negatives, double confidence) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error(fmt::format("auc must lie in [0, 1], got {}", a));
    if (positives < 2 || negatives < 2) {
        throw Error(fmt::format("auc_stats needs P, N >= 2 (P = {}, N = {})", positives, negatives));
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error(fmt::format("confidence must lie in (0, 1), got {}", confidence));
    }
    AucStats s;
    s.a = a;
    s.q1 = a / (2.0 - a);
    s.q2 = 2.0 * a * a / (1.0 + a);
    const double P = static_cast<double>(positives);
    const double N = static_cast<double>(negatives);
    const double var = (a * (1.0 - a) + (P - 1.0) * (s.q1 - a * a) + (N - 1.0) * (s.q2 - a * a)) /
                       (P * N);
    s.sigma = std::sqrt(std::max(0.0, var));
    const double z = dist::normal_quantile(0.5 * (1.0 + confidence));
    s.lo = std::clamp(a - z * s.sigma, 0.0, 1.0);
    s.hi = std::clamp(a + z * s.sigma, 0.0, 1.0);
    return s;
}

namespace {

double kendall(const MatchedSampleTable& t) {
    if (t.total() == 0) {
        throw Error(fmt::format("empty {} table for {}", to_string(t.endpoint), to_string(t.anomaly)));
    }
    return static_cast<double>(t.good + t.bad - t.profit - t.loss) / static_cast<double>(t.total());
}

}  // namespace

KendallCorrelations kendall_correlations(const MatchedSampleTable& sens_table,
                                         const MatchedSampleTable& spec_table) {
    return {kendall(sens_table), kendall(spec_table)};
}

double lookup_r(double r_P, double r_N, double a_c, double a_s) {
    const double r = CorrelationTable::interpolate(0.5 * (r_P + r_N), 0.5 * (a_c + a_s));
    return std::clamp(r, 0.0, std::max(0.0, std::max(r_P, r_N)));
}

AucComparison auc_difference_test(double a_c, double a_s, std::int64_t positives,
                                  std::int64_t negatives, const MatchedSampleTable& sens_table,
                                  const MatchedSampleTable& spec_table, const TestConfig& cfg,
                                  CorrelationMode mode) {
    cfg.validate();
    if (sens_table.anomaly != spec_table.anomaly) throw Error("matched-sample tables differ in anomaly");
    AucComparison c;
    c.a_c = a_c;
    c.a_s = a_s;
    const AucStats sc = auc_stats(a_c, positives, negatives, cfg.confidence);
    const AucStats ss = auc_stats(a_s, positives, negatives, cfg.confidence);
    c.sigma_c = sc.sigma;
    c.sigma_s = ss.sigma;
    const KendallCorrelations k = kendall_correlations(sens_table, spec_table);
    c.r_P = k.r_P;
    c.r_N = k.r_N;
    c.r = mode == CorrelationMode::table ? lookup_r(k.r_P, k.r_N, a_c, a_s) : 0.5 * (k.r_P + k.r_N);
    const double var = c.sigma_c * c.sigma_c + c.sigma_s * c.sigma_s - 2.0 * c.r * c.sigma_c * c.sigma_s;
    c.sigma_diff = std::sqrt(std::max(0.0, var));
    if (!(c.sigma_diff > 0.0)) {
        throw Error(fmt::format("degenerate comparison for {}: sigma of the difference is 0",
                                to_string(sens_table.anomaly)));
    }
    const double diff = a_s - a_c;
    c.z_hat = diff / c.sigma_diff;
    c.p_one_sided = dist::normal_sf(c.z_hat);
    const double z = dist::normal_quantile(0.5 * (1.0 + cfg.confidence));
    c.lo = diff - z * c.sigma_diff;
    c.hi = diff + z * c.sigma_diff;
    c.reject_H0 = c.z_hat > dist::normal_quantile(1.0 - cfg.alpha_I);
    return c;
}

AucComparison auc_difference_test(const LrocCurve& control, const LrocCurve& study,
                                  const MatchedSampleTable& sens_table,
                                  const MatchedSampleTable& spec_table, const TestConfig& cfg,
                                  CorrelationMode mode) {
    if (control.anomaly != study.anomaly) throw Error("curves differ in anomaly");
    if (control.positives() != study.positives() || control.negatives() != study.negatives()) {
        throw Error(fmt::format("unpaired data: control has P = {}, N = {}; study has P = {}, N = {}",
                                control.positives(), control.negatives(), study.positives(),
                                study.negatives()));
    }
    return auc_difference_test(control.auc, study.auc, control.positives(), control.negatives(),
                               sens_table, spec_table, cfg, mode);
}

std::string curves_to_csv(const LrocCurve& control, const LrocCurve& study) {
    std::string out = "arm,threshold,fpr,sens,tp,fp,tn,fn\n";
    for (const LrocCurve* c : {&control, &study}) {
        for (const OperatingPoint& p : c->points) {
            out += fmt::format("{},{},{:.6f},{:.6f},{},{},{},{}\n", to_string(c->arm),
                               p.threshold.value, p.fpr, p.sens, p.counts.tp, p.counts.fp,
                               p.counts.tn, p.counts.fn);
        }
    }
    return out;
}

std::string curves_to_svg(const LrocCurve& control, const LrocCurve& study) {
    constexpr double kSize = 400.0;
    constexpr double kMargin = 50.0;
    auto sx = [&](double v) { return kMargin + v * kSize; };
    auto sy = [&](double v) { return kMargin + (1.0 - v) * kSize; };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n",
        kSize + 2 * kMargin);
    out += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       sx(0.5), display_name(control.anomaly));
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        sx(0), sy(1), kSize, kSize);
    for (int i = 0; i <= 10; i += 2) {
        const double v = i / 10.0;
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.1f}</text>\n", sx(v),
                           sy(0) + 16, v);
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.1f}</text>\n", sx(0) - 6,
                           sy(v) + 4, v);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">false positive rate</text>\n",
                       sx(0.5), sy(0) + 36);
    out += fmt::format(
        "<text x=\"14\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {0})\">"
        "sensitivity</text>\n",
        sy(0.5));

    struct Style {
        const LrocCurve* curve;
        const char* colour;
    };
    int legend = 0;
    for (const Style& s : {Style{&control, "#1f77b4"}, Style{&study, "#d62728"}}) {
        std::string pts;
        for (const CurvePoint& p : s.curve->polyline()) {
            pts += fmt::format("{:.2f},{:.2f} ", sx(p.fpr), sy(p.sens));
        }
        out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           pts, s.colour);
        for (const OperatingPoint& p : s.curve->points) {
            out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", sx(p.fpr),
                               sy(p.sens), s.colour);
            out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"{}\">{}</text>\n", sx(p.fpr) + 5,
                               sy(p.sens) - 5, s.colour, p.threshold.value);
        }
        out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{} (AUC {:.2f})</text>\n", sx(0.55),
                           sy(0.15) + 16 * legend, s.colour, to_string(s.curve->arm), s.curve->auc);
        ++legend;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace pairedval
