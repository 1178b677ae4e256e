#include "pairedval/fixture.hpp"

#include <charconv>

#include <fmt/format.h>

#include "pairedval/error.hpp"

namespace pairedval {

namespace {

struct Row {
    AnomalyType anomaly;
    std::int64_t control[4];  // tn, fn, fp, tp
    std::int64_t study[4];
    std::int64_t sens[4];     // good, profit, loss, bad
    std::int64_t spec[4];
    double auc_control;
    double auc_study;
};

constexpr Row kRows[] = {
    {AnomalyType::caries, {1123, 54, 64, 105}, {1106, 24, 81, 135}, {102, 33, 3, 21}, {1066, 40, 57, 24}, 0.65, 0.84},
    {AnomalyType::apical_lesion, {1275, 16, 17, 38}, {1256, 5, 36, 49}, {37, 12, 1, 4}, {1247, 9, 28, 8}, 0.70, 0.92},
    {AnomalyType::root_canal_defect, {1304, 9, 11, 22}, {1297, 2, 18, 29}, {22, 7, 0, 2}, {1295, 2, 9, 9}, 0.71, 0.93},
    {AnomalyType::marginal_defect, {1153, 109, 30, 54}, {1147, 44, 36, 119}, {51, 68, 3, 41}, {1125, 22, 28, 8}, 0.33, 0.80},
    {AnomalyType::bone_loss, {791, 114, 219, 222}, {725, 30, 285, 306}, {212, 94, 10, 20}, {627, 98, 164, 121}, 0.60, 0.84},
    {AnomalyType::calculus, {1181, 62, 18, 85}, {1179, 26, 20, 121}, {72, 49, 13, 13}, {1167, 12, 14, 6}, 0.58, 0.82},
};

DecisionMatrix matrix(AnomalyType a, Arm arm, const std::int64_t (&v)[4]) {
    return {a, arm, v[3], v[2], v[0], v[1]};
}

MatchedSampleTable table(AnomalyType a, Endpoint e, const std::int64_t (&v)[4]) {
    return {a, e, v[0], v[1], v[2], v[3]};
}

constexpr PrintedCell kPrinted[] = {
    {"endpoints", "caries", "sens_c", 66.0, 0.05},
    {"endpoints", "caries", "sens_s", 84.9, 0.05},
    {"endpoints", "caries", "sens_c_lo", 58.7, 0.1},
    {"endpoints", "caries", "sens_c_hi", 73.4, 0.1},
    {"endpoints", "caries", "sens_s_lo", 79.3, 0.1},
    {"endpoints", "caries", "sens_s_hi", 90.5, 0.1},
    {"endpoints", "caries", "spec_c", 94.6, 0.05},
    {"endpoints", "caries", "spec_s", 93.2, 0.05},
    {"endpoints", "caries", "spec_c_lo", 93.3, 0.1},
    {"endpoints", "caries", "spec_c_hi", 95.9, 0.1},
    {"endpoints", "caries", "spec_s_lo", 91.7, 0.1},
    {"endpoints", "caries", "spec_s_hi", 94.6, 0.1},
    {"endpoints", "apical_lesion", "sens_c", 70.4, 0.05},
    {"endpoints", "apical_lesion", "sens_s", 90.7, 0.05},
    {"endpoints", "apical_lesion", "sens_c_lo", 58.2, 0.1},
    {"endpoints", "apical_lesion", "sens_c_hi", 82.5, 0.1},
    {"endpoints", "apical_lesion", "sens_s_lo", 83.0, 0.1},
    {"endpoints", "apical_lesion", "sens_s_hi", 98.5, 0.1},
    {"endpoints", "apical_lesion", "spec_c", 98.7, 0.05},
    {"endpoints", "apical_lesion", "spec_s", 97.2, 0.05},
    {"endpoints", "apical_lesion", "spec_c_lo", 98.1, 0.1},
    {"endpoints", "apical_lesion", "spec_c_hi", 99.3, 0.1},
    {"endpoints", "apical_lesion", "spec_s_lo", 96.3, 0.1},
    {"endpoints", "apical_lesion", "spec_s_hi", 98.1, 0.1},
    {"endpoints", "root_canal_defect", "sens_c", 71.0, 0.05},
    {"endpoints", "root_canal_defect", "sens_s", 93.5, 0.05},
    {"endpoints", "root_canal_defect", "sens_c_lo", 55.0, 0.1},
    {"endpoints", "root_canal_defect", "sens_c_hi", 86.9, 0.1},
    {"endpoints", "root_canal_defect", "sens_s_lo", 84.9, 0.1},
    {"endpoints", "root_canal_defect", "sens_s_hi", 100, 0.1},
    {"endpoints", "root_canal_defect", "spec_c", 99.2, 0.05},
    {"endpoints", "root_canal_defect", "spec_s", 98.6, 0.05},
    {"endpoints", "root_canal_defect", "spec_c_lo", 98.7, 0.1},
    {"endpoints", "root_canal_defect", "spec_c_hi", 99.7, 0.1},
    {"endpoints", "root_canal_defect", "spec_s_lo", 98.0, 0.1},
    {"endpoints", "root_canal_defect", "spec_s_hi", 99.3, 0.1},
    {"endpoints", "marginal_defect", "sens_c", 33.1, 0.05},
    {"endpoints", "marginal_defect", "sens_s", 73.0, 0.05},
    {"endpoints", "marginal_defect", "sens_c_lo", 25.9, 0.1},
    {"endpoints", "marginal_defect", "sens_c_hi", 40.4, 0.1},
    {"endpoints", "marginal_defect", "sens_s_lo", 66.2, 0.1},
    {"endpoints", "marginal_defect", "sens_s_hi", 79.8, 0.1},
    {"endpoints", "marginal_defect", "spec_c", 97.5, 0.05},
    {"endpoints", "marginal_defect", "spec_s", 97.0, 0.05},
    {"endpoints", "marginal_defect", "spec_c_lo", 96.6, 0.1},
    {"endpoints", "marginal_defect", "spec_c_hi", 98.4, 0.1},
    {"endpoints", "marginal_defect", "spec_s_lo", 96.0, 0.1},
    {"endpoints", "marginal_defect", "spec_s_hi", 97.9, 0.1},
    {"endpoints", "bone_loss", "sens_c", 66.1, 0.05},
    {"endpoints", "bone_loss", "sens_s", 91.1, 0.05},
    {"endpoints", "bone_loss", "sens_c_lo", 61.0, 0.1},
    {"endpoints", "bone_loss", "sens_c_hi", 71.1, 0.1},
    {"endpoints", "bone_loss", "sens_s_lo", 88.0, 0.1},
    {"endpoints", "bone_loss", "sens_s_hi", 94.1, 0.1},
    {"endpoints", "bone_loss", "spec_c", 78.3, 0.05},
    {"endpoints", "bone_loss", "spec_s", 71.8, 0.05},
    {"endpoints", "bone_loss", "spec_c_lo", 75.8, 0.1},
    {"endpoints", "bone_loss", "spec_c_hi", 80.9, 0.1},
    {"endpoints", "bone_loss", "spec_s_lo", 69.0, 0.1},
    {"endpoints", "bone_loss", "spec_s_hi", 74.6, 0.1},
    {"endpoints", "calculus", "sens_c", 57.8, 0.05},
    {"endpoints", "calculus", "sens_s", 82.3, 0.05},
    {"endpoints", "calculus", "sens_c_lo", 49.8, 0.1},
    {"endpoints", "calculus", "sens_c_hi", 65.8, 0.1},
    {"endpoints", "calculus", "sens_s_lo", 76.1, 0.1},
    {"endpoints", "calculus", "sens_s_hi", 88.5, 0.1},
    {"endpoints", "calculus", "spec_c", 98.5, 0.05},
    {"endpoints", "calculus", "spec_s", 98.3, 0.05},
    {"endpoints", "calculus", "spec_c_lo", 97.8, 0.1},
    {"endpoints", "calculus", "spec_c_hi", 99.2, 0.1},
    {"endpoints", "calculus", "spec_s_lo", 97.6, 0.1},
    {"endpoints", "calculus", "spec_s_hi", 99.1, 0.1},
    {"endpoints", "average", "sens_c", 60.7, 0.05},
    {"endpoints", "average", "sens_s", 85.9, 0.05},
    {"endpoints", "average", "sens_c_lo", 51.4, 0.1},
    {"endpoints", "average", "sens_c_hi", 70.0, 0.1},
    {"endpoints", "average", "sens_s_lo", 79.6, 0.1},
    {"endpoints", "average", "sens_s_hi", 91.9, 0.1},
    {"endpoints", "average", "spec_c", 94.5, 0.05},
    {"endpoints", "average", "spec_s", 92.7, 0.05},
    {"endpoints", "average", "spec_c_lo", 93.4, 0.1},
    {"endpoints", "average", "spec_c_hi", 95.5, 0.1},
    {"endpoints", "average", "spec_s_lo", 91.4, 0.1},
    {"endpoints", "average", "spec_s_hi", 93.9, 0.1},
    {"sens_tests", "caries", "chi2", 23.4, 0.05},
    {"sens_tests", "caries", "s_chi2", 0.0, 0.02},
    {"sens_tests", "caries", "s_x", 0.0, 0.02},
    {"sens_tests", "caries", "x_alpha", 23, 0},
    {"sens_tests", "caries", "e_II", 0.0, 0.1},
    {"sens_tests", "caries", "power", 100, 0.1},
    {"sens_tests", "apical_lesion", "chi2", 7.7, 0.05},
    {"sens_tests", "apical_lesion", "s_chi2", 0.28, 0.02},
    {"sens_tests", "apical_lesion", "s_x", 0.17, 0.02},
    {"sens_tests", "apical_lesion", "x_alpha", 10, 0},
    {"sens_tests", "apical_lesion", "e_II", 1.4, 0.1},
    {"sens_tests", "apical_lesion", "power", 98.6, 0.1},
    {"sens_tests", "root_canal_defect", "chi2", 5.1, 0.05},
    {"sens_tests", "root_canal_defect", "s_chi2", 1.17, 0.02},
    {"sens_tests", "root_canal_defect", "s_x", 0.78, 0.02},
    {"sens_tests", "root_canal_defect", "x_alpha", 6, 0},
    {"sens_tests", "root_canal_defect", "e_II", 0.0, 0.1},
    {"sens_tests", "root_canal_defect", "power", 100, 0.1},
    {"sens_tests", "marginal_defect", "chi2", 57.7, 0.05},
    {"sens_tests", "marginal_defect", "s_chi2", 0.0, 0.02},
    {"sens_tests", "marginal_defect", "s_x", 0.0, 0.02},
    {"sens_tests", "marginal_defect", "x_alpha", 43, 0},
    {"sens_tests", "marginal_defect", "e_II", 0.0, 0.1},
    {"sens_tests", "marginal_defect", "power", 100, 0.1},
    {"sens_tests", "bone_loss", "chi2", 66.2, 0.05},
    {"sens_tests", "bone_loss", "s_chi2", 0.0, 0.02},
    {"sens_tests", "bone_loss", "s_x", 0.0, 0.02},
    {"sens_tests", "bone_loss", "x_alpha", 61, 0},
    {"sens_tests", "bone_loss", "e_II", 0.0, 0.1},
    {"sens_tests", "bone_loss", "power", 100, 0.1},
    {"sens_tests", "calculus", "chi2", 19.8, 0.05},
    {"sens_tests", "calculus", "s_chi2", 0.0, 0.02},
    {"sens_tests", "calculus", "s_x", 0.0, 0.02},
    {"sens_tests", "calculus", "x_alpha", 38, 0},
    {"sens_tests", "calculus", "e_II", 0.0, 0.1},
    {"sens_tests", "calculus", "power", 100, 0.1},
    {"spec_tests", "caries", "chi2", 2.6, 0.05},
    {"spec_tests", "caries", "s_chi2", 5.21, 0.02},
    {"spec_tests", "caries", "s_x", 5.19, 0.02},
    {"spec_tests", "caries", "x_alpha", 57, 0},
    {"spec_tests", "caries", "e_II", 45.7, 0.1},
    {"spec_tests", "caries", "power", 54.3, 0.1},
    {"spec_tests", "apical_lesion", "chi2", 8.8, 0.05},
    {"spec_tests", "apical_lesion", "s_chi2", 0.15, 0.02},
    {"spec_tests", "apical_lesion", "s_x", 0.13, 0.02},
    {"spec_tests", "apical_lesion", "x_alpha", 24, 0},
    {"spec_tests", "apical_lesion", "e_II", 4.7, 0.1},
    {"spec_tests", "apical_lesion", "power", 95.3, 0.1},
    {"spec_tests", "root_canal_defect", "chi2", 3.3, 0.05},
    {"spec_tests", "root_canal_defect", "s_chi2", 3.52, 0.02},
    {"spec_tests", "root_canal_defect", "s_x", 3.27, 0.02},
    {"spec_tests", "root_canal_defect", "x_alpha", 9, 0},
    {"spec_tests", "root_canal_defect", "e_II", 32.2, 0.1},
    {"spec_tests", "root_canal_defect", "power", 67.8, 0.1},
    {"spec_tests", "marginal_defect", "chi2", 0.5, 0.05},
    {"spec_tests", "marginal_defect", "s_chi2", 23.98, 0.02},
    {"spec_tests", "marginal_defect", "s_x", 23.99, 0.02},
    {"spec_tests", "marginal_defect", "x_alpha", 31, 0},
    {"spec_tests", "marginal_defect", "e_II", 76.1, 0.1},
    {"spec_tests", "marginal_defect", "power", 23.9, 0.1},
    {"spec_tests", "bone_loss", "chi2", 16.1, 0.05},
    {"spec_tests", "bone_loss", "s_chi2", 0.003, 0.02},
    {"spec_tests", "bone_loss", "s_x", 0.003, 0.02},
    {"spec_tests", "bone_loss", "x_alpha", 145, 0},
    {"spec_tests", "bone_loss", "e_II", 0.7, 0.1},
    {"spec_tests", "bone_loss", "power", 99.3, 0.1},
    {"spec_tests", "calculus", "chi2", 0.04, 0.05},
    {"spec_tests", "calculus", "s_chi2", 42.23, 0.02},
    {"spec_tests", "calculus", "s_x", 42.25, 0.02},
    {"spec_tests", "calculus", "x_alpha", 18, 0},
    {"spec_tests", "calculus", "e_II", 91.7, 0.1},
    {"spec_tests", "calculus", "power", 8.3, 0.1},
    {"auc", "caries", "a_c_lo", 0.60, 0.005},
    {"auc", "caries", "a_c_hi", 0.70, 0.005},
    {"auc", "caries", "a_s_lo", 0.80, 0.005},
    {"auc", "caries", "a_s_hi", 0.88, 0.005},
    {"auc", "apical_lesion", "a_c_lo", 0.62, 0.005},
    {"auc", "apical_lesion", "a_c_hi", 0.78, 0.005},
    {"auc", "apical_lesion", "a_s_lo", 0.87, 0.005},
    {"auc", "apical_lesion", "a_s_hi", 0.97, 0.005},
    {"auc", "root_canal_defect", "a_c_lo", 0.60, 0.005},
    {"auc", "root_canal_defect", "a_c_hi", 0.81, 0.005},
    {"auc", "root_canal_defect", "a_s_lo", 0.87, 0.005},
    {"auc", "root_canal_defect", "a_s_hi", 0.99, 0.005},
    {"auc", "marginal_defect", "a_c_lo", 0.29, 0.005},
    {"auc", "marginal_defect", "a_c_hi", 0.37, 0.005},
    {"auc", "marginal_defect", "a_s_lo", 0.76, 0.005},
    {"auc", "marginal_defect", "a_s_hi", 0.85, 0.005},
    {"auc", "bone_loss", "a_c_lo", 0.57, 0.005},
    {"auc", "bone_loss", "a_c_hi", 0.64, 0.005},
    {"auc", "bone_loss", "a_s_lo", 0.81, 0.005},
    {"auc", "bone_loss", "a_s_hi", 0.87, 0.005},
    {"auc", "calculus", "a_c_lo", 0.53, 0.005},
    {"auc", "calculus", "a_c_hi", 0.63, 0.005},
    {"auc", "calculus", "a_s_lo", 0.78, 0.005},
    {"auc", "calculus", "a_s_hi", 0.87, 0.005},
    {"auc_diff", "caries", "z_hat", 9.6, 0.5},
    {"auc_diff", "apical_lesion", "z_hat", 7.3, 0.5},
    {"auc_diff", "root_canal_defect", "z_hat", 6.0, 0.5},
    {"auc_diff", "marginal_defect", "z_hat", 23.1, 0.5},
    {"auc_diff", "bone_loss", "z_hat", 12.9, 0.5},
    {"auc_diff", "calculus", "z_hat", 10.7, 0.5},
    {"auc_diff", "apical_lesion", "p", 1.4e-13, 1.0, ToleranceKind::log10},
    {"auc_diff", "root_canal_defect", "p", 1.1e-9, 1.0, ToleranceKind::log10},

};

}  // namespace

std::vector<AnomalyCounts> paper_fixture() {
    std::vector<AnomalyCounts> out;
    for (const Row& r : kRows) {
        AnomalyCounts c;
        c.anomaly = r.anomaly;
        c.control = matrix(r.anomaly, Arm::control, r.control);
        c.study = matrix(r.anomaly, Arm::study, r.study);
        c.sens = table(r.anomaly, Endpoint::sensitivity, r.sens);
        c.spec = table(r.anomaly, Endpoint::specificity, r.spec);
        c.auc_control = r.auc_control;
        c.auc_study = r.auc_study;
        out.push_back(c);
    }
    return out;
}

std::span<const PrintedCell> printed_cells() { return kPrinted; }

void perturb_counts(std::vector<AnomalyCounts>& counts, std::string_view spec) {
    const auto bad = [&](std::string_view why) {
        return Error(fmt::format("bad perturbation '{}': {}", spec, why));
    };
    const auto dot1 = spec.find('.');
    const auto dot2 = dot1 == std::string_view::npos ? dot1 : spec.find('.', dot1 + 1);
    if (dot2 == std::string_view::npos) throw bad("expected anomaly.part.field[+-]N");
    const auto anomaly = parse_anomaly(spec.substr(0, dot1));
    if (!anomaly) throw bad("unknown anomaly");
    const std::string_view part = spec.substr(dot1 + 1, dot2 - dot1 - 1);
    std::string_view field = spec.substr(dot2 + 1);
    std::int64_t delta = 1;
    if (const auto sign = field.find_first_of("+-"); sign != std::string_view::npos) {
        std::string_view num = field.substr(sign + 1);
        std::int64_t magnitude = 0;
        const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), magnitude);
        if (ec != std::errc{} || p != num.data() + num.size()) throw bad("offset is not an integer");
        delta = field[sign] == '-' ? -magnitude : magnitude;
        field = field.substr(0, sign);
    }

    AnomalyCounts* target = nullptr;
    for (AnomalyCounts& c : counts) {
        if (c.anomaly == *anomaly) target = &c;
    }
    if (!target) throw bad("anomaly not present");

    std::int64_t* cell = nullptr;
    if (part == "control" || part == "study") {
        DecisionMatrix& dm = part == "control" ? target->control : target->study;
        if (field == "tp") cell = &dm.tp;
        if (field == "fp") cell = &dm.fp;
        if (field == "tn") cell = &dm.tn;
        if (field == "fn") cell = &dm.fn;
    } else if (part == "sens" || part == "spec") {
        MatchedSampleTable& t = part == "sens" ? target->sens : target->spec;
        if (field == "good") cell = &t.good;
        if (field == "profit") cell = &t.profit;
        if (field == "loss") cell = &t.loss;
        if (field == "bad") cell = &t.bad;
    } else {
        throw bad("part must be control, study, sens or spec");
    }
    if (!cell) throw bad("unknown field");
    if (*cell + delta < 0) throw bad("count would become negative");
    *cell += delta;
}

}  // namespace pairedval
