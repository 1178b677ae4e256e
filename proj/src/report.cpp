#include "pairedval/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "pairedval/error.hpp"

namespace pairedval {

namespace {

bool endpoint_defined(const DecisionMatrix& dm) { return dm.positives() > 0 && dm.negatives() > 0; }

std::string pct(double v) { return fmt::format("{:.1f}", 100.0 * v); }

std::string chi2_text(double v) { return v < 0.1 ? fmt::format("{:.2f}", v) : fmt::format("{:.1f}", v); }

std::string_view endpoint_table(Endpoint e) { return e == Endpoint::sensitivity ? "sens_tests" : "spec_tests"; }

}  // namespace

std::string format_probability(double p) {
    if (p == 0.0) return "0.0";
    if (p < 1e-4) return fmt::format("{:.1e}", p);
    return fmt::format("{:.4f}", p);
}

std::string format_percent_probability(double p, bool clamp) {
    if (p == 0.0 || (clamp && p < 1e-6)) return "0.0";
    if (p < 1e-4) return fmt::format("{:.1e}", 100.0 * p);
    return fmt::format("{:.2f}", 100.0 * p);
}

Report build_report(std::span<const AnomalyCounts> counts, const TestConfig& cfg, CorrelationMode mode) {
    cfg.validate();
    Report rep;
    rep.cfg = cfg;
    rep.mode = mode;

    std::vector<const AnomalyCounts*> usable;
    for (AnomalyType a : kAllAnomalies) {
        const auto it = std::find_if(counts.begin(), counts.end(),
                                     [&](const AnomalyCounts& c) { return c.anomaly == a; });
        if (it == counts.end()) {
            rep.warnings.push_back(fmt::format("{}: no data, row omitted", to_string(a)));
            continue;
        }
        if (!endpoint_defined(it->control) || !endpoint_defined(it->study)) {
            rep.warnings.push_back(fmt::format(
                "{}: sensitivity or specificity undefined (|P| = {}, |N| = {}), row omitted",
                to_string(a), it->control.positives(), it->control.negatives()));
            continue;
        }
        if (!margins_consistent(it->sens, it->control, it->study) ||
            !margins_consistent(it->spec, it->control, it->study)) {
            rep.warnings.push_back(fmt::format(
                "{}: matched-sample tables do not match the decision-matrix margins", to_string(a)));
        }
        usable.push_back(&*it);
    }

    std::vector<DecisionPair> pairs;
    for (const AnomalyCounts* c : usable) pairs.push_back({c->control, c->study});
    rep.endpoints = endpoint_report(pairs, cfg);

    for (Endpoint e : {Endpoint::sensitivity, Endpoint::specificity}) {
        for (const AnomalyCounts* c : usable) {
            TestRow row;
            row.anomaly = c->anomaly;
            row.endpoint = e;
            row.table = e == Endpoint::sensitivity ? c->sens : c->spec;
            if (row.table.discordant() > 0) {
                row.mcnemar = mcnemar_test(row.table, cfg);
                row.binomial = binomial_test(row.table, cfg);
            } else {
                rep.warnings.push_back(fmt::format("{} {}: no discordant pairs, tests skipped",
                                                   to_string(c->anomaly), to_string(e)));
            }
            rep.tests.push_back(row);
        }
    }

    AucAverage avg;
    std::size_t n_diff = 0;
    for (const AnomalyCounts* c : usable) {
        if (!c->auc_control || !c->auc_study) continue;
        const std::int64_t P = c->control.positives();
        const std::int64_t N = c->control.negatives();
        if (P < 2 || N < 2) {
            rep.warnings.push_back(fmt::format("{}: AUC statistics need P, N >= 2", to_string(c->anomaly)));
            continue;
        }
        AucRow row;
        row.anomaly = c->anomaly;
        row.control = auc_stats(*c->auc_control, P, N, cfg.confidence);
        row.study = auc_stats(*c->auc_study, P, N, cfg.confidence);
        try {
            row.diff = auc_difference_test(*c->auc_control, *c->auc_study, P, N, c->sens, c->spec, cfg, mode);
            avg.diff_lo += row.diff->lo;
            avg.diff_hi += row.diff->hi;
            ++n_diff;
        } catch (const Error& e) {
            rep.warnings.push_back(fmt::format("{}: {}", to_string(c->anomaly), e.what()));
        }
        avg.a_c += row.control.a;
        avg.a_s += row.study.a;
        avg.c_lo += row.control.lo;
        avg.c_hi += row.control.hi;
        avg.s_lo += row.study.lo;
        avg.s_hi += row.study.hi;
        rep.aucs.push_back(row);
    }
    if (!rep.aucs.empty()) {
        const double k = static_cast<double>(rep.aucs.size());
        avg.a_c /= k;
        avg.a_s /= k;
        avg.c_lo /= k;
        avg.c_hi /= k;
        avg.s_lo /= k;
        avg.s_hi /= k;
        if (n_diff > 0) {
            avg.diff_lo /= static_cast<double>(n_diff);
            avg.diff_hi /= static_cast<double>(n_diff);
        }
        rep.auc_average = avg;
    }
    return rep;
}

std::vector<ReportCell> report_cells(const Report& rep) {
    std::vector<ReportCell> out;
    auto add = [&](std::string_view table, std::string_view row, std::string_view column, double v) {
        out.push_back({std::string(table), std::string(row), std::string(column), v});
    };
    auto endpoint_cells = [&](std::string_view row, const EndpointRow& r) {
        const std::pair<std::string_view, const EndpointResult*> parts[] = {
            {"sens_c", &r.sens_control}, {"sens_s", &r.sens_study},
            {"spec_c", &r.spec_control}, {"spec_s", &r.spec_study}};
        for (const auto& [name, e] : parts) {
            add("endpoints", row, name, 100.0 * e->estimate);
            add("endpoints", row, fmt::format("{}_lo", name), 100.0 * e->lo);
            add("endpoints", row, fmt::format("{}_hi", name), 100.0 * e->hi);
        }
    };
    for (const EndpointRow& r : rep.endpoints.rows) endpoint_cells(to_string(r.anomaly), r);
    if (!rep.endpoints.rows.empty()) endpoint_cells("average", rep.endpoints.average);

    for (const TestRow& t : rep.tests) {
        const std::string_view table = endpoint_table(t.endpoint);
        const std::string_view row = to_string(t.anomaly);
        add(table, row, "profit", static_cast<double>(t.table.profit));
        add(table, row, "loss", static_cast<double>(t.table.loss));
        if (!t.mcnemar || !t.binomial) continue;
        add(table, row, "chi2", t.mcnemar->chi2);
        add(table, row, "s_chi2", 100.0 * t.mcnemar->p_one_sided);
        add(table, row, "s_x", 100.0 * t.binomial->p_one_sided);
        add(table, row, "x_alpha", static_cast<double>(t.binomial->x_alpha));
        add(table, row, "e_II", 100.0 * t.binomial->e_II);
        add(table, row, "power", 100.0 * t.binomial->power);
    }

    for (const AucRow& a : rep.aucs) {
        const std::string_view row = to_string(a.anomaly);
        add("auc", row, "a_c", a.control.a);
        add("auc", row, "a_s", a.study.a);
        add("auc", row, "sigma_c", a.control.sigma);
        add("auc", row, "sigma_s", a.study.sigma);
        add("auc", row, "a_c_lo", a.control.lo);
        add("auc", row, "a_c_hi", a.control.hi);
        add("auc", row, "a_s_lo", a.study.lo);
        add("auc", row, "a_s_hi", a.study.hi);
        if (!a.diff) continue;
        add("auc_diff", row, "r_P", a.diff->r_P);
        add("auc_diff", row, "r_N", a.diff->r_N);
        add("auc_diff", row, "r", a.diff->r);
        add("auc_diff", row, "sigma_diff", a.diff->sigma_diff);
        add("auc_diff", row, "lo", a.diff->lo);
        add("auc_diff", row, "hi", a.diff->hi);
        add("auc_diff", row, "z_hat", a.diff->z_hat);
        add("auc_diff", row, "p", a.diff->p_one_sided);
    }
    if (rep.auc_average) {
        const AucAverage& v = *rep.auc_average;
        add("auc", "average", "a_c", v.a_c);
        add("auc", "average", "a_s", v.a_s);
        add("auc", "average", "a_c_lo", v.c_lo);
        add("auc", "average", "a_c_hi", v.c_hi);
        add("auc", "average", "a_s_lo", v.s_lo);
        add("auc", "average", "a_s_hi", v.s_hi);
        add("auc_diff", "average", "lo", v.diff_lo);
        add("auc_diff", "average", "hi", v.diff_hi);
    }
    return out;
}

std::string render_markdown(const Report& rep) {
    std::string out;
    out += fmt::format("Settings: alpha_I = {}, alpha_II = {}, confidence = {}, correlation = {}\n\n",
                       rep.cfg.alpha_I, rep.cfg.alpha_II, rep.cfg.confidence,
                       rep.mode == CorrelationMode::table ? "table" : "average");

    const int ci_pct = static_cast<int>(std::lround(100.0 * rep.cfg.confidence));
    out += fmt::format("## Sensitivity and specificity (%)\n\n"
                       "| Anomaly | sens c -> s | {0}% CI | spec c -> s | {0}% CI |\n"
                       "|---|---|---|---|---|\n",
                       ci_pct);
    auto endpoint_line = [&](std::string_view label, const EndpointRow& r) {
        out += fmt::format("| {} | {} -> {} | [{}, {}] -> [{}, {}] | {} -> {} | [{}, {}] -> [{}, {}] |\n", label,
                           pct(r.sens_control.estimate), pct(r.sens_study.estimate),
                           pct(r.sens_control.lo), pct(r.sens_control.hi), pct(r.sens_study.lo),
                           pct(r.sens_study.hi), pct(r.spec_control.estimate),
                           pct(r.spec_study.estimate), pct(r.spec_control.lo), pct(r.spec_control.hi),
                           pct(r.spec_study.lo), pct(r.spec_study.hi));
    };
    for (const EndpointRow& r : rep.endpoints.rows) endpoint_line(display_name(r.anomaly), r);
    if (!rep.endpoints.rows.empty()) endpoint_line("Average", rep.endpoints.average);

    for (Endpoint e : {Endpoint::sensitivity, Endpoint::specificity}) {
        out += fmt::format("\n## {} tests\n\n"
                           "| Anomaly | rho | lambda | chi2 | s(chi2) % | s(x) % | x_alpha | e_II % | power % | reject H0 |\n"
                           "|---|---|---|---|---|---|---|---|---|---|\n",
                           e == Endpoint::sensitivity ? "Sensitivity" : "Specificity");
        for (const TestRow& t : rep.tests) {
            if (t.endpoint != e) continue;
            if (!t.mcnemar || !t.binomial) {
                out += fmt::format("| {} | {} | {} | n/a | n/a | n/a | n/a | n/a | n/a | no |\n",
                                   display_name(t.anomaly), t.table.profit, t.table.loss);
                continue;
            }
            const BinomialTestResult& b = *t.binomial;
            out += fmt::format("| {} | {} | {} | {} | {} | {} | {} | {:.1f} | {:.1f} | {} |\n",
                               display_name(t.anomaly), t.table.profit, t.table.loss,
                               chi2_text(t.mcnemar->chi2),
                               format_percent_probability(t.mcnemar->p_one_sided, rep.clamp_small_p),
                               format_percent_probability(b.p_one_sided, rep.clamp_small_p), b.x_alpha, 100.0 * b.e_II,
                               100.0 * b.power,
                               b.reject_H0 ? fmt::format("yes ({})", to_string(b.direction)) : "no");
        }
    }

    if (!rep.aucs.empty()) {
        out += fmt::format("\n## Areas under the LROC curves\n\n"
                           "| Anomaly | a_c -> a_s | {}% CI |\n|---|---|---|\n",
                           ci_pct);
        for (const AucRow& a : rep.aucs) {
            out += fmt::format("| {} | {:.2f} -> {:.2f} | [{:.2f}, {:.2f}] -> [{:.2f}, {:.2f}] |\n",
                               display_name(a.anomaly), a.control.a, a.study.a, a.control.lo,
                               a.control.hi, a.study.lo, a.study.hi);
        }
        if (rep.auc_average) {
            const AucAverage& v = *rep.auc_average;
            out += fmt::format("| Average | {:.2f} -> {:.2f} | [{:.2f}, {:.2f}] -> [{:.2f}, {:.2f}] |\n",
                               v.a_c, v.a_s, v.c_lo, v.c_hi, v.s_lo, v.s_hi);
        }

        out += fmt::format("\n## AUC difference\n\n"
                           "| Anomaly | {}% CI | r_P | r_N | r | z | s(z) |\n|---|---|---|---|---|---|---|\n",
                           ci_pct);
        for (const AucRow& a : rep.aucs) {
            if (!a.diff) continue;
            const AucComparison& d = *a.diff;
            out += fmt::format("| {} | [{:.2f}, {:.2f}] | {:.3f} | {:.3f} | {:.3f} | {:.1f} | {} |\n",
                               display_name(a.anomaly), d.lo, d.hi, d.r_P, d.r_N, d.r, d.z_hat,
                               format_probability(d.p_one_sided));
        }
        if (rep.auc_average) {
            out += fmt::format("| Average | [{:.2f}, {:.2f}] | - | - | - | - | - |\n",
                               rep.auc_average->diff_lo, rep.auc_average->diff_hi);
        }
    }

    if (!rep.warnings.empty()) {
        out += "\n## Warnings\n\n";
        for (const std::string& w : rep.warnings) out += fmt::format("- {}\n", w);
    }
    return out;
}

std::string render_csv(const Report& rep) {
    std::string out = "table,row,column,value\n";
    for (const ReportCell& c : report_cells(rep)) {
        out += fmt::format("{},{},{},{:.10g}\n", c.table, c.row, c.column, c.value);
    }
    return out;
}

std::string render_latex(const Report& rep) {
    std::string out;
    auto arrow = [](const std::string& a, const std::string& b) {
        return fmt::format("${} \\rightarrow {}$", a, b);
    };
    auto interval = [](const std::string& lo, const std::string& hi) { return fmt::format("[{}, {}]", lo, hi); };
    const int ci_pct = static_cast<int>(std::lround(100.0 * rep.cfg.confidence));

    out += "\\begin{tabularx}{0.9\\textwidth}{ r | c c | c c }\n\\toprule\n";
    out += fmt::format("Clinical performance & $\\sens{{c}} \\rightarrow \\sens{{s}}$ & ${0}\\%$ confidence intervals"
                       " & $\\spec{{c}} \\rightarrow \\spec{{s}}$ & ${0}\\%$ confidence intervals \\\\ \\midrule\n",
                       ci_pct);
    auto endpoint_line = [&](std::string_view label, const EndpointRow& r) {
        out += fmt::format(
            "{} & {} & ${} \\rightarrow {}$ & {} & ${} \\rightarrow {}$ \\\\\n", label,
            arrow(pct(r.sens_control.estimate), pct(r.sens_study.estimate)),
            interval(pct(r.sens_control.lo), pct(r.sens_control.hi)),
            interval(pct(r.sens_study.lo), pct(r.sens_study.hi)),
            arrow(pct(r.spec_control.estimate), pct(r.spec_study.estimate)),
            interval(pct(r.spec_control.lo), pct(r.spec_control.hi)),
            interval(pct(r.spec_study.lo), pct(r.spec_study.hi)));
    };
    for (const EndpointRow& r : rep.endpoints.rows) endpoint_line(display_name(r.anomaly), r);
    if (!rep.endpoints.rows.empty()) {
        out += "\\midrule\n";
        endpoint_line("Average", rep.endpoints.average);
    }
    out += "\\bottomrule\n\\end{tabularx}\n\n";

    for (Endpoint e : {Endpoint::sensitivity, Endpoint::specificity}) {
        out += "\\begin{tabularx}{0.49\\textwidth}{ r | r r | r r r r }\n\\toprule\n";
        out += fmt::format("\\multicolumn{{1}}{{c|}}{{${}$ statistics}} & $\\chi^2$ & $s(\\chi^2)$ & $s(x)$ & "
                           "$x_{{\\tI}}$ & $e_{{II}}$ & power \\\\ \\midrule\n",
                           e == Endpoint::sensitivity ? "\\sens{}" : "\\spec{}");
        for (const TestRow& t : rep.tests) {
            if (t.endpoint != e) continue;
            if (!t.mcnemar || !t.binomial) {
                out += fmt::format("{} & -- & -- & -- & -- & -- & -- \\\\\n", display_name(t.anomaly));
                continue;
            }
            out += fmt::format("{} & {} & {} & {} & {} & {:.1f} & {:.1f} \\\\\n", display_name(t.anomaly),
                               chi2_text(t.mcnemar->chi2), format_percent_probability(t.mcnemar->p_one_sided, rep.clamp_small_p),
                               format_percent_probability(t.binomial->p_one_sided, rep.clamp_small_p), t.binomial->x_alpha,
                               100.0 * t.binomial->e_II, 100.0 * t.binomial->power);
        }
        out += "\\bottomrule\n\\end{tabularx}\n\n";
    }

    if (!rep.aucs.empty()) {
        auto f2 = [](double v) { return fmt::format("{:.2f}", v); };
        out += "\\begin{tabularx}{0.49\\textwidth}{ r | c c }\n\\toprule\n";
        out += fmt::format("\\multicolumn{{1}}{{c|}}{{AUC statistics}} & $a^c \\rightarrow a^s$ & ${}\\%$ confidence "
                           "intervals \\\\ \\midrule\n",
                           ci_pct);
        for (const AucRow& a : rep.aucs) {
            out += fmt::format("{} & {} & ${} \\rightarrow {}$ \\\\\n", display_name(a.anomaly),
                               arrow(f2(a.control.a), f2(a.study.a)), interval(f2(a.control.lo), f2(a.control.hi)),
                               interval(f2(a.study.lo), f2(a.study.hi)));
        }
        if (rep.auc_average) {
            const AucAverage& v = *rep.auc_average;
            out += fmt::format("\\midrule\nAverage & {} & ${} \\rightarrow {}$ \\\\\n", arrow(f2(v.a_c), f2(v.a_s)),
                               interval(f2(v.c_lo), f2(v.c_hi)), interval(f2(v.s_lo), f2(v.s_hi)));
        }
        out += "\\bottomrule\n\\end{tabularx}\n\n";

        out += "\\begin{tabularx}{0.44\\textwidth}{ r | c c c }\n\\toprule\n";
        out += fmt::format("\\multicolumn{{1}}{{c|}}{{AUC difference}} & ${}\\%$ conf.~int.\\ & $\\hat{{z}}$ & "
                           "$s(\\hat{{z}})$ \\\\ \\midrule\n",
                           ci_pct);
        for (const AucRow& a : rep.aucs) {
            if (!a.diff) continue;
            out += fmt::format("{} & ${}$ & ${:.1f}$ & ${}$ \\\\\n", display_name(a.anomaly),
                               interval(f2(a.diff->lo), f2(a.diff->hi)), a.diff->z_hat,
                               format_probability(a.diff->p_one_sided));
        }
        if (rep.auc_average) {
            out += fmt::format("\\midrule\nAverage & ${}$ & $-$ & $-$ \\\\\n",
                               interval(f2(rep.auc_average->diff_lo), f2(rep.auc_average->diff_hi)));
        }
        out += "\\bottomrule\n\\end{tabularx}\n";
    }
    return out;
}

bool within_tolerance(const PrintedCell& printed, double computed) {
    if (!std::isfinite(computed)) return false;
    if (printed.kind == ToleranceKind::log10) {
        if (!(computed > 0.0) || !(printed.value > 0.0)) return false;
        return std::abs(std::log10(computed) - std::log10(printed.value)) <= printed.tolerance;
    }
    return std::abs(computed - printed.value) <= printed.tolerance + 1e-9;
}

std::vector<Mismatch> compare_with_printed(std::span<const ReportCell> cells,
                                           std::span<const PrintedCell> printed) {
    std::map<std::tuple<std::string_view, std::string_view, std::string_view>, double> index;
    for (const ReportCell& c : cells) index[{c.table, c.row, c.column}] = c.value;
    std::vector<Mismatch> out;
    for (const PrintedCell& p : printed) {
        const auto it = index.find({p.table, p.row, p.column});
        if (it == index.end()) {
            out.push_back({p, std::nullopt});
        } else if (!within_tolerance(p, it->second)) {
            out.push_back({p, it->second});
        }
    }
    return out;
}

std::string render_mismatches(std::span<const Mismatch> mismatches, std::size_t checked) {
    std::string out = fmt::format("{} of {} printed cells reproduced within tolerance\n",
                                  checked - mismatches.size(), checked);
    for (const Mismatch& m : mismatches) {
        const std::string tol = m.printed.kind == ToleranceKind::log10
                                    ? fmt::format("{} decades", m.printed.tolerance)
                                    : fmt::format("±{}", m.printed.tolerance);
        if (m.computed) {
            out += fmt::format("MISMATCH {}/{}/{}: printed {}, computed {:.6g} (tolerance {})\n", m.printed.table,
                               m.printed.row, m.printed.column, m.printed.value, *m.computed, tol);
        } else {
            out += fmt::format("MISSING {}/{}/{}: printed {}, not computed\n", m.printed.table, m.printed.row,
                               m.printed.column, m.printed.value);
        }
    }
    return out;
}

}  // namespace pairedval
