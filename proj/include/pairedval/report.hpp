#pragma once

// Full result set for a collection of per-anomaly counts, its Markdown, CSV
// and LaTeX renderings, and the cell-by-cell comparison with printed values.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairedval/counts_io.hpp"
#include "pairedval/fixture.hpp"
#include "pairedval/lroc.hpp"
#include "pairedval/paired_tests.hpp"

namespace pairedval {

struct TestRow {
    AnomalyType anomaly = AnomalyType::caries;
    Endpoint endpoint = Endpoint::sensitivity;
    MatchedSampleTable table;
    std::optional<McNemarResult> mcnemar;       // empty without discordant pairs
    std::optional<BinomialTestResult> binomial;
};

struct AucRow {
    AnomalyType anomaly = AnomalyType::caries;
    AucStats control;
    AucStats study;
    std::optional<AucComparison> diff;
};

struct AucAverage {
    double a_c = 0.0;
    double a_s = 0.0;
    double c_lo = 0.0;
    double c_hi = 0.0;
    double s_lo = 0.0;
    double s_hi = 0.0;
    double diff_lo = 0.0;
    double diff_hi = 0.0;
};

struct Report {
    TestConfig cfg;
    CorrelationMode mode = CorrelationMode::table;
    EndpointReport endpoints;
    std::vector<TestRow> tests;  // sensitivity rows first, then specificity
    std::vector<AucRow> aucs;
    std::optional<AucAverage> auc_average;
    std::vector<std::string> warnings;
    // Show McNemar and binomial p-values below 1e-6 as "0.0".
    bool clamp_small_p = false;
};

// Anomalies with an undefined endpoint or missing from the input are
// omitted with a warning instead of failing the whole report.
Report build_report(std::span<const AnomalyCounts> counts, const TestConfig& cfg,
                    CorrelationMode mode = CorrelationMode::table);

struct ReportCell {
    std::string table;
    std::string row;
    std::string column;
    double value = 0.0;
};

// Flat view of every reported number. Percent-valued cells are in percent;
// row keys are anomaly ids and "average".
std::vector<ReportCell> report_cells(const Report& report);

std::string render_markdown(const Report& report);
std::string render_csv(const Report& report);
std::string render_latex(const Report& report);

struct Mismatch {
    PrintedCell printed;
    std::optional<double> computed;  // empty when the cell was not produced
};

bool within_tolerance(const PrintedCell& printed, double computed);
std::vector<Mismatch> compare_with_printed(std::span<const ReportCell> cells,
                                           std::span<const PrintedCell> printed);
std::string render_mismatches(std::span<const Mismatch> mismatches, std::size_t checked);

// "0.0123", "1.4e-13": fixed with four decimals, scientific below 1e-4.
std::string format_probability(double p);
// Probability shown in percent: two decimals, scientific below 1e-4. With
// `clamp`, values below 1e-6 print as "0.0".
std::string format_percent_probability(double p, bool clamp = false);

}  // namespace pairedval
