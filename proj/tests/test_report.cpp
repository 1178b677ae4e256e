#include <doctest.h>

#include <algorithm>
#include <map>

#include "pairedval/error.hpp"
#include "pairedval/fixture.hpp"
#include "pairedval/report.hpp"
#include "test_support.hpp"

using namespace pairedval;

namespace {

std::map<std::string, double> cell_map(const Report& r, std::string_view table_prefix = "") {
    std::map<std::string, double> m;
    for (const ReportCell& c : report_cells(r)) {
        if (c.table.rfind(table_prefix, 0) == 0) m[c.table + "/" + c.row + "/" + c.column] = c.value;
    }
    return m;
}

bool has_warning(const Report& r, std::string_view text) {
    return std::any_of(r.warnings.begin(), r.warnings.end(),
                       [&](const std::string& w) { return w.find(text) != std::string::npos; });
}

std::string first_error(const std::string& text) {
    try {
        counts_from_csv(text, "c.csv");
    } catch (const InputError& e) {
        return e.path();
    }
    return "";
}

}  // namespace

TEST_CASE("counts CSV round trip") {
    const auto fixture = paper_fixture();
    const std::string csv = counts_to_csv(fixture);
    CHECK(csv.rfind("anomaly,arm,tp,fp,tn,fn,sens_g,sens_rho,sens_lambda,sens_b,spec_g,spec_rho,spec_lambda,spec_b,auc\n", 0) == 0);
    const auto back = counts_from_csv(csv, "c.csv");
    REQUIRE(back.size() == fixture.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].control == fixture[i].control);
        CHECK(back[i].study == fixture[i].study);
        CHECK(back[i].sens == fixture[i].sens);
        CHECK(back[i].spec == fixture[i].spec);
        CHECK(back[i].auc_control == fixture[i].auc_control);
        CHECK(back[i].auc_study == fixture[i].auc_study);
    }
    CHECK(counts_to_csv(back) == csv);
}

TEST_CASE("counts CSV errors") {
    const std::string header =
        "anomaly,arm,tp,fp,tn,fn,sens_g,sens_rho,sens_lambda,sens_b,spec_g,spec_rho,spec_lambda,spec_b,auc\n";
    const std::string c = "caries,control,1,1,1,1,1,0,0,1,1,0,0,1,\n";
    const std::string s = "caries,study,1,1,1,1,1,0,0,1,1,0,0,1,\n";
    CHECK_NOTHROW(counts_from_csv(header + c + s, "c.csv"));
    CHECK(first_error("anomaly,arm\n").rfind("c.csv:1", 0) == 0);
    CHECK(first_error(header + "caries,control,1,1\n").rfind("c.csv:2", 0) == 0);
    CHECK(first_error(header + "tartar,control,1,1,1,1,1,0,0,1,1,0,0,1,\n").rfind("c.csv:2", 0) == 0);
    CHECK(first_error(header + "caries,both,1,1,1,1,1,0,0,1,1,0,0,1,\n").rfind("c.csv:2", 0) == 0);
    CHECK(first_error(header + "caries,control,-1,1,1,1,1,0,0,1,1,0,0,1,\n").rfind("c.csv:2", 0) == 0);
    CHECK(first_error(header + "caries,control,x,1,1,1,1,0,0,1,1,0,0,1,\n").rfind("c.csv:2", 0) == 0);
    CHECK(first_error(header + c + c) != "");
    CHECK(first_error(header + c) != "");
    CHECK(first_error(header + c + "caries,study,1,1,1,1,2,0,0,1,1,0,0,1,\n") != "");
    CHECK(first_error(header + "caries,control,1,1,1,1,1,0,0,1,1,0,0,1,0.7\n" + s) != "");
}

TEST_CASE("perturbation") {
    auto counts = paper_fixture();
    perturb_counts(counts, "caries.control.tp+1");
    CHECK(counts[0].control.tp == 106);
    perturb_counts(counts, "bone_loss.spec.loss-2");
    CHECK(counts[4].spec.loss == paper_fixture()[4].spec.loss - 2);
    perturb_counts(counts, "calculus.sens.profit");
    CHECK(counts[5].sens.profit == paper_fixture()[5].sens.profit + 1);
    CHECK_THROWS_AS(perturb_counts(counts, "tartar.control.tp+1"), Error);
    CHECK_THROWS_AS(perturb_counts(counts, "caries.arm.tp+1"), Error);
    CHECK_THROWS_AS(perturb_counts(counts, "caries.sens.tp+1"), Error);
    CHECK_THROWS_AS(perturb_counts(counts, "caries"), Error);
}

TEST_CASE("tolerance checks") {
    const PrintedCell abs{"t", "r", "c", 10.0, 0.05};
    CHECK(within_tolerance(abs, 10.04));
    CHECK(within_tolerance(abs, 9.96));
    CHECK_FALSE(within_tolerance(abs, 10.06));
    const PrintedCell lg{"t", "r", "c", 1e-9, 1.0, ToleranceKind::log10};
    CHECK(within_tolerance(lg, 5e-9));
    CHECK(within_tolerance(lg, 2e-10));
    CHECK_FALSE(within_tolerance(lg, 2e-8));
    CHECK_FALSE(within_tolerance(lg, 0.0));

    const std::vector<ReportCell> cells = {{"t", "r", "c", 10.2}};
    const std::vector<PrintedCell> printed = {abs, {"t", "r", "missing", 1.0, 0.1}};
    const auto mm = compare_with_printed(cells, printed);
    REQUIRE(mm.size() == 2);
    CHECK(mm[0].computed == 10.2);
    CHECK_FALSE(mm[1].computed.has_value());
    const std::string text = render_mismatches(mm, 2);
    CHECK(text.find("0 of 2 printed cells") != std::string::npos);
    CHECK(text.find("MISMATCH t/r/c") != std::string::npos);
    CHECK(text.find("MISSING t/r/missing") != std::string::npos);
}

TEST_CASE("published report: everything but the area intervals reproduces") {
    const auto fixture = paper_fixture();
    const Report r = build_report(fixture, TestConfig{});
    CHECK(r.warnings.empty());
    const auto cells = report_cells(r);
    const auto mm = compare_with_printed(cells, printed_cells());
    CHECK(printed_cells().size() == 188);
    for (const Mismatch& m : mm) {
        CHECK(m.computed.has_value());
        CHECK((m.printed.table == "auc" || m.printed.table == "auc_diff"));
    }
    CHECK(mm.size() == 5);
}

TEST_CASE("missing and degenerate anomalies are omitted with a warning") {
    auto counts = paper_fixture();
    counts.erase(counts.begin() + 2);
    Report r = build_report(counts, TestConfig{});
    CHECK(r.endpoints.rows.size() == 5);
    CHECK(has_warning(r, "root_canal_defect: no data, row omitted"));
    CHECK(cell_map(r).count("endpoints/root_canal_defect/sens_c") == 0);

    counts = paper_fixture();
    counts[1].sens = {AnomalyType::apical_lesion, Endpoint::sensitivity, 49, 0, 0, 4};
    r = build_report(counts, TestConfig{});
    CHECK(has_warning(r, "apical_lesion sensitivity: no discordant pairs"));
    CHECK(has_warning(r, "margins"));
    CHECK(cell_map(r).count("sens_tests/apical_lesion/chi2") == 0);
}

TEST_CASE("custom alpha changes the critical region") {
    const auto fixture = paper_fixture();
    const auto base = cell_map(build_report(fixture, TestConfig{}));
    const auto strict = cell_map(build_report(fixture, TestConfig{0.01, 0.10, 0.95}));
    CHECK(base.at("sens_tests/caries/x_alpha") == 23);
    // 18 + 2.326 * 3 + 0.5 = 25.48.
    CHECK(strict.at("sens_tests/caries/x_alpha") == 25);
    CHECK(strict.at("sens_tests/apical_lesion/x_alpha") == 11);
    CHECK(strict.at("sens_tests/caries/power") < base.at("sens_tests/caries/power"));
    CHECK(strict.at("sens_tests/caries/s_x") == base.at("sens_tests/caries/s_x"));
}

TEST_CASE("dataset to counts to report equals the direct path") {
    const auto fixture = paper_fixture();
    const StudyDataset ds = testing::dataset_from_counts(fixture);
    const auto counts = counts_from_dataset(ds, {50});
    REQUIRE(counts.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(counts[i].control == fixture[i].control);
        CHECK(counts[i].sens == fixture[i].sens);
        CHECK(counts[i].spec == fixture[i].spec);
        CHECK(counts[i].auc_control.has_value());
    }
    const auto reread = counts_from_csv(counts_to_csv(counts), "tally.csv");
    CHECK(render_csv(build_report(reread, TestConfig{})) == render_csv(build_report(counts, TestConfig{})));
    const auto direct = cell_map(build_report(counts, TestConfig{}), "s");
    const auto published = cell_map(build_report(fixture, TestConfig{}), "s");
    CHECK(direct == published);
    CHECK(cell_map(build_report(counts, TestConfig{}), "endpoints") ==
          cell_map(build_report(fixture, TestConfig{}), "endpoints"));
}

TEST_CASE("formatting") {
    CHECK(format_probability(0.0) == "0.0");
    CHECK(format_probability(0.0521) == "0.0521");
    CHECK(format_probability(1.4e-13) == "1.4e-13");
    CHECK(format_percent_probability(0.4225) == "42.25");
    CHECK(format_percent_probability(0.0028) == "0.28");
    CHECK(format_percent_probability(3e-7) == "3.0e-05");
    CHECK(format_percent_probability(3e-7, true) == "0.0");
    CHECK(format_percent_probability(0.0, false) == "0.0");

    Report r = build_report(paper_fixture(), TestConfig{});
    const std::string md = render_markdown(r);
    CHECK(md.find("| Caries | 66.0 -> 84.9 |") != std::string::npos);
    CHECK(md.find("| Average | 60.7 -> 85.9 |") != std::string::npos);
    const std::string csv = render_csv(r);
    CHECK(csv.rfind("table,row,column,value\n", 0) == 0);
    CHECK(csv.find("sens_tests,caries,x_alpha,23\n") != std::string::npos);
    const std::string tex = render_latex(r);
    CHECK(tex.find("\\begin{tabularx}") != std::string::npos);
    CHECK(tex.find("$66.0 \\rightarrow 84.9$") != std::string::npos);
}
