// paired-val: command-line front end.
//
//   paired-val tally dataset.json [-o counts.csv]
//   paired-val report (dataset.json | counts.csv | --fixture paper) [--out-dir DIR]
//   paired-val roc dataset.json --out-dir DIR
//   paired-val calibrate [scenario.toml|json] [-o summary.json]
//   paired-val reproduce-paper [--emit-latex] [--perturb caries.control.tp+1]
//
// Exit status: 0 success, 1 failed check or contract violation, 2 bad input.

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pairedval/calibration.hpp"
#include "pairedval/counts_io.hpp"
#include "pairedval/dataset_io.hpp"
#include "pairedval/error.hpp"
#include "pairedval/file_util.hpp"
#include "pairedval/fixture.hpp"
#include "pairedval/lroc.hpp"
#include "pairedval/report.hpp"

namespace fs = std::filesystem;
using namespace pairedval;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct Common {
    int threshold = 50;
    double min_dice = kDefaultMinDice;
    double alpha = 0.05;
    double beta_error = 0.10;
    double confidence = 0.95;
    std::string r_mode = "table";

    TestConfig config() const { return {alpha, beta_error, confidence}; }
    CorrelationMode mode() const { return r_mode == "average" ? CorrelationMode::average : CorrelationMode::table; }
    ConfidenceLabel label() const { return ConfidenceLabel{threshold}; }
};

void add_matching_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--threshold", c.threshold, "Operating point: keep confidences >= this")
        ->capture_default_str()
        ->check(CLI::Validator(
            [](std::string& v) {
                int k = 0;
                const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), k);
                if (ec != std::errc{} || ptr != v.data() + v.size()) return std::string("not an integer");
                return (k >= 10 && k <= 100 && k % 10 == 0) ? std::string() : "must be one of 10, 20, ..., 100";
            },
            "10..100 step 10"));
    cmd->add_option("--min-dice", c.min_dice, "Minimum Dice score for a match")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
}

void add_test_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--alpha", c.alpha, "Type-I error level alpha_I")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--beta-error", c.beta_error, "Acceptable Type-II error alpha_II")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--confidence", c.confidence, "Confidence level of intervals")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--r-mode", c.r_mode, "Area correlation: table lookup or the average Kendall coefficient")
        ->capture_default_str()
        ->check(CLI::IsMember({"table", "average"}));
}

// Loads, validates and normalizes a dataset; violations are input errors.
StudyDataset read_dataset(const std::string& path) {
    StudyDataset ds = load_dataset(path);
    const std::vector<Violation> violations = validate_dataset(ds);
    if (!violations.empty()) {
        for (const Violation& v : violations) {
            std::cerr << fmt::format("{}: image {}: {}: {}\n", path, v.image_id, v.field, v.rule);
        }
        throw InputError(path, fmt::format("{} schema violation(s)", violations.size()));
    }
    return normalize_dataset(std::move(ds));
}

void emit(const std::optional<std::string>& path, const std::string& content) {
    if (path) {
        write_file_atomic(*path, content);
    } else {
        std::cout << content;
    }
}

void print_warnings(const Report& rep) {
    for (const std::string& w : rep.warnings) std::cerr << "warning: " << w << '\n';
}

int run_tally(const std::string& input, const std::optional<std::string>& out, const Common& c) {
    const StudyDataset ds = read_dataset(input);
    const std::vector<AnomalyCounts> counts = counts_from_dataset(ds, c.label(), c.min_dice);
    emit(out, counts_to_csv(counts));
    return 0;
}

std::vector<AnomalyCounts> report_input(const std::string& input, const std::string& fixture, const Common& c) {
    if (!fixture.empty()) {
        if (fixture != "paper") throw InputError("--fixture", "only 'paper' is available");
        return paper_fixture();
    }
    if (input.empty()) throw InputError("report", "give a dataset, a counts file or --fixture paper");
    if (fs::path(input).extension() == ".csv") return load_counts(input);
    return counts_from_dataset(read_dataset(input), c.label(), c.min_dice);
}

int run_report(const std::string& input, const std::string& fixture, const std::string& out_dir, bool latex,
               const Common& c) {
    const std::vector<AnomalyCounts> counts = report_input(input, fixture, c);
    const Report rep = build_report(counts, c.config(), c.mode());
    print_warnings(rep);
    const std::string md = render_markdown(rep);
    std::cout << md;
    if (!out_dir.empty()) {
        write_file_atomic(fs::path(out_dir) / "report.md", md);
        write_file_atomic(fs::path(out_dir) / "report.csv", render_csv(rep));
        if (latex) write_file_atomic(fs::path(out_dir) / "report.tex", render_latex(rep));
    } else if (latex) {
        std::cout << '\n' << render_latex(rep);
    }
    return 0;
}

int run_roc(const std::string& input, const std::string& out_dir, const Common& c) {
    const StudyDataset ds = read_dataset(input);
    int written = 0;
    for (AnomalyType a : kAllAnomalies) {
        const DecisionMatrix dm = tally(ds, Arm::control, a, ConfidenceLabel{10}, c.min_dice);
        if (dm.positives() == 0 || dm.negatives() == 0) {
            std::cerr << fmt::format("warning: {}: |P| = {}, |N| = {}, no curve\n", to_string(a), dm.positives(),
                                     dm.negatives());
            continue;
        }
        const LrocCurve control = build_lroc(ds, Arm::control, a, c.min_dice);
        const LrocCurve study = build_lroc(ds, Arm::study, a, c.min_dice);
        write_file_atomic(fs::path(out_dir) / fmt::format("lroc_{}.csv", to_string(a)), curves_to_csv(control, study));
        write_file_atomic(fs::path(out_dir) / fmt::format("lroc_{}.svg", to_string(a)), curves_to_svg(control, study));
        std::cout << fmt::format("{}: auc {:.4f} -> {:.4f}\n", to_string(a), control.auc, study.auc);
        ++written;
    }
    std::cout << fmt::format("{} curve pair(s) written to {}\n", written, out_dir);
    return 0;
}

std::vector<SimScenario> builtin_scenarios() {
    return {
        {"null", 2000, 0.5, 0.3, 0.3, 10000, 1},
        {"alt_n13", 13, 1.0, 0.9, 0.1, 10000, 2},
        {"alt_n30", 30, 1.0, 0.75, 0.25, 10000, 3},
        {"alt_n60", 60, 1.0, 0.65, 0.35, 10000, 4},
        {"coverage", 800, 0.5, 0.1, 0.05, 10000, 5},
    };
}

int run_calibrate(const std::string& input, const std::optional<std::string>& out, std::optional<std::uint64_t> seed,
                  std::optional<std::int64_t> reps, unsigned threads, const Common& c) {
    std::vector<SimScenario> scenarios = input.empty() ? builtin_scenarios() : load_scenarios(input);
    nlohmann::json summary = nlohmann::json::array();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        SimScenario& s = scenarios[i];
        if (seed) s.seed = *seed + i;
        if (reps) s.replications = *reps;
        const CalibrationSummary r = calibrate(s, c.config(), threads);
        summary.push_back(to_json(r));
        std::cerr << fmt::format("{}: binomial reject {:.4f}, McNemar reject {:.4f}, analytic power {:.4f}, "
                                 "coverage {:.4f}\n",
                                 s.name, r.binomial_reject_rate, r.mcnemar_reject_rate, r.analytic_power,
                                 r.ci_coverage);
    }
    emit(out, summary.dump(2) + "\n");
    return 0;
}

int run_reproduce(bool latex, const std::vector<std::string>& perturb, const std::string& out_dir, const Common& c) {
    std::vector<AnomalyCounts> counts = paper_fixture();
    for (const std::string& p : perturb) perturb_counts(counts, p);
    Report rep = build_report(counts, c.config(), c.mode());
    rep.clamp_small_p = true;
    print_warnings(rep);
    std::cout << render_markdown(rep);
    if (latex) std::cout << '\n' << render_latex(rep);

    const std::vector<ReportCell> cells = report_cells(rep);
    const std::vector<Mismatch> mismatches = compare_with_printed(cells, printed_cells());
    const std::string summary = render_mismatches(mismatches, printed_cells().size());
    std::cout << '\n' << summary;
    if (!out_dir.empty()) {
        write_file_atomic(fs::path(out_dir) / "reproduction.md", render_markdown(rep) + "\n" + summary);
        write_file_atomic(fs::path(out_dir) / "reproduction.csv", render_csv(rep));
        if (latex) write_file_atomic(fs::path(out_dir) / "reproduction.tex", render_latex(rep));
    }
    return mismatches.empty() ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Paired-data validation statistics for reader studies"};
    app.require_subcommand(1);
    Common c;

    std::string input;
    std::optional<std::string> out;
    std::string out_dir;
    std::string fixture;
    bool latex = false;
    std::vector<std::string> perturb;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> reps;
    unsigned threads = 0;

    CLI::App* tally_cmd = app.add_subcommand("tally", "Tally decision matrices and matched-sample tables");
    tally_cmd->add_option("dataset", input, "Dataset JSON")->required();
    tally_cmd->add_option("-o,--output", out, "Counts CSV (default: stdout)");
    add_matching_flags(tally_cmd, c);

    CLI::App* report_cmd = app.add_subcommand("report", "Render the result tables");
    report_cmd->add_option("input", input, "Dataset JSON or counts CSV");
    report_cmd->add_option("--fixture", fixture, "Use embedded counts instead of an input file");
    report_cmd->add_option("--out-dir", out_dir, "Write report.md and report.csv here");
    report_cmd->add_flag("--emit-latex", latex, "Also render LaTeX tables");
    add_matching_flags(report_cmd, c);
    add_test_flags(report_cmd, c);

    CLI::App* roc_cmd = app.add_subcommand("roc", "Export LROC curves as CSV and SVG");
    roc_cmd->add_option("dataset", input, "Dataset JSON")->required();
    roc_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
    roc_cmd->add_option("--min-dice", c.min_dice, "Minimum Dice score for a match")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));

    CLI::App* cal_cmd = app.add_subcommand("calibrate", "Monte Carlo calibration of the paired tests");
    cal_cmd->add_option("scenario", input, "Scenario TOML or JSON (default: built-in set)");
    cal_cmd->add_option("-o,--output", out, "Summary JSON (default: stdout)");
    cal_cmd->add_option("--seed", seed, "Override scenario seeds (scenario i gets seed + i)");
    cal_cmd->add_option("--replications", reps, "Override replication counts")->check(CLI::PositiveNumber);
    cal_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
    add_test_flags(cal_cmd, c);

    CLI::App* repro_cmd = app.add_subcommand("reproduce-paper", "Regenerate the published tables and diff them");
    repro_cmd->add_flag("--emit-latex", latex, "Also render LaTeX tables");
    repro_cmd->add_option("--perturb", perturb, "Inject a count change, e.g. caries.control.tp+1");
    repro_cmd->add_option("--out-dir", out_dir, "Also write the tables here");
    add_test_flags(repro_cmd, c);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tally_cmd) return run_tally(input, out, c);
        if (*report_cmd) return run_report(input, fixture, out_dir, latex, c);
        if (*roc_cmd) return run_roc(input, out_dir, c);
        if (*cal_cmd) return run_calibrate(input, out, seed, reps, threads, c);
        if (*repro_cmd) return run_reproduce(latex, perturb, out_dir, c);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return 0;
}
