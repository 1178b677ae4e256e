#include "pairedval/counts_io.hpp"

#include <array>
#include <charconv>
#include <future>
#include <map>

#include <fmt/format.h>

#include "pairedval/error.hpp"
#include "pairedval/file_util.hpp"
#include "pairedval/lroc.hpp"

namespace pairedval {

namespace {

constexpr std::string_view kHeader =
    "anomaly,arm,tp,fp,tn,fn,sens_g,sens_rho,sens_lambda,sens_b,spec_g,spec_rho,spec_lambda,spec_b,auc";
constexpr std::size_t kColumns = 15;

std::optional<AnomalyCounts> tally_anomaly(const StudyDataset& dataset, AnomalyType a,
                                           ConfidenceLabel threshold, double min_dice) {
    AnomalyCounts c;
    c.anomaly = a;
    c.control = tally(dataset, Arm::control, a, threshold, min_dice);
    if (c.control.total() == 0) return std::nullopt;
    c.study = tally(dataset, Arm::study, a, threshold, min_dice);
    c.sens = matched_samples(dataset, a, Endpoint::sensitivity, threshold, min_dice);
    c.spec = matched_samples(dataset, a, Endpoint::specificity, threshold, min_dice);
    if (c.control.positives() > 0 && c.control.negatives() > 0) {
        c.auc_control = build_lroc(dataset, Arm::control, a, min_dice).auc;
        c.auc_study = build_lroc(dataset, Arm::study, a, min_dice).auc;
    }
    return c;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return s;
}

}  // namespace

std::vector<AnomalyCounts> counts_from_dataset(const StudyDataset& dataset, ConfidenceLabel threshold,
                                               double min_dice) {
    std::vector<std::future<std::optional<AnomalyCounts>>> jobs;
    for (AnomalyType a : kAllAnomalies) {
        jobs.push_back(std::async(std::launch::async, tally_anomaly, std::cref(dataset), a,
                                  threshold, min_dice));
    }
    std::vector<AnomalyCounts> out;
    for (auto& j : jobs) {
        if (auto c = j.get()) out.push_back(*c);
    }
    return out;
}

std::string counts_to_csv(std::span<const AnomalyCounts> counts) {
    std::string out(kHeader);
    out += '\n';
    for (const AnomalyCounts& c : counts) {
        for (Arm arm : {Arm::control, Arm::study}) {
            const DecisionMatrix& dm = arm == Arm::control ? c.control : c.study;
            const std::optional<double>& auc = arm == Arm::control ? c.auc_control : c.auc_study;
            out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(c.anomaly),
                               to_string(arm), dm.tp, dm.fp, dm.tn, dm.fn, c.sens.good,
                               c.sens.profit, c.sens.loss, c.sens.bad, c.spec.good, c.spec.profit,
                               c.spec.loss, c.spec.bad,
                               auc ? fmt::format("{:.17g}", *auc) : std::string());
        }
    }
    return out;
}

std::vector<AnomalyCounts> counts_from_csv(std::string_view text, const std::string& origin) {
    struct Partial {
        std::optional<DecisionMatrix> arms[2];
        std::optional<double> auc[2];
        MatchedSampleTable sens;
        MatchedSampleTable spec;
        std::size_t first_line = 0;
    };
    std::map<AnomalyType, Partial> seen;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_done = false;
    while (pos < text.size()) {
        const std::size_t nl = std::min(text.find('\n', pos), text.size());
        const std::string_view line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;
        const std::string where = fmt::format("{}:{}", origin, line_no);
        if (!header_done) {
            if (line != kHeader) throw InputError(where, fmt::format("expected header '{}'", kHeader));
            header_done = true;
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != kColumns) {
            throw InputError(where, fmt::format("expected {} columns, got {}", kColumns, fields.size()));
        }
        const auto anomaly = parse_anomaly(trim(fields[0]));
        if (!anomaly) throw InputError(where + ":1", fmt::format("unknown anomaly '{}'", fields[0]));
        const auto arm = parse_arm(trim(fields[1]));
        if (!arm) throw InputError(where + ":2", fmt::format("unknown arm '{}'", fields[1]));

        std::array<std::int64_t, 12> v{};
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string_view f = trim(fields[i + 2]);
            const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v[i]);
            if (ec != std::errc{} || p != f.data() + f.size() || v[i] < 0) {
                throw InputError(fmt::format("{}:{}", where, i + 3),
                                 fmt::format("expected a non-negative integer, got '{}'", f));
            }
        }
        std::optional<double> auc;
        if (const std::string_view f = trim(fields[14]); !f.empty()) {
            double a = 0.0;
            const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), a);
            if (ec != std::errc{} || p != f.data() + f.size() || !(a >= 0.0 && a <= 1.0)) {
                throw InputError(where + ":15", fmt::format("auc must be a number in [0, 1], got '{}'", f));
            }
            auc = a;
        }

        const DecisionMatrix dm{*anomaly, *arm, v[0], v[1], v[2], v[3]};
        const MatchedSampleTable sens{*anomaly, Endpoint::sensitivity, v[4], v[5], v[6], v[7]};
        const MatchedSampleTable spec{*anomaly, Endpoint::specificity, v[8], v[9], v[10], v[11]};
        const auto slot = static_cast<std::size_t>(*arm);
        auto [it, inserted] = seen.try_emplace(*anomaly);
        Partial& part = it->second;
        if (inserted) {
            part.sens = sens;
            part.spec = spec;
            part.first_line = line_no;
        } else if (part.sens != sens || part.spec != spec) {
            throw InputError(where, fmt::format("matched-sample columns disagree with line {}", part.first_line));
        }
        if (part.arms[slot]) {
            throw InputError(where, fmt::format("duplicate row for {} ({})", to_string(*anomaly),
                                                to_string(*arm)));
        }
        part.arms[slot] = dm;
        part.auc[slot] = auc;
    }

    std::vector<AnomalyCounts> out;
    for (auto& [anomaly, part] : seen) {
        const std::string where = fmt::format("{}:{}", origin, part.first_line);
        for (std::size_t slot = 0; slot < 2; ++slot) {
            if (!part.arms[slot]) {
                throw InputError(where, fmt::format("unpaired data: no {} row for {}",
                                                    to_string(static_cast<Arm>(slot)), to_string(anomaly)));
            }
        }
        if (part.auc[0].has_value() != part.auc[1].has_value()) {
            throw InputError(where, fmt::format("auc given for only one arm of {}", to_string(anomaly)));
        }
        AnomalyCounts c;
        c.anomaly = anomaly;
        c.control = *part.arms[0];
        c.study = *part.arms[1];
        c.sens = part.sens;
        c.spec = part.spec;
        c.auc_control = part.auc[0];
        c.auc_study = part.auc[1];
        out.push_back(c);
    }
    return out;
}

std::vector<AnomalyCounts> load_counts(const std::filesystem::path& path) {
    return counts_from_csv(read_text_file(path), path.string());
}

}  // namespace pairedval
