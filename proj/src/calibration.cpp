#include "pairedval/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <thread>

#include <fmt/format.h>

#include "pairedval/distributions.hpp"
#include "pairedval/error.hpp"
#include "pairedval/file_util.hpp"

namespace pairedval {

using nlohmann::json;

void SimScenario::validate() const {
    auto prob = [&](double v, const char* field) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(fmt::format("scenario '{}': {} must lie in [0, 1], got {}", name, field, v));
        }
    };
    prob(prevalence, "prevalence");
    prob(p_profit, "p_profit");
    prob(p_loss, "p_loss");
    if (p_profit + p_loss > 1.0 + 1e-12) {
        throw Error(fmt::format("scenario '{}': p_profit + p_loss exceeds 1", name));
    }
    if (n_teeth < 1) throw Error(fmt::format("scenario '{}': n_teeth must be >= 1", name));
    if (replications < 1) throw Error(fmt::format("scenario '{}': replications must be >= 1", name));
}

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 root(seed);
    const std::uint64_t salt = root();
    SplitMix64 mixer(salt ^ (index * 0xd1b54a32d192ed03ULL));
    return SplitMix64(mixer());
}

MatchedSampleTable simulate_mst(const SimScenario& scenario, SplitMix64& rng) {
    MatchedSampleTable t;
    t.endpoint = Endpoint::sensitivity;
    const double concordant = 0.5 * (1.0 - scenario.p_profit - scenario.p_loss);
    const double c1 = scenario.p_profit;
    const double c2 = c1 + scenario.p_loss;
    const double c3 = c2 + concordant;
    for (std::int64_t i = 0; i < scenario.n_teeth; ++i) {
        if (rng.uniform() >= scenario.prevalence) continue;
        const double u = rng.uniform();
        if (u < c1) {
            ++t.profit;
        } else if (u < c2) {
            ++t.loss;
        } else if (u < c3) {
            ++t.good;
        } else {
            ++t.bad;
        }
    }
    return t;
}

namespace {

struct Replicate {
    bool informative = false;
    bool binomial_reject = false;
    bool mcnemar_reject = false;
    bool two_direction_reject = false;
    double analytic_power = 0.0;
    bool has_positives = false;
    bool covered = false;
};

Replicate run_replicate(const SimScenario& sc, const TestConfig& cfg, std::uint64_t index) {
    SplitMix64 rng = SplitMix64::stream(sc.seed, index);
    const MatchedSampleTable t = simulate_mst(sc, rng);
    Replicate r;
    const std::int64_t positives = t.total();
    if (positives > 0) {
        r.has_positives = true;
        const double sens = static_cast<double>(t.good + t.profit) / static_cast<double>(positives);
        const EndpointResult ci = wald_ci(sens, positives, cfg.confidence);
        const double truth = sc.true_sensitivity();
        r.covered = ci.lo <= truth && truth <= ci.hi;
    }
    if (t.discordant() == 0) return r;
    r.informative = true;
    const BinomialTestResult b = binomial_test(t, cfg);
    const McNemarResult m = mcnemar_test(t, cfg);
    r.two_direction_reject = b.reject_H0;
    r.binomial_reject = b.reject_H0 && t.profit > t.loss;
    r.mcnemar_reject = m.reject_H0 && t.profit > t.loss;
    const double p1 = sc.p_profit + sc.p_loss > 0.0 ? sc.p_profit / (sc.p_profit + sc.p_loss) : 0.5;
    r.analytic_power = 1.0 - dist::binomial_cdf(b.x_alpha, b.n, p1);
    return r;
}

}  // namespace

CalibrationSummary calibrate(const SimScenario& scenario, const TestConfig& cfg, unsigned threads) {
    scenario.validate();
    cfg.validate();
    if (scenario.replications < 1000) {
        throw Error(fmt::format("scenario '{}': calibration needs >= 1000 replications, got {}",
                                scenario.name, scenario.replications));
    }
    const auto reps = static_cast<std::size_t>(scenario.replications);
    std::vector<Replicate> results(reps);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < reps; i += threads) {
                    results[i] = run_replicate(scenario, cfg, i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    CalibrationSummary s;
    s.scenario = scenario;
    s.alpha_I = cfg.alpha_I;
    s.confidence = cfg.confidence;
    std::int64_t binom = 0, mcn = 0, both = 0, with_pos = 0, covered = 0;
    double power = 0.0;
    for (const Replicate& r : results) {
        if (r.has_positives) {
            ++with_pos;
            covered += r.covered;
        }
        if (!r.informative) continue;
        ++s.informative;
        binom += r.binomial_reject;
        mcn += r.mcnemar_reject;
        both += r.two_direction_reject;
        power += r.analytic_power;
    }
    const double n_inf = static_cast<double>(std::max<std::int64_t>(1, s.informative));
    s.binomial_reject_rate = static_cast<double>(binom) / n_inf;
    s.mcnemar_reject_rate = static_cast<double>(mcn) / n_inf;
    s.two_direction_rate = static_cast<double>(both) / n_inf;
    s.analytic_power = power / n_inf;
    s.ci_coverage = static_cast<double>(covered) / static_cast<double>(std::max<std::int64_t>(1, with_pos));
    return s;
}

namespace {

SimScenario scenario_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw InputError(where, "expected an object");
    SimScenario s;
    for (const auto& [key, value] : j.items()) {
        const std::string at = where + "/" + key;
        try {
            if (key == "name") {
                s.name = value.get<std::string>();
            } else if (key == "n_teeth") {
                s.n_teeth = value.get<std::int64_t>();
            } else if (key == "prevalence") {
                s.prevalence = value.get<double>();
            } else if (key == "p_profit") {
                s.p_profit = value.get<double>();
            } else if (key == "p_loss") {
                s.p_loss = value.get<double>();
            } else if (key == "replications") {
                s.replications = value.get<std::int64_t>();
            } else if (key == "seed") {
                s.seed = value.get<std::uint64_t>();
            } else {
                throw InputError(at, "unknown key");
            }
        } catch (const json::type_error&) {
            throw InputError(at, "wrong type");
        }
    }
    try {
        s.validate();
    } catch (const Error& e) {
        throw InputError(where, e.what());
    }
    return s;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

json toml_value(std::string_view v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        return std::string(v.substr(1, v.size() - 2));
    }
    std::string digits;
    for (char c : v) {
        if (c != '_') digits += c;
    }
    const char* first = digits.data();
    const char* last = digits.data() + digits.size();
    if (digits.find_first_of(".eE") == std::string::npos) {
        std::int64_t i = 0;
        if (auto [p, ec] = std::from_chars(first, last, i); ec == std::errc{} && p == last) return i;
        std::uint64_t u = 0;
        if (auto [p, ec] = std::from_chars(first, last, u); ec == std::errc{} && p == last) return u;
    }
    double d = 0.0;
    if (auto [p, ec] = std::from_chars(first, last, d); ec == std::errc{} && p == last) return d;
    throw std::invalid_argument("unsupported value");
}

}  // namespace

std::vector<SimScenario> scenarios_from_json(const json& j) {
    std::vector<SimScenario> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(scenario_from_json(j[i], fmt::format("/{}", i)));
    } else {
        out.push_back(scenario_from_json(j, ""));
    }
    return out;
}

std::vector<SimScenario> scenarios_from_toml(std::string_view text, const std::string& origin) {
    // Flat subset: `key = value` lines, `#` comments, `[name]` section headers.
    std::vector<std::pair<std::string, json>> tables;
    tables.emplace_back("", json::object());
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        const std::string where = fmt::format("{}:{}", origin, line_no);
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw InputError(where, "unterminated section header");
            std::string name(trim(line.substr(1, line.size() - 2)));
            json table = json::object();
            table["name"] = name;
            tables.emplace_back(name, std::move(table));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw InputError(where, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        try {
            tables.back().second[key] = toml_value(trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument&) {
            throw InputError(where, fmt::format("cannot parse value of '{}'", key));
        }
    }

    std::vector<SimScenario> out;
    const bool has_sections = tables.size() > 1;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        json& table = tables[i].second;
        if (i == 0 && has_sections) {
            // Top-level keys act as defaults for every section.
            for (std::size_t k = 1; k < tables.size(); ++k) {
                for (const auto& [key, value] : table.items()) {
                    if (!tables[k].second.contains(key)) tables[k].second[key] = value;
                }
            }
            continue;
        }
        const std::string where = tables[i].first.empty() ? origin : origin + "#" + tables[i].first;
        try {
            out.push_back(scenario_from_json(table, ""));
        } catch (const InputError& e) {
            throw InputError(where + e.path(), e.detail());
        }
    }
    return out;
}

std::vector<SimScenario> load_scenarios(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    if (path.extension() == ".toml") return scenarios_from_toml(text, path.string());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(fmt::format("{}@byte {}", path.string(), e.byte), "malformed JSON");
    }
    try {
        return scenarios_from_json(doc);
    } catch (const InputError& e) {
        throw InputError(path.string() + "#" + e.path(), e.detail());
    }
}

json to_json(const SimScenario& s) {
    return {{"name", s.name},
            {"n_teeth", s.n_teeth},
            {"prevalence", s.prevalence},
            {"p_profit", s.p_profit},
            {"p_loss", s.p_loss},
            {"replications", s.replications},
            {"seed", s.seed}};
}

json to_json(const CalibrationSummary& s) {
    json j = {{"scenario", to_json(s.scenario)},
              {"alpha_I", s.alpha_I},
              {"confidence", s.confidence},
              {"informative_replicates", s.informative},
              {"binomial_reject_rate", s.binomial_reject_rate},
              {"mcnemar_reject_rate", s.mcnemar_reject_rate},
              {"two_direction_reject_rate", s.two_direction_rate},
              {"analytic_power", s.analytic_power},
              {"ci_coverage", s.ci_coverage},
              {"true_sensitivity", s.scenario.true_sensitivity()}};
    if (s.scenario.is_null()) {
        j["type_I_rate"] = s.binomial_reject_rate;
    } else {
        j["empirical_power"] = s.binomial_reject_rate;
    }
    return j;
}

}  // namespace pairedval
