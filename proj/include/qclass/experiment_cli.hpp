// Experiment configuration, command implementations and CSV/JSON result writers
// behind the `qclass` command-line tool.

#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qclass/asymptotics.hpp"
#include "qclass/gaussian_model.hpp"
#include "qclass/helstrom.hpp"
#include "qclass/local_geometry.hpp"
#include "qclass/qubit_experiment.hpp"

namespace qclass::cli {

using Json = nlohmann::ordered_json;

/// Malformed or incomplete configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Command { Report, GaussianSim, QubitSim, Sweep };
enum class OutputFormat { Csv, Json };

inline std::optional<Command> parse_command(std::string_view name) {
    if (name == "report") return Command::Report;
    if (name == "gaussian-sim") return Command::GaussianSim;
    if (name == "qubit-sim") return Command::QubitSim;
    if (name == "sweep") return Command::Sweep;
    return std::nullopt;
}

inline std::optional<OutputFormat> parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    return std::nullopt;
}

struct ProblemConfig {
    Vec3 r0, s0;
    double pi0 = 0.5;
};

struct GaussianSimConfig {
    std::vector<StrategyKind> strategies;
    Vec3 u, v;  // frame coordinates
    double delta = 0.0;
};

struct QubitSimConfig {
    std::vector<std::uint64_t> n_list;
    LabelMode label_mode = LabelMode::RandomLabels;
    bool known_priors = false;
    bool localize = false;
};

/// r0 = r0_length z, s0 = s0_length (sin angle, 0, cos angle).
struct SweepConfig {
    std::vector<double> r0_length, s0_length, angle, pi0;
};

struct ExperimentConfig {
    std::optional<ProblemConfig> problem;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<unsigned> threads;
    std::optional<OutputFormat> format;
    std::optional<std::string> out;
    std::optional<GaussianSimConfig> gaussian;
    std::optional<QubitSimConfig> qubit;
    std::optional<SweepConfig> sweep;
};

namespace detail {

inline void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing required key '" + key + "' in " + where);
    return obj.at(key);
}

inline double as_number(const Json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ConfigError(what + " must be finite");
    return x;
}

inline std::uint64_t as_unsigned(const Json& j, const std::string& what) {
    if (!j.is_number_unsigned()) throw ConfigError(what + " must be a non-negative integer");
    return j.get<std::uint64_t>();
}

inline bool as_bool(const Json& j, const std::string& what) {
    if (!j.is_boolean()) throw ConfigError(what + " must be true or false");
    return j.get<bool>();
}

inline Vec3 as_vec3(const Json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(what + " must be an array of 3 numbers");
    return {as_number(j[0], what), as_number(j[1], what), as_number(j[2], what)};
}

inline std::vector<double> as_number_list(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(as_number(x, what));
    return out;
}

inline StrategyKind parse_strategy(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        for (auto k : {StrategyKind::OptimalJoint, StrategyKind::HeterodynePlugin,
                       StrategyKind::OptimalJointUnknownPriors})
            if (s == to_string(k)) return k;
    }
    throw ConfigError("gaussian.strategies entries must be one of optimal-joint, heterodyne-plugin, "
                      "optimal-joint-unknown-priors");
}

}  // namespace detail

/// Parses the JSON configuration. Unknown keys are rejected; presence of the
/// sections a command needs is checked by validate_config.
inline ExperimentConfig parse_config(const Json& j) {
    using namespace detail;
    check_keys(j, {"problem", "seed", "trials", "threads", "format", "out", "gaussian", "qubit", "sweep"}, "config");
    ExperimentConfig cfg;
    if (j.contains("problem")) {
        const Json& p = j.at("problem");
        check_keys(p, {"r0", "s0", "pi0"}, "problem");
        cfg.problem = ProblemConfig{as_vec3(require(p, "r0", "problem"), "problem.r0"),
                                    as_vec3(require(p, "s0", "problem"), "problem.s0"),
                                    as_number(require(p, "pi0", "problem"), "problem.pi0")};
    }
    if (j.contains("seed")) cfg.seed = as_unsigned(j.at("seed"), "seed");
    if (j.contains("trials")) cfg.trials = as_unsigned(j.at("trials"), "trials");
    if (j.contains("threads")) cfg.threads = static_cast<unsigned>(as_unsigned(j.at("threads"), "threads"));
    if (j.contains("format")) {
        const Json& f = j.at("format");
        if (!f.is_string() || !parse_format(f.get<std::string>())) throw ConfigError("format must be csv or json");
        cfg.format = parse_format(f.get<std::string>());
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string()) throw ConfigError("out must be a string path");
        cfg.out = j.at("out").get<std::string>();
    }
    if (j.contains("gaussian")) {
        const Json& g = j.at("gaussian");
        check_keys(g, {"strategies", "u", "v", "delta"}, "gaussian");
        GaussianSimConfig gc;
        const Json& list = require(g, "strategies", "gaussian");
        if (!list.is_array()) throw ConfigError("gaussian.strategies must be an array");
        for (const auto& s : list) gc.strategies.push_back(parse_strategy(s));
        gc.u = as_vec3(require(g, "u", "gaussian"), "gaussian.u");
        gc.v = as_vec3(require(g, "v", "gaussian"), "gaussian.v");
        gc.delta = as_number(require(g, "delta", "gaussian"), "gaussian.delta");
        cfg.gaussian = gc;
    }
    if (j.contains("qubit")) {
        const Json& q = j.at("qubit");
        check_keys(q, {"n_list", "label_mode", "known_priors", "localize"}, "qubit");
        QubitSimConfig qc;
        const Json& list = require(q, "n_list", "qubit");
        if (!list.is_array()) throw ConfigError("qubit.n_list must be an array");
        for (const auto& n : list) qc.n_list.push_back(as_unsigned(n, "qubit.n_list entries"));
        const Json& mode = require(q, "label_mode", "qubit");
        if (mode == "random-labels")
            qc.label_mode = LabelMode::RandomLabels;
        else if (mode == "fixed-counts")
            qc.label_mode = LabelMode::FixedCounts;
        else
            throw ConfigError("qubit.label_mode must be random-labels or fixed-counts");
        qc.known_priors = as_bool(require(q, "known_priors", "qubit"), "qubit.known_priors");
        qc.localize = as_bool(require(q, "localize", "qubit"), "qubit.localize");
        cfg.qubit = qc;
    }
    if (j.contains("sweep")) {
        const Json& s = j.at("sweep");
        check_keys(s, {"r0_length", "s0_length", "angle", "pi0"}, "sweep");
        cfg.sweep = SweepConfig{as_number_list(require(s, "r0_length", "sweep"), "sweep.r0_length"),
                                as_number_list(require(s, "s0_length", "sweep"), "sweep.s0_length"),
                                as_number_list(require(s, "angle", "sweep"), "sweep.angle"),
                                as_number_list(require(s, "pi0", "sweep"), "sweep.pi0")};
    }
    return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// Result rows.

using Value = std::variant<double, std::string>;

struct ResultRow {
    std::vector<std::pair<std::string, Json>> params;  // emitted as param.<name>
    std::string metric;
    Value value;
    std::optional<double> std_error;
    std::optional<std::uint64_t> n;
    std::optional<double> reference;  // closed-form or derived constant to compare with
};

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_value(const Json& j) {
    if (j.is_string()) return csv_field(j.get<std::string>());
    if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
    if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    if (j.is_number()) return format_double(j.get<double>());
    return csv_field(j.dump());
}

inline void check_uniform_params(const std::vector<ResultRow>& rows) {
    for (const auto& row : rows) {
        if (row.params.size() != rows.front().params.size())
            throw NumericalError("result rows disagree on parameter columns");
        for (std::size_t i = 0; i < row.params.size(); ++i)
            if (row.params[i].first != rows.front().params[i].first)
                throw NumericalError("result rows disagree on parameter columns");
    }
}

}  // namespace detail

/// Header: param.* columns, then metric,value,stderr,n,reference.
inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    if (rows.empty()) return;
    detail::check_uniform_params(rows);
    for (const auto& [name, _] : rows.front().params) os << "param." << name << ',';
    os << "metric,value,stderr,n,reference\n";
    for (const auto& row : rows) {
        for (const auto& [_, v] : row.params) os << detail::csv_value(v) << ',';
        os << detail::csv_field(row.metric) << ',';
        if (const double* d = std::get_if<double>(&row.value))
            os << format_double(*d);
        else
            os << detail::csv_field(std::get<std::string>(row.value));
        os << ',' << (row.std_error ? format_double(*row.std_error) : "");
        os << ',' << (row.n ? std::to_string(*row.n) : "");
        os << ',' << (row.reference ? format_double(*row.reference) : "") << '\n';
    }
}

inline Json rows_to_json(const std::vector<ResultRow>& rows) {
    detail::check_uniform_params(rows);
    Json arr = Json::array();
    for (const auto& row : rows) {
        Json obj = Json::object();
        for (const auto& [name, v] : row.params) obj["param." + name] = v;
        obj["metric"] = row.metric;
        if (const double* d = std::get_if<double>(&row.value))
            obj["value"] = *d;
        else
            obj["value"] = std::get<std::string>(row.value);
        obj["stderr"] = row.std_error ? Json(*row.std_error) : Json(nullptr);
        obj["n"] = row.n ? Json(*row.n) : Json(nullptr);
        obj["reference"] = row.reference ? Json(*row.reference) : Json(nullptr);
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline void write_json(std::ostream& os, const std::vector<ResultRow>& rows) { os << rows_to_json(rows).dump(2) << '\n'; }

inline void write_rows(std::ostream& os, const std::vector<ResultRow>& rows, OutputFormat format) {
    if (format == OutputFormat::Csv)
        write_csv(os, rows);
    else
        write_json(os, rows);
}

// ---------------------------------------------------------------------------
// Commands.

namespace detail {

using Params = std::vector<std::pair<std::string, Json>>;

inline Params problem_params(const ProblemConfig& p) {
    return {{"r0_x", p.r0.x}, {"r0_y", p.r0.y}, {"r0_z", p.r0.z}, {"s0_x", p.s0.x},
            {"s0_y", p.s0.y}, {"s0_z", p.s0.z}, {"pi0", p.pi0}};
}

inline void append(Params& a, const Params& b) { a.insert(a.end(), b.begin(), b.end()); }

template <class T>
const T& need(const std::optional<T>& x, const char* what) {
    if (!x) throw ConfigError(std::string("config is missing required field '") + what + "'");
    return *x;
}

// Validated problem. Throws InvalidStateError / PreconditionError on bad input.
struct CheckedProblem {
    BlochVector r0, s0;
    double pi0;
    TrivialityVerdict verdict;
    std::optional<LocalFrame> frame;  // present iff nontrivial
};

inline CheckedProblem check_problem(const ProblemConfig& p) {
    if (!(p.pi0 > 0.0 && p.pi0 < 1.0)) throw PreconditionError("problem.pi0 must lie in (0, 1)");
    CheckedProblem c{BlochVector(p.r0), BlochVector(p.s0), p.pi0, {}, std::nullopt};
    c.verdict = triviality_check(c.r0, c.s0, p.pi0);
    if (c.verdict.kind == TrivialityKind::Nontrivial) c.frame = build_frame(c.r0, c.s0, p.pi0);
    return c;
}

inline std::vector<ResultRow> report_rows(const CheckedProblem& c, const Params& params) {
    std::vector<ResultRow> rows;
    auto add = [&](std::string metric, Value v) { rows.push_back({params, std::move(metric), std::move(v), {}, {}, {}}); };
    add("verdict", std::string(to_string(c.verdict.kind)));
    add("helstrom_risk", helstrom_risk(ClassificationProblem::from_bloch(c.r0, c.s0, c.pi0)));
    if (c.frame) {
        const RiskReport r = make_risk_report(*c.frame);
        add("classical_term", r.classical_term);
        add("quantum_term", r.quantum_term);
        add("commutator_c", r.commutator_c);
        add("optimal_risk", r.optimal_risk);
        add("plugin_risk", r.plugin_risk);
        add("gap", r.gap);
        add("prior_correction", r.prior_correction);
    }
    return rows;
}

}  // namespace detail

/// Closed-form constants. Trivial or degenerate configurations give only the
/// verdict and the Helstrom risk.
inline std::vector<ResultRow> cmd_report(const ExperimentConfig& cfg) {
    const auto& p = detail::need(cfg.problem, "problem");
    const auto checked = detail::check_problem(p);
    return detail::report_rows(checked, detail::problem_params(p));
}

/// Monte Carlo risk of each configured strategy in the Gaussian limit model,
/// with the matching closed-form constant in the reference column.
inline std::vector<ResultRow> cmd_gaussian_sim(const ExperimentConfig& cfg) {
    const auto& p = detail::need(cfg.problem, "problem");
    const auto seed = detail::need(cfg.seed, "seed");
    const auto trials = detail::need(cfg.trials, "trials");
    const auto& g = detail::need(cfg.gaussian, "gaussian");
    if (trials < 1) throw PreconditionError("trials must be >= 1");
    if (g.strategies.empty()) throw ConfigError("gaussian.strategies must not be empty");
    const auto checked = detail::check_problem(p);
    if (!checked.frame)
        throw PreconditionError("gaussian-sim needs a nontrivial configuration, got " +
                                std::string(to_string(checked.verdict.kind)));
    const LocalFrame& frame = *checked.frame;

    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < g.strategies.size(); ++i) {
        const StrategyKind k = g.strategies[i];
        auto params = detail::problem_params(p);
        detail::append(params, {{"strategy", std::string(to_string(k))},
                                {"u1", g.u.x}, {"u2", g.u.y}, {"u3", g.u.z},
                                {"v1", g.v.x}, {"v2", g.v.y}, {"v3", g.v.z},
                                {"delta", g.delta}, {"trials", trials}, {"seed", seed}});
        MonteCarloOptions opt{trials, derive_seed(seed, i), cfg.threads.value_or(0), g.delta};
        const auto res = monte_carlo_risk(k, frame, g.u, g.v, opt);
        rows.push_back({params, "mc_rescaled_risk", res.mean_rescaled_excess, res.std_error, std::nullopt,
                        closed_form_risk(k, frame)});
    }
    return rows;
}

/// Rescaled excess-risk curve of the Pauli-tomography plug-in. The reference
/// column carries the delta-method constant for nontrivial configurations.
inline std::vector<ResultRow> cmd_qubit_sim(const ExperimentConfig& cfg) {
    const auto& p = detail::need(cfg.problem, "problem");
    const auto seed = detail::need(cfg.seed, "seed");
    const auto trials = detail::need(cfg.trials, "trials");
    const auto& q = detail::need(cfg.qubit, "qubit");
    if (trials < 1) throw PreconditionError("trials must be >= 1");
    if (q.n_list.empty()) throw ConfigError("qubit.n_list must not be empty");
    for (std::size_t i = 1; i < q.n_list.size(); ++i)
        if (q.n_list[i] <= q.n_list[i - 1]) throw ConfigError("qubit.n_list must be strictly ascending");
    const auto checked = detail::check_problem(p);
    if (q.label_mode == LabelMode::FixedCounts) {
        for (const auto n : q.n_list) {
            const auto n0 = static_cast<std::uint64_t>(std::llround(p.pi0 * static_cast<double>(n)));
            if (n0 < 3 || n - n0 < 3)
                throw PreconditionError("fixed-counts training set with n = " + std::to_string(n) +
                                        " has fewer than 3 copies of a state");
        }
    } else if (q.n_list.front() < 6) {
        throw PreconditionError("qubit.n_list entries must be >= 6");
    }

    TrainingSetSpec templ{0, ClassificationProblem::from_bloch(checked.r0, checked.s0, p.pi0), q.label_mode,
                          q.known_priors, q.localize};
    const auto curve = rescaled_risk_curve(templ, q.n_list, trials, seed, cfg.threads.value_or(0));

    std::optional<double> reference;
    if (checked.frame) reference = tomography_delta_constant(*checked.frame, q.label_mode, q.known_priors);

    auto params = detail::problem_params(p);
    detail::append(params, {{"label_mode", std::string(to_string(q.label_mode))},
                            {"known_priors", q.known_priors},
                            {"localize", q.localize},
                            {"trials", trials},
                            {"seed", seed}});
    std::vector<ResultRow> rows;
    for (const auto& r : curve) {
        rows.push_back({params, "mean_rescaled_excess", r.mean_rescaled_excess, r.std_error, r.n, reference});
        rows.push_back({params, "fraction_exact", r.fraction_exact, std::nullopt, r.n, std::nullopt});
        rows.push_back({params, "fraction_clipped", r.fraction_clipped, std::nullopt, r.n, std::nullopt});
    }
    return rows;
}

/// Report at every point of the grid r0_length x s0_length x angle x pi0
/// (last index fastest). All points are validated before any is evaluated.
inline std::vector<ResultRow> cmd_sweep(const ExperimentConfig& cfg) {
    const auto& s = detail::need(cfg.sweep, "sweep");
    if (s.r0_length.empty() || s.s0_length.empty() || s.angle.empty() || s.pi0.empty())
        throw ConfigError("every sweep grid must be nonempty");

    struct Point {
        double r_len, s_len, angle, pi0;
        detail::CheckedProblem checked;
    };
    std::vector<Point> points;
    for (double r_len : s.r0_length)
        for (double s_len : s.s0_length)
            for (double angle : s.angle)
                for (double pi0 : s.pi0) {
                    const ProblemConfig p{{0.0, 0.0, r_len}, {s_len * std::sin(angle), 0.0, s_len * std::cos(angle)}, pi0};
                    points.push_back({r_len, s_len, angle, pi0, detail::check_problem(p)});
                }

    std::vector<ResultRow> rows;
    for (const auto& pt : points) {
        const detail::Params params{{"r0_length", pt.r_len}, {"s0_length", pt.s_len}, {"angle", pt.angle}, {"pi0", pt.pi0}};
        auto part = detail::report_rows(pt.checked, params);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

inline std::vector<ResultRow> run_command(Command c, const ExperimentConfig& cfg) {
    switch (c) {
        case Command::Report: return cmd_report(cfg);
        case Command::GaussianSim: return cmd_gaussian_sim(cfg);
        case Command::QubitSim: return cmd_qubit_sim(cfg);
        case Command::Sweep: return cmd_sweep(cfg);
    }
    throw ConfigError("unknown command");
}

/// Exit codes: 0 success, 2 configuration or validation error, 3 runtime numerical error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

}  // namespace qclass::cli
