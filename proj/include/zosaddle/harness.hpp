#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zosaddle/algorithms.hpp"
#include "zosaddle/plot.hpp"
#include "zosaddle/version.hpp"

namespace zosaddle {

// ---------------------------------------------------------------------------
// enum <-> string
// ---------------------------------------------------------------------------

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::zovia: return "zovia";
        case Algorithm::zoesvia: return "zoesvia";
        case Algorithm::zosc_esvia: return "zosc_esvia";
        case Algorithm::zoesvia_same_direction: return "zoesvia_same_direction";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "zovia") return Algorithm::zovia;
    if (s == "zoesvia") return Algorithm::zoesvia;
    if (s == "zosc_esvia") return Algorithm::zosc_esvia;
    if (s == "zoesvia_same_direction") return Algorithm::zoesvia_same_direction;
    throw std::invalid_argument("unknown algorithm: " + s);
}

inline std::string to_string(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::random_direction: return "random_direction";
        case EstimatorKind::full_coordinate: return "full_coordinate";
        case EstimatorKind::mixed: return "mixed";
    }
    return "?";
}

inline EstimatorKind parse_estimator(const std::string& s) {
    if (s == "random_direction") return EstimatorKind::random_direction;
    if (s == "full_coordinate") return EstimatorKind::full_coordinate;
    if (s == "mixed") return EstimatorKind::mixed;
    throw std::invalid_argument("unknown estimator: " + s);
}

inline std::string to_string(DirectionMode m) {
    return m == DirectionMode::joint_split ? "joint_split" : "independent_blocks";
}

inline DirectionMode parse_direction_mode(const std::string& s) {
    if (s == "joint_split") return DirectionMode::joint_split;
    if (s == "independent_blocks") return DirectionMode::independent_blocks;
    throw std::invalid_argument("unknown direction mode: " + s);
}

inline std::string to_string(OutputMode m) {
    return m == OutputMode::averaged ? "averaged" : "last_iterate";
}

inline OutputMode parse_output_mode(const std::string& s) {
    if (s == "averaged") return OutputMode::averaged;
    if (s == "last_iterate") return OutputMode::last_iterate;
    throw std::invalid_argument("unknown output mode: " + s);
}

inline std::string to_string(DeltaKind k) {
    switch (k) {
        case DeltaKind::zero: return "zero";
        case DeltaKind::sine_adversarial: return "sine_adversarial";
        case DeltaKind::custom: return "custom";
    }
    return "?";
}

inline DeltaKind parse_delta_kind(const std::string& s) {
    if (s == "zero") return DeltaKind::zero;
    if (s == "sine_adversarial") return DeltaKind::sine_adversarial;
    throw std::invalid_argument("unknown delta kind: " + s);
}

// ---------------------------------------------------------------------------
// config file (key/value lines grouped into repeatable [section]s)
// ---------------------------------------------------------------------------

struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline std::vector<ConfigSection> parse_config_sections(std::istream& in) {
    std::vector<ConfigSection> sections;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            sections.push_back(ConfigSection{detail::trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        if (sections.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside any [section]");
        sections.back().entries.emplace_back(detail::trim(line.substr(0, eq)),
                                             detail::trim(line.substr(eq + 1)));
    }
    return sections;
}

// ---------------------------------------------------------------------------
// experiment configuration
// ---------------------------------------------------------------------------

enum class ProblemKind { paper_matrix, matrix_csv, sc_quadratic, lagrangian_toy };

struct ProblemSelector {
    ProblemKind kind = ProblemKind::paper_matrix;
    std::size_t n = 200;            // paper_matrix dimension
    std::uint64_t matrix_seed = 0;  // paper_matrix seed
    std::string csv_path;           // matrix_csv source
    std::size_t nx = 5, ny = 5;     // sc_quadratic dims
    double mu = 1.0;
    std::uint64_t a_seed = 1;
    double a_scale = 1.0;  // spectral norm of the coupling matrix
    double radius = 10.0;
};

struct CellConfig {
    std::string id;  // defaults to "<algorithm>/<estimator>"
    Algorithm algorithm = Algorithm::zoesvia;
    EstimatorKind estimator = EstimatorKind::full_coordinate;
    DirectionMode direction_mode = DirectionMode::joint_split;
    double gamma = 0.0;  // 0 = pick a default from the problem constants
    double tau = 1e-3;
    OutputMode output_mode = OutputMode::averaged;
};

struct ExperimentConfig {
    std::string name = "experiment";
    ProblemSelector problem;
    std::vector<CellConfig> cells;
    int trials = 1;
    std::uint64_t base_seed = 0;
    long iterations = 0;          // per cell; 0 means budget-driven
    long long oracle_budget = 0;  // per cell; 0 means iteration-driven
    int trace_cadence = 0;        // 0 = auto (~240 records per run)
    std::string output_dir = "out";
    double sigma = 0.0;
    double delta_cap = 0.0;
    DeltaKind delta_kind = DeltaKind::zero;
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& v) { return std::stoull(v); }
inline long long parse_i64(const std::string& v) { return std::stoll(v); }

inline void apply_experiment_entry(ExperimentConfig& cfg, const std::string& k,
                                   const std::string& v) {
    if (k == "name") cfg.name = v;
    else if (k == "trials") cfg.trials = static_cast<int>(parse_i64(v));
    else if (k == "base_seed" || k == "seed") cfg.base_seed = parse_u64(v);
    else if (k == "iterations") cfg.iterations = static_cast<long>(parse_i64(v));
    else if (k == "oracle_budget" || k == "budget") cfg.oracle_budget = parse_i64(v);
    else if (k == "trace_cadence" || k == "cadence") cfg.trace_cadence = static_cast<int>(parse_i64(v));
    else if (k == "output_dir") cfg.output_dir = v;
    else if (k == "sigma") cfg.sigma = std::stod(v);
    else if (k == "delta_cap") cfg.delta_cap = std::stod(v);
    else if (k == "delta_kind") cfg.delta_kind = parse_delta_kind(v);
    else throw std::invalid_argument("unknown [experiment] key: " + k);
}

inline void apply_problem_entry(ProblemSelector& p, const std::string& k, const std::string& v) {
    if (k == "kind") {
        if (v == "paper_matrix") p.kind = ProblemKind::paper_matrix;
        else if (v == "matrix_csv") p.kind = ProblemKind::matrix_csv;
        else if (v == "sc_quadratic") p.kind = ProblemKind::sc_quadratic;
        else if (v == "lagrangian_toy") p.kind = ProblemKind::lagrangian_toy;
        else throw std::invalid_argument("unknown problem kind: " + v);
    } else if (k == "n") p.n = static_cast<std::size_t>(parse_u64(v));
    else if (k == "seed") p.matrix_seed = parse_u64(v);
    else if (k == "csv") p.csv_path = v;
    else if (k == "nx") p.nx = static_cast<std::size_t>(parse_u64(v));
    else if (k == "ny") p.ny = static_cast<std::size_t>(parse_u64(v));
    else if (k == "mu") p.mu = std::stod(v);
    else if (k == "a_seed") p.a_seed = parse_u64(v);
    else if (k == "a_scale") p.a_scale = std::stod(v);
    else if (k == "radius") p.radius = std::stod(v);
    else throw std::invalid_argument("unknown [problem] key: " + k);
}

inline void apply_cell_entry(CellConfig& c, const std::string& k, const std::string& v) {
    if (k == "id") c.id = v;
    else if (k == "algorithm") c.algorithm = parse_algorithm(v);
    else if (k == "estimator") c.estimator = parse_estimator(v);
    else if (k == "direction_mode") c.direction_mode = parse_direction_mode(v);
    else if (k == "gamma") c.gamma = std::stod(v);
    else if (k == "tau") c.tau = std::stod(v);
    else if (k == "output_mode") c.output_mode = parse_output_mode(v);
    else throw std::invalid_argument("unknown [cell] key: " + k);
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig cfg;
    for (const auto& sec : parse_config_sections(in)) {
        if (sec.name == "experiment") {
            for (const auto& [k, v] : sec.entries) detail::apply_experiment_entry(cfg, k, v);
        } else if (sec.name == "problem") {
            for (const auto& [k, v] : sec.entries) detail::apply_problem_entry(cfg.problem, k, v);
        } else if (sec.name == "cell") {
            CellConfig c;
            for (const auto& [k, v] : sec.entries) detail::apply_cell_entry(c, k, v);
            cfg.cells.push_back(std::move(c));
        } else {
            throw std::invalid_argument("unknown config section: [" + sec.name + "]");
        }
    }
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    return parse_experiment_config(in);
}

/// CLI-flag style override, applied after the file is parsed.
inline void apply_override(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value) {
    if (key == "output_dir") {
        cfg.output_dir = value;
        return;
    }
    detail::apply_experiment_entry(cfg, key, value);
}

// ---------------------------------------------------------------------------
// experiment execution
// ---------------------------------------------------------------------------

inline ProblemSpec build_problem(const ProblemSelector& sel) {
    switch (sel.kind) {
        case ProblemKind::paper_matrix:
            return make_matrix_game(generate_paper_matrix(sel.n, sel.matrix_seed));
        case ProblemKind::matrix_csv:
            return make_matrix_game(load_matrix_csv(sel.csv_path));
        case ProblemKind::sc_quadratic: {
            RandomStream rng(sel.a_seed);
            Matrix A(sel.nx, sel.ny);
            for (double& v : A.a) v = rng.normal();
            double s = spectral_norm(A);
            if (s > 0.0)
                for (double& v : A.a) v *= sel.a_scale / s;
            return make_sc_quadratic(sel.nx, sel.ny, sel.mu, std::move(A), sel.radius);
        }
        case ProblemKind::lagrangian_toy:
            return make_lagrangian_toy();
    }
    throw std::invalid_argument("unknown problem kind");
}

/// Geometry used for one cell: entropy prox on simplex games, except the
/// single-call extra-step method which needs p = 2 and therefore runs with
/// Euclidean projection onto the simplex.
inline GeometrySetup setup_for_cell(const ProblemSpec& problem, Algorithm alg) {
    if (problem.set.is_simplex_product() && alg != Algorithm::zosc_esvia)
        return entropy_simplex_setup(problem.nx, problem.ny);
    return euclidean_setup(problem.set);
}

/// Default step size used when a cell does not pin gamma: 1/(2 max|C_ij|)
/// for entropy-geometry matrix games (the (1, inf)-pairing Lipschitz bound),
/// 1/(6 L) for the single-call method, 1/(2 L) otherwise.
inline double default_gamma(const ProblemSpec& problem, const CellConfig& cell) {
    if (cell.algorithm == Algorithm::zosc_esvia) return 1.0 / (6.0 * problem.constants.L);
    if (problem.payoff && problem.set.is_simplex_product())
        return 1.0 / (2.0 * max_abs(*problem.payoff));
    return 1.0 / (2.0 * problem.constants.L);
}

inline int estimator_calls_per_sample(const ProblemSpec& p, EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::random_direction: return 3;
        case EstimatorKind::full_coordinate: return static_cast<int>(p.nx + p.ny) + 1;
        case EstimatorKind::mixed: return static_cast<int>(p.nx) + 2;  // nx+1 evals + 1 gradient
    }
    return 1;
}

inline int estimator_samples_per_iteration(Algorithm alg) {
    return (alg == Algorithm::zoesvia || alg == Algorithm::zoesvia_same_direction) ? 2 : 1;
}

namespace detail {

inline std::string slugify(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
    return out;
}

inline std::string metric_cell(const std::optional<double>& v) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

}  // namespace detail

inline constexpr const char* kTraceHeader =
    "cell_id,trial,k,oracle_calls,eps_sad,residual_F,bregman,euclid_sq,wall_ms";

inline void write_trace_rows(std::ostream& out, const std::string& cell_id, int trial,
                             std::span<const TraceRecord> rows) {
    char wall[32];
    for (const auto& r : rows) {
        std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
        out << cell_id << ',' << trial << ',' << r.k << ',' << r.oracle_calls << ','
            << detail::metric_cell(r.eps_sad) << ',' << detail::metric_cell(r.residual_F) << ','
            << detail::metric_cell(r.bregman_to_solution) << ','
            << detail::metric_cell(r.euclid_sq_to_solution) << ',' << wall << '\n';
    }
}

struct TraceRow {
    std::string cell_id;
    int trial = 0;
    long k = 0;
    long long oracle_calls = 0;
    std::optional<double> eps_sad, residual_F, bregman, euclid_sq;
    double wall_ms = 0.0;
};

inline std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trace file: " + path.string());
    if (detail::trim(line) != kTraceHeader)
        throw std::runtime_error("unexpected trace header in " + path.string());
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        TraceRow r;
        auto next = [&]() {
            if (!std::getline(ls, cell, ',')) throw std::runtime_error("short trace row");
            return cell;
        };
        r.cell_id = next();
        r.trial = std::stoi(next());
        r.k = std::stol(next());
        r.oracle_calls = std::stoll(next());
        auto opt = [&]() -> std::optional<double> {
            std::string s = next();
            if (s.empty()) return std::nullopt;
            return std::stod(s);
        };
        r.eps_sad = opt();
        r.residual_F = opt();
        r.bregman = opt();
        r.euclid_sq = opt();
        std::getline(ls, cell);  // wall_ms, possibly last field
        r.wall_ms = cell.empty() ? 0.0 : std::stod(cell);
        rows.push_back(std::move(r));
    }
    return rows;
}

struct FileManifest {
    std::vector<std::string> trace_files;
    std::string metadata_file;
    std::string plot_file;
    std::vector<std::string> errors;  // per-cell failures, "<cell_id>: <what>"
};

struct ExperimentOutput {
    FileManifest manifest;
    // per cell, in config order: (cell id, per-trial results)
    std::vector<std::pair<std::string, std::vector<RunResult>>> runs;
};

namespace detail {

inline void validate_experiment(const ExperimentConfig& cfg) {
    if (cfg.cells.empty()) throw std::invalid_argument("experiment: need at least one cell");
    if (cfg.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (cfg.iterations <= 0 && cfg.oracle_budget <= 0)
        throw std::invalid_argument("experiment: need an iteration or oracle-call budget");
    if (cfg.trace_cadence < 0) throw std::invalid_argument("experiment: bad trace cadence");
}

inline std::string cell_label(const CellConfig& c) {
    if (!c.id.empty()) return c.id;
    std::string est = to_string(c.estimator);
    return to_string(c.algorithm) + "/" + est;
}

inline int auto_cadence(const ExperimentConfig& cfg, const ProblemSpec& problem,
                        const CellConfig& cell) {
    if (cfg.trace_cadence > 0) return cfg.trace_cadence;
    long iters = cfg.iterations;
    if (iters <= 0) {
        long long per_iter = static_cast<long long>(estimator_calls_per_sample(problem, cell.estimator)) *
                             estimator_samples_per_iteration(cell.algorithm);
        iters = static_cast<long>(cfg.oracle_budget / std::max<long long>(per_iter, 1));
    }
    return std::max(1L, iters / 240);
}

}  // namespace detail

/// Run every (cell x trial), write one CSV per cell plus a metadata file,
/// and return the manifest with in-memory results.  Per-cell failures are
/// recorded and the remaining cells continue.
inline ExperimentOutput run_experiment_collect(const ExperimentConfig& cfg) {
    detail::validate_experiment(cfg);
    namespace fs = std::filesystem;
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    // probe writability before any compute
    fs::path meta_path = dir / "metadata.json";
    {
        std::ofstream probe(meta_path);
        if (!probe) throw std::runtime_error("output directory not writable: " + dir.string());
    }

    ProblemSpec problem = build_problem(cfg.problem);
    NoiseModel noise =
        make_noise(cfg.sigma, cfg.delta_cap, cfg.delta_kind, problem.nx + problem.ny,
                   cfg.base_seed);

    ExperimentOutput out;
    nlohmann::json meta;
    meta["library"] = {{"name", "zosaddle"}, {"version", kVersion}};
    meta["experiment"] = {{"name", cfg.name},
                          {"trials", cfg.trials},
                          {"base_seed", cfg.base_seed},
                          {"iterations", cfg.iterations},
                          {"oracle_budget", cfg.oracle_budget},
                          {"trace_cadence", cfg.trace_cadence},
                          {"output_dir", cfg.output_dir},
                          {"sigma", cfg.sigma},
                          {"delta_cap", cfg.delta_cap},
                          {"delta_kind", to_string(cfg.delta_kind)}};
    meta["problem"] = {{"nx", problem.nx},
                       {"ny", problem.ny},
                       {"L", problem.constants.L},
                       {"L2", problem.constants.L2},
                       {"mu", problem.constants.mu}};
    switch (cfg.problem.kind) {
        case ProblemKind::paper_matrix:
            meta["problem"]["kind"] = "paper_matrix";
            meta["problem"]["n"] = cfg.problem.n;
            meta["problem"]["seed"] = cfg.problem.matrix_seed;
            break;
        case ProblemKind::matrix_csv:
            meta["problem"]["kind"] = "matrix_csv";
            meta["problem"]["csv"] = cfg.problem.csv_path;
            break;
        case ProblemKind::sc_quadratic:
            meta["problem"]["kind"] = "sc_quadratic";
            meta["problem"]["mu"] = cfg.problem.mu;
            meta["problem"]["a_seed"] = cfg.problem.a_seed;
            meta["problem"]["a_scale"] = cfg.problem.a_scale;
            meta["problem"]["radius"] = cfg.problem.radius;
            break;
        case ProblemKind::lagrangian_toy:
            meta["problem"]["kind"] = "lagrangian_toy";
            break;
    }
    meta["cells"] = nlohmann::json::array();
    meta["seeds"] = nlohmann::json::object();

    for (std::size_t ci = 0; ci < cfg.cells.size(); ++ci) {
        const CellConfig& cell = cfg.cells[ci];
        std::string label = detail::cell_label(cell);
        GeometrySetup setup = setup_for_cell(problem, cell.algorithm);
        double gamma = cell.gamma > 0.0 ? cell.gamma : default_gamma(problem, cell);
        int cadence = detail::auto_cadence(cfg, problem, cell);

        nlohmann::json cj = {{"id", label},
                             {"algorithm", to_string(cell.algorithm)},
                             {"estimator", to_string(cell.estimator)},
                             {"direction_mode", to_string(cell.direction_mode)},
                             {"gamma", gamma},
                             {"tau", cell.tau},
                             {"output_mode", to_string(cell.output_mode)},
                             {"trace_cadence", cadence},
                             {"geometry", setup.prox_kind == ProxKind::entropy_simplex
                                              ? "entropy_simplex"
                                              : "squared_euclidean"}};
        if (problem.set.is_simplex_product() && cell.algorithm == Algorithm::zosc_esvia)
            cj["note"] = "p=2 precondition: Euclidean projection onto the simplex instead of "
                         "entropy prox";
        meta["cells"].push_back(cj);

        std::vector<RunResult> results;
        try {
            for (int trial = 0; trial < cfg.trials; ++trial) {
                RunConfig rc;
                rc.algorithm = cell.algorithm;
                rc.estimator = EstimatorConfig{cell.estimator, cell.tau, cell.direction_mode};
                rc.gamma = gamma;
                rc.iterations = cfg.iterations;
                rc.oracle_budget = cfg.oracle_budget;
                rc.trace_cadence = cadence;
                rc.output_mode = cell.output_mode;
                rc.seed = derive_seed(cfg.base_seed, label, static_cast<std::uint64_t>(trial));
                meta["seeds"][label + "/" + std::to_string(trial)] = rc.seed;
                results.push_back(run_algorithm(problem, setup, rc, noise));
            }
        } catch (const std::exception& e) {
            out.manifest.errors.push_back(label + ": " + e.what());
            meta["errors"] = out.manifest.errors;
            continue;
        }

        char idx[8];
        std::snprintf(idx, sizeof idx, "%02zu", ci);
        fs::path tpath = dir / ("trace_" + std::string(idx) + "_" + detail::slugify(label) + ".csv");
        std::ofstream tf(tpath);
        if (!tf) throw std::runtime_error("cannot write trace file: " + tpath.string());
        tf << kTraceHeader << "\n";
        for (int trial = 0; trial < static_cast<int>(results.size()); ++trial)
            write_trace_rows(tf, label, trial, results[trial].trace);
        out.manifest.trace_files.push_back(tpath.string());
        out.runs.emplace_back(label, std::move(results));
    }

    meta["errors"] = out.manifest.errors;
    meta["trace_files"] = out.manifest.trace_files;
    std::ofstream mf(meta_path);
    mf << meta.dump(2) << "\n";
    out.manifest.metadata_file = meta_path.string();
    return out;
}

inline FileManifest run_experiment(const ExperimentConfig& cfg) {
    return run_experiment_collect(cfg).manifest;
}

/// One-command reproduction of the matrix-game benchmark: the generated
/// n x n payoff, all four algorithms with both zeroth-order oracles (eight
/// cells), a shared per-cell oracle budget, and one log-scale gap-vs-calls
/// overlay chart.
inline FileManifest reproduce_figure3(std::uint64_t seed, std::size_t n, long long budget,
                                      const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.name = "matrix-game-benchmark";
    cfg.problem.kind = ProblemKind::paper_matrix;
    cfg.problem.n = n;
    cfg.problem.matrix_seed = seed;
    cfg.trials = 1;
    cfg.base_seed = seed;
    cfg.oracle_budget = budget;
    cfg.output_dir = out_dir;
    for (Algorithm alg : {Algorithm::zovia, Algorithm::zoesvia, Algorithm::zosc_esvia,
                          Algorithm::zoesvia_same_direction}) {
        for (EstimatorKind est :
             {EstimatorKind::random_direction, EstimatorKind::full_coordinate}) {
            CellConfig c;
            c.algorithm = alg;
            c.estimator = est;
            c.tau = 1e-3;
            c.output_mode = OutputMode::averaged;
            cfg.cells.push_back(c);
        }
    }

    ExperimentOutput out = run_experiment_collect(cfg);
    std::vector<TraceSeries> series;
    for (const auto& [label, results] : out.runs) {
        TraceSeries s{label, {}};
        for (const auto& res : results)
            for (const auto& r : res.trace)
                if (r.eps_sad)
                    s.points.emplace_back(static_cast<double>(r.oracle_calls), *r.eps_sad);
        series.push_back(std::move(s));
    }
    PlotSpec spec;
    spec.title = "matrix game " + std::to_string(n) + "x" + std::to_string(n) +
                 ": duality gap of the averaged iterate";
    spec.x_label = "cumulative oracle calls";
    spec.y_label = "duality gap";
    std::filesystem::path plot_path = std::filesystem::path(out_dir) / "benchmark.svg";
    render_plot(series, spec, plot_path);
    out.manifest.plot_file = plot_path.string();
    return out.manifest;
}

// ---------------------------------------------------------------------------
// estimator bound verification grid
// ---------------------------------------------------------------------------

struct BoundCheck {
    std::string label;
    double measured = 0.0;
    double stderr_mean = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// Monte-Carlo check of the estimator bias and second-moment envelopes on
/// the SC-SC quadratic across a (n, q, tau, delta) grid.  Measured values
/// must stay below the bound within 3 standard errors.
inline std::vector<BoundCheck> verify_estimator_bounds(bool full_grid, std::size_t samples,
                                                       std::uint64_t seed) {
    std::vector<BoundCheck> checks;
    std::vector<std::size_t> dims = full_grid ? std::vector<std::size_t>{4, 20, 40}
                                              : std::vector<std::size_t>{4, 20};
    std::vector<double> taus = full_grid ? std::vector<double>{1e-1, 1e-2, 1e-3}
                                         : std::vector<double>{1e-1, 1e-2};
    std::vector<double> deltas{0.0, 1e-4};
    RandomStream rng(seed);

    for (std::size_t n : dims) {
        std::size_t nx = n / 2, ny = n - n / 2;
        RandomStream arng(derive_seed(seed, "bounds-coupling", n));
        Matrix A(nx, ny);
        for (double& v : A.a) v = arng.normal();
        double s = spectral_norm(A);
        for (double& v : A.a) v /= s;
        ProblemSpec problem = make_sc_quadratic(nx, ny, 1.0, std::move(A), 50.0);
        double L = problem.constants.L;

        SaddleIterate z;
        z.x.resize(nx);
        z.y.resize(ny);
        for (double& v : z.x) v = rng.uniform(-0.5, 0.5);
        for (double& v : z.y) v = rng.uniform(-0.5, 0.5);
        Vec fz = problem.analytic_F(z.x, z.y);
        Vec fs = problem.analytic_F(problem.solution->x, problem.solution->y);
        double f_dist_sq = 0.0;
        for (std::size_t i = 0; i < fz.size(); ++i) {
            double d = fz[i] - fs[i];
            f_dist_sq += d * d;
        }
        double f_star_sq = norm2_sq(fs);

        for (NormExponent q : {NormExponent::finite(2.0), NormExponent::infinity()}) {
            std::string qname = q.is_infinite() ? "inf" : "2";
            for (double tau : taus) {
                for (double delta : deltas) {
                    NoiseModel nm = make_noise(0.0, delta,
                                               delta > 0.0 ? DeltaKind::sine_adversarial
                                                           : DeltaKind::zero,
                                               n, seed);
                    EstimatorConfig fc{EstimatorKind::full_coordinate, tau,
                                       DirectionMode::joint_split};
                    // sigma = 0 makes g_f deterministic: one sample settles the bias
                    BiasReport br = estimator_bias_mc(problem, z, fc, nm, q, 1, rng);
                    BoundCheck c;
                    c.label = "fc-bias n=" + std::to_string(n) + " q=" + qname +
                              " tau=" + detail::fmt_g(tau) + " delta=" + detail::fmt_g(delta);
                    c.measured = br.bias_q_norm;
                    c.bound = fc_bias_bound(n, L, tau, delta);
                    c.pass = c.measured <= c.bound;
                    checks.push_back(c);

                    EstimatorConfig rd{EstimatorKind::random_direction, tau,
                                       DirectionMode::joint_split};
                    double sigma = 0.5;
                    NoiseModel nms = make_noise(sigma, delta,
                                                delta > 0.0 ? DeltaKind::sine_adversarial
                                                            : DeltaKind::zero,
                                                n, seed);
                    SecondMomentReport sm =
                        estimator_second_moment_mc(problem, z, rd, nms, q, samples, rng);
                    BoundCheck c2;
                    c2.label = "rd-moment n=" + std::to_string(n) + " q=" + qname +
                               " tau=" + detail::fmt_g(tau) + " delta=" + detail::fmt_g(delta);
                    c2.measured = sm.mean;
                    c2.stderr_mean = sm.stderr_mean;
                    c2.bound = rd_second_moment_bound(n, q, f_dist_sq, f_star_sq, sigma, L, tau,
                                                      delta);
                    c2.pass = c2.measured <= c2.bound + 3.0 * c2.stderr_mean;
                    checks.push_back(c2);

                    SecondMomentReport smf =
                        estimator_second_moment_mc(problem, z, fc, nms, q, samples, rng);
                    BoundCheck c3;
                    c3.label = "fc-moment n=" + std::to_string(n) + " q=" + qname +
                               " tau=" + detail::fmt_g(tau) + " delta=" + detail::fmt_g(delta);
                    c3.measured = smf.mean;
                    c3.stderr_mean = smf.stderr_mean;
                    c3.bound = fc_second_moment_bound(n, sigma, problem.constants.L2, tau, delta);
                    c3.pass = c3.measured <= c3.bound + 3.0 * c3.stderr_mean;
                    checks.push_back(c3);

                    BiasReport rb = estimator_bias_mc(problem, z, rd, nm, q, samples, rng);
                    BoundCheck c4;
                    c4.label = "rd-bias n=" + std::to_string(n) + " q=" + qname +
                               " tau=" + detail::fmt_g(tau) + " delta=" + detail::fmt_g(delta);
                    c4.measured = rb.bias_q_norm;
                    c4.stderr_mean = dual_norm(q, rb.stderr_components);
                    c4.bound = rd_bias_bound(n, q, L, tau, delta);
                    c4.pass = c4.measured <= c4.bound + 3.0 * c4.stderr_mean;
                    checks.push_back(c4);
                }
            }
        }
    }
    return checks;
}

}  // namespace zosaddle
