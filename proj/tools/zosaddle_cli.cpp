// Command-line harness for the zeroth-order saddle-point solvers: batch
// experiments from a config file, the one-command matrix-game benchmark,
// estimator bound verification, and trace plotting.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "zosaddle/zosaddle.hpp"

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    return out;
}

// precedence: CLI flag > ZOSADDLE_OUTPUT_DIR > config file / default
std::string resolve_output_dir(const std::string& flag_value, const std::string& fallback) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("ZOSADDLE_OUTPUT_DIR"); env && *env) return env;
    return fallback;
}

void print_manifest(const zosaddle::FileManifest& m) {
    for (const auto& f : m.trace_files) std::cout << "trace " << f << "\n";
    if (!m.metadata_file.empty()) std::cout << "metadata " << m.metadata_file << "\n";
    if (!m.plot_file.empty()) std::cout << "plot " << m.plot_file << "\n";
    for (const auto& e : m.errors) std::cout << "cell-error " << e << "\n";
}

int cmd_run(const std::string& config_path, const std::map<std::string, std::string>& overrides,
            const std::string& out_flag) {
    zosaddle::ExperimentConfig cfg = zosaddle::load_experiment_config(config_path);
    for (const auto& [k, v] : overrides) zosaddle::apply_override(cfg, k, v);
    cfg.output_dir = resolve_output_dir(out_flag, cfg.output_dir);
    zosaddle::FileManifest m = zosaddle::run_experiment(cfg);
    print_manifest(m);
    if (!m.errors.empty()) {
        std::cerr << "{\"error\":\"" << json_escape(std::to_string(m.errors.size()) +
                                                    " cell(s) failed; see metadata.json")
                  << "\"}" << std::endl;
        return 1;
    }
    return 0;
}

int cmd_fig3(std::uint64_t seed, std::size_t n, long long budget, const std::string& out_flag) {
    std::string dir = resolve_output_dir(out_flag, "fig3_out");
    zosaddle::FileManifest m = zosaddle::reproduce_figure3(seed, n, budget, dir);
    print_manifest(m);
    return m.errors.empty() ? 0 : 1;
}

int cmd_verify(const std::string& grid, std::size_t samples, std::uint64_t seed) {
    bool full = grid == "full";
    if (!full && grid != "small") throw std::invalid_argument("--grid must be small or full");
    auto checks = zosaddle::verify_estimator_bounds(full, samples, seed);
    int failures = 0;
    for (const auto& c : checks) {
        std::printf("%s %-44s measured=%-12.5g bound=%-12.5g stderr=%.3g\n",
                    c.pass ? "PASS" : "FAIL", c.label.c_str(), c.measured, c.bound,
                    c.stderr_mean);
        if (!c.pass) ++failures;
    }
    std::printf("%d/%zu checks passed\n", static_cast<int>(checks.size()) - failures,
                checks.size());
    return failures == 0 ? 0 : 1;
}

int cmd_plot(const std::vector<std::string>& files, const std::string& out,
             const std::string& x_col, const std::string& y_col, bool log_x,
             const std::string& title) {
    std::map<std::string, zosaddle::TraceSeries> by_cell;
    std::vector<std::string> order;
    for (const auto& f : files) {
        for (const auto& row : zosaddle::read_trace_csv(f)) {
            std::optional<double> y;
            if (y_col == "eps_sad") y = row.eps_sad;
            else if (y_col == "residual_F") y = row.residual_F;
            else if (y_col == "bregman") y = row.bregman;
            else if (y_col == "euclid_sq") y = row.euclid_sq;
            else throw std::invalid_argument("unknown metric column: " + y_col);
            double x;
            if (x_col == "oracle_calls") x = static_cast<double>(row.oracle_calls);
            else if (x_col == "k") x = static_cast<double>(row.k);
            else throw std::invalid_argument("unknown x column: " + x_col);
            if (!by_cell.count(row.cell_id)) order.push_back(row.cell_id);
            auto& s = by_cell[row.cell_id];
            s.label = row.cell_id;
            if (y) s.points.emplace_back(x, *y);
        }
    }
    std::vector<zosaddle::TraceSeries> series;
    for (const auto& id : order) series.push_back(by_cell[id]);
    zosaddle::PlotSpec spec;
    spec.x_label = x_col;
    spec.y_label = y_col;
    spec.log_x = log_x;
    spec.title = title;
    zosaddle::render_plot(series, spec, out);
    std::cout << "plot " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zeroth-order saddle-point benchmark harness"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run an experiment described by a config file");
    std::string config_path, run_out;
    std::map<std::string, std::string> overrides;
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--out", run_out, "output directory (overrides config and env)");
    static const std::vector<std::string> keys = {"trials",   "iterations", "budget",
                                                  "seed",     "cadence",    "sigma",
                                                  "delta_cap", "delta_kind", "name"};
    std::map<std::string, std::string> flag_vals;
    for (const auto& k : keys)
        run->add_option("--" + k, flag_vals[k], "override config key '" + k + "'");

    auto* fig3 = app.add_subcommand("reproduce-fig3",
                                    "matrix-game benchmark: 4 algorithms x 2 oracles");
    std::uint64_t f_seed = 20;
    std::size_t f_n = 200;
    long long f_budget = 200000;
    std::string f_out;
    fig3->add_option("--seed", f_seed, "payoff generator / run seed");
    fig3->add_option("--n", f_n, "payoff matrix dimension");
    fig3->add_option("--budget", f_budget, "oracle-call budget per cell");
    fig3->add_option("--out", f_out, "output directory");

    auto* verify = app.add_subcommand("verify-lemma1",
                                      "Monte-Carlo check of the estimator moment bounds");
    std::string v_grid = "small";
    std::size_t v_samples = 20000;
    std::uint64_t v_seed = 7;
    verify->add_option("--grid", v_grid, "grid size: small or full");
    verify->add_option("--samples", v_samples, "Monte-Carlo samples per check");
    verify->add_option("--seed", v_seed, "random seed");

    auto* plot = app.add_subcommand("plot", "render trace CSVs into an SVG chart");
    std::vector<std::string> p_files;
    std::string p_out = "plot.svg", p_x = "oracle_calls", p_y = "eps_sad", p_title;
    bool p_logx = false;
    plot->add_option("files", p_files, "trace CSV files")->required()->expected(-1);
    plot->add_option("--out", p_out, "output SVG path");
    plot->add_option("--x", p_x, "x column: oracle_calls or k");
    plot->add_option("--y", p_y, "metric column: eps_sad, residual_F, bregman, euclid_sq");
    plot->add_flag("--logx", p_logx, "log-scale the x axis");
    plot->add_option("--title", p_title, "chart title");

    try {
        app.parse(argc, argv);
        if (*run) {
            for (const auto& [k, v] : flag_vals)
                if (!v.empty()) overrides[k] = v;
            return cmd_run(config_path, overrides, run_out);
        }
        if (*fig3) return cmd_fig3(f_seed, f_n, f_budget, f_out);
        if (*verify) return cmd_verify(v_grid, v_samples, v_seed);
        if (*plot) return cmd_plot(p_files, p_out, p_x, p_y, p_logx, p_title);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"" << json_escape(e.what()) << "\"}" << std::endl;
        return 1;
    }
    return 0;
}
