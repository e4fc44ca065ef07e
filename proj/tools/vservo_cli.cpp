// vservo — simulation laboratory for adaptive image-space visual servoing.
//
// Subcommands:
//   simulate     run a scenario, write trace.csv + summary.json + audit.json
//   check        run the identity/audit suites, report pass/fail
//   plot         render SVG figures from a trace
//   emit-config  write the shipped scenario presets as config files
//
// Exit codes: 0 ok, 2 config error, 3 run aborted, 4 check failures.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vservo/checks.hpp"
#include "vservo/config.hpp"
#include "vservo/numfmt.hpp"
#include "vservo/sim.hpp"
#include "vservo/svgplot.hpp"
#include "vservo/trace_io.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace vservo;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAborted = 3;
constexpr int kExitCheckFailed = 4;

const char* kFooter =
    "Trace CSV format: one header row, comma separators, '.'-decimal floats at\n"
    "shortest round-trip precision, RFC-style quoting. Columns (default scenario;\n"
    "the estimate blocks widen when the feature offset is active):\n"
    "  schema                the trace layout version (currently 1)\n"
    "  t                     simulation time [s]\n"
    "  q1..q3, qd1..qd3      joint positions [rad] and velocities [rad/s]\n"
    "  x1,x2  xdot1,xdot2    image feature [px] and its velocity [px/s]\n"
    "  xd1,xd2  dx1,dx2      desired feature [px] and tracking error x - x_d [px]\n"
    "  z, z_hat, z_hat_dot   feature depth [m], its estimate, and the estimate rate\n"
    "  cmd1..cmd3            commanded joint torques [N m] (velocities [rad/s]\n"
    "                        for the kinematic controller)\n"
    "  s1..s3                sliding velocity error q_dot - q_dot_r [rad/s]\n"
    "  ad1..ad8              dynamic parameter estimates\n"
    "  az1.., azp1..         depth / depth-rate-independent parameter estimates\n"
    "  Vs, Vs_err, V1, V2    storage and composite-storage function values\n"
    "  xu, dxu, diss, v2rhs  instantaneous storage-rate terms\n"
    "  I_xu, I_dxu, I_diss, I_v2  their integrator-carried running integrals\n"
    "\n"
    "Config files are 'key = value' lines; '#' starts a comment. Values are\n"
    "numbers, words, tuples '(a, b, c)', 'diag(a, b, c)', or full matrices\n"
    "'mat((a, b), (c, d))' with one parenthesized group per row.\n"
    "All keys are optional and default to the stock torque-control benchmark;\n"
    "unknown or duplicate keys are rejected. See README.md for the key list,\n"
    "or run 'emit-config' for working examples of every preset.\n"
    "\n"
    "Exit codes: 0 ok, 2 config error, 3 run aborted, 4 check failures.";

json vec_json(const VecX& v) {
    json a = json::array();
    for (long i = 0; i < v.size(); ++i) {
        a.push_back(v[i]);
    }
    return a;
}

json metrics_json(const sim::Metrics& m) {
    json j;
    j["duration"] = m.duration;
    j["final_error_inf"] = m.final_error_inf;
    j["max_error_inf"] = m.max_error_inf;
    j["max_error_after_20s"] = m.max_error_after_20s;
    j["convergence_time_05px"] = m.convergence_time_05px;
    j["window_peaks"] = m.window_peaks;
    j["window_start"] = m.window_start;
    j["peak_abs_command"] = m.peak_abs_command;
    j["z_gap_final"] = m.z_gap_final;
    j["z_min"] = m.z_min;
    j["z_hat_min"] = m.z_hat_min;
    j["z_hat_absmin_after_20s"] = m.z_hat_absmin_after_20s;
    j["z_hat_nonpositive_seen"] = m.z_hat_nonpositive_seen;
    j["wall_clock_s"] = m.wall_clock_s;
    return j;
}

json audit_json(const sim::Trace& tr) {
    const sim::PassivityReport p = sim::passivity_audit(tr);
    const sim::LyapunovReport l = sim::lyapunov_audit(tr);
    json j;
    j["schema_version"] = trace_io::kSchemaVersion;
    j["passivity"] = {{"prop1_trapezoid", p.prop1_trapezoid},
                      {"prop1_quadrature", p.prop1_quadrature},
                      {"prop2_trapezoid", p.prop2_trapezoid},
                      {"prop2_quadrature", p.prop2_quadrature},
                      {"inequality_margin", p.inequality_margin},
                      {"inequality_ok", p.inequality_ok}};
    j["lyapunov"] = {{"v2_applicable", l.v2_applicable},
                     {"v1_trapezoid", l.v1_trapezoid},
                     {"v1_quadrature", l.v1_quadrature},
                     {"v2_trapezoid", l.v2_trapezoid},
                     {"v2_quadrature", l.v2_quadrature},
                     {"v1_max_increase", l.v1_max_increase},
                     {"bound_violations", l.bound_violations},
                     {"bound_worst", l.bound_worst}};
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw ConfigError("failed writing '" + path.string() + "'");
    }
}

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& overrides,
                 const std::string& out_dir) {
    const sim::Scenario scn = config_path.empty() ? config::parse("", overrides)
                                                  : config::load(config_path, overrides);
    const sim::Trace tr = sim::run(scn);
    const sim::Metrics met = sim::metrics(tr);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    trace_io::write_csv_file((dir / "trace.csv").string(), tr);

    json summary;
    summary["schema_version"] = trace_io::kSchemaVersion;
    summary["scenario"] = {{"controller", control::to_string(scn.controller)},
                           {"control_mode", sim::to_string(scn.control_mode)},
                           {"adaptation", sim::to_string(scn.adaptation)},
                           {"servo", sim::to_string(scn.servo)},
                           {"duration", scn.duration},
                           {"control_period", scn.control_period},
                           {"substep", scn.substep},
                           {"record_period", scn.effective_record_period()},
                           {"initial_q", vec_json(scn.init_state.q)},
                           {"initial_estimates",
                            {{"a_d", vec_json(scn.init_estimates.a_d)},
                             {"a_z", vec_json(scn.init_estimates.a_z)},
                             {"a_z_perp", vec_json(scn.init_estimates.a_z_perp)}}}};
    summary["abort"] = {{"reason", sim::to_string(tr.abort)},
                        {"detail", tr.abort_detail},
                        {"time", tr.abort_time}};
    summary["metrics"] = metrics_json(met);
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    write_text(dir / "audit.json", audit_json(tr).dump(2) + "\n");

    std::cout << "wrote " << (dir / "trace.csv").string() << " (" << tr.rows.size()
              << " samples), summary.json, audit.json\n";
    if (tr.aborted()) {
        std::cerr << "run aborted at t = " << format_double(tr.abort_time) << " s: "
                  << tr.abort_detail << "\n";
        return kExitAborted;
    }
    std::cout << "final error " << format_double(met.final_error_inf)
              << " px, max after 20 s " << format_double(met.max_error_after_20s)
              << " px, depth gap " << format_double(met.z_gap_final) << " m, wall "
              << format_double(met.wall_clock_s) << " s\n";
    return kExitOk;
}

int cmd_check(const std::string& suite, bool as_json) {
    const std::vector<checks::Result> results = checks::run_suite(suite);
    const bool ok = checks::all_pass(results);
    if (as_json) {
        json j;
        j["suite"] = suite;
        j["pass"] = ok;
        j["results"] = json::array();
        for (const checks::Result& r : results) {
            j["results"].push_back({{"name", r.name},
                                    {"pass", r.pass},
                                    {"measured", r.measured},
                                    {"threshold", r.threshold},
                                    {"detail", r.detail}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        size_t width = 0;
        for (const checks::Result& r : results) {
            width = std::max(width, r.name.size());
        }
        for (const checks::Result& r : results) {
            std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name
                      << std::string(width - r.name.size() + 2, ' ')
                      << "measured " << format_double(r.measured) << "  threshold "
                      << format_double(r.threshold);
            if (!r.detail.empty()) {
                std::cout << "  (" << r.detail << ")";
            }
            std::cout << "\n";
        }
        std::cout << (ok ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
    }
    return ok ? kExitOk : kExitCheckFailed;
}

std::vector<double> column_of(const trace_io::Table& tb, const std::string& name) {
    const long c = tb.need(name);
    std::vector<double> v(tb.rows.size());
    for (size_t i = 0; i < tb.rows.size(); ++i) {
        v[i] = tb.rows[i][static_cast<size_t>(c)];
    }
    return v;
}

int cmd_plot(const std::string& trace_path, std::vector<int> figures,
             const std::string& out_dir) {
    const trace_io::Table tb = trace_io::read_table_file(trace_path);
    if (tb.rows.empty()) {
        throw ConfigError("trace '" + trace_path + "' has no samples to plot");
    }
    const std::vector<double> t = column_of(tb, "t");

    fs::create_directories(out_dir);
    for (const int n : figures) {
        svgplot::Figure fig;
        fig.xlabel = "time (s)";
        switch (n) {
        case 2:
        case 5:
            fig.title = "Image-space position tracking errors";
            fig.ylabel = "error (px)";
            fig.series = {{"u error", t, column_of(tb, "dx1")},
                          {"v error", t, column_of(tb, "dx2")}};
            break;
        case 3:
        case 6:
            fig.title = "Actual and estimated depths";
            fig.ylabel = "depth (m)";
            fig.series = {{"z", t, column_of(tb, "z")},
                          {"z estimate", t, column_of(tb, "z_hat")}};
            break;
        case 4:
        case 7:
            fig.title = "Control torques";
            fig.ylabel = "torque (N m)";
            fig.series = {{"joint 1", t, column_of(tb, "cmd1")},
                          {"joint 2", t, column_of(tb, "cmd2")},
                          {"joint 3", t, column_of(tb, "cmd3")}};
            break;
        default:
            throw ConfigError("unknown figure number " + std::to_string(n));
        }
        const fs::path path = fs::path(out_dir) / ("figure" + std::to_string(n) + ".svg");
        svgplot::write(path.string(), fig);
        std::cout << "wrote " << path.string() << "\n";
    }
    return kExitOk;
}

int cmd_emit_config(const std::string& preset, bool all, const std::string& out_dir) {
    const auto shipped = sim::shipped_scenarios();
    std::vector<std::pair<std::string, sim::Scenario>> selected;
    if (all) {
        selected = shipped;
    } else {
        for (const auto& entry : shipped) {
            if (entry.first == preset) {
                selected.push_back(entry);
            }
        }
        if (selected.empty()) {
            std::string names;
            for (const auto& entry : shipped) {
                names += (names.empty() ? "" : ", ") + entry.first;
            }
            throw ConfigError("unknown preset '" + preset + "' (available: " + names + ")");
        }
    }
    fs::create_directories(out_dir);
    for (const auto& [name, scn] : selected) {
        const fs::path path = fs::path(out_dir) / (name + ".cfg");
        write_text(path, config::emit(scn));
        std::cout << "wrote " << path.string() << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vservo — adaptive image-space visual servoing laboratory"};
    app.footer(kFooter);
    app.require_subcommand(1);

    // simulate
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Run a scenario and write trace.csv, summary.json, audit.json");
    std::string config_path;
    std::string controller, servo;
    std::vector<std::string> sets;
    std::string sim_out = "out";
    sim_cmd->add_option("config", config_path,
                        "Scenario config file (omit for the stock benchmark)")
        ->check(CLI::ExistingFile);
    sim_cmd->add_option("--controller", controller, "Controller selection")
        ->check(CLI::IsMember(
            {"inverse", "transpose", "kinematic", "inverse_jacobian", "transpose_jacobian"}));
    sim_cmd->add_option("--servo", servo, "Velocity-servo model (kinematic controller)")
        ->check(CLI::IsMember({"ideal", "first_order"}));
    sim_cmd->add_option("--set", sets, "Override a config key, e.g. --set gains.alpha=12");
    sim_cmd->add_option("--out", sim_out, "Output directory (default: out)");

    // check
    auto* check_cmd =
        app.add_subcommand("check", "Run identity/audit suites and report pass/fail");
    std::string suite = "all";
    bool check_json = false;
    check_cmd->add_option("--suite", suite, "Suite to run (default: all)")
        ->check(CLI::IsMember({"regressors", "jacobians", "passivity", "lyapunov", "all"}));
    check_cmd->add_flag("--json", check_json, "Emit a JSON report instead of text");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "Render SVG figures from a trace CSV");
    std::string trace_path;
    std::vector<int> figures{2, 3, 4};
    std::string plot_out = "plots";
    plot_cmd->add_option("trace", trace_path, "Trace CSV produced by 'simulate'")
        ->required()
        ->check(CLI::ExistingFile);
    plot_cmd
        ->add_option("--figures", figures,
                     "Figures to render: 2/5 tracking errors, 3/6 actual and estimated "
                     "depths, 4/7 control torques (default: 2 3 4)")
        ->check(CLI::IsMember({2, 3, 4, 5, 6, 7}));
    plot_cmd->add_option("--out", plot_out, "Output directory (default: plots)");

    // emit-config
    auto* emit_cmd = app.add_subcommand(
        "emit-config", "Write shipped scenario presets as config files");
    std::string preset;
    bool emit_all = false;
    std::string emit_out = "configs";
    emit_cmd->add_option("--preset", preset, "Preset name (see --all for the full set)");
    emit_cmd->add_flag("--all", emit_all, "Emit every shipped preset");
    emit_cmd->add_option("--out", emit_out, "Output directory (default: configs)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim_cmd->parsed()) {
            std::vector<std::string> overrides;
            if (!controller.empty()) {
                if (controller == "inverse") {
                    controller = "inverse_jacobian";
                } else if (controller == "transpose") {
                    controller = "transpose_jacobian";
                }
                overrides.push_back("controller = " + controller);
            }
            if (!servo.empty()) {
                overrides.push_back("servo = " + servo);
            }
            overrides.insert(overrides.end(), sets.begin(), sets.end());
            return cmd_simulate(config_path, overrides, sim_out);
        }
        if (check_cmd->parsed()) {
            return cmd_check(suite, check_json);
        }
        if (plot_cmd->parsed()) {
            return cmd_plot(trace_path, figures, plot_out);
        }
        if (emit_cmd->parsed()) {
            if (!emit_all && preset.empty()) {
                throw ConfigError("emit-config needs --preset <name> or --all");
            }
            return cmd_emit_config(preset, emit_all, emit_out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
