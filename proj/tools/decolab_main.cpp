#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <decolab/catalog.hpp>
#include <decolab/collapse.hpp>
#include <decolab/io.hpp>
#include <decolab/scenario.hpp>
#include <decolab/timescales.hpp>

namespace fs = std::filesystem;
using namespace decolab;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::vector<BodyProfile> load_catalog_or_builtin(const std::string& path,
                                                 const PhysicalConstants& c) {
    if (path.empty()) return builtin_catalog(c);
    return load_catalog_file(path, c);
}

const char* verdict_line(Verdict v) {
    return v == Verdict::ClassicalitySafe ? "CLASSICALITY SAFE (t_CG < t_Q)"
                                          : "CORRESPONDENCE BREAKDOWN";
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- timescales

struct TimescaleArgs {
    std::string body;
    std::string model;
    std::optional<double> q, lambda_q, m0;
    std::optional<int> dims;
    std::optional<double> lambda_grw, a, gamma_gpr, gamma_env, temp;
    std::optional<double> diffusion_override;
};

int cmd_timescales(const TimescaleArgs& args, const std::string& catalog_path, bool json,
                   const std::string& out_dir) {
    Timer timer;
    PhysicalConstants consts;
    auto catalog = load_catalog_or_builtin(catalog_path, consts);
    const BodyProfile& body = find_body(catalog, args.body);
    FluctuationKind kind = parse_kind(args.model);

    CollapseModelParams params;
    if (args.lambda_grw) params.lambda_grw = *args.lambda_grw;
    if (args.a) params.a = *args.a;
    if (args.gamma_gpr) params.gamma_gpr = *args.gamma_gpr;
    FluctuationModel model = make_model(kind, body, params);
    if (args.gamma_env) model.env_rate_per_s = *args.gamma_env;
    if (args.temp) model.env_temperature_K = *args.temp;
    validate_model(model);

    ChaosProfile chaos = default_chaos_profile(body);
    if (args.q) chaos.q = *args.q;
    if (args.lambda_q) chaos.lambda_q = *args.lambda_q;
    if (args.m0) chaos.m0 = *args.m0;
    if (args.dims) chaos.dims = *args.dims;

    TimescaleReport r =
        classicality_verdict(body, model, consts, chaos, args.diffusion_override);

    nlohmann::ordered_json j;
    j["body"] = r.body;
    j["model"] = kind_name(r.model);
    j["t_q_s"] = r.t_q_s;
    j["t_cg_s"] = r.t_cg_s;
    j["diffusion_erg_g_s"] = r.diffusion;
    for (const auto& [key, value] : r.intermediates) j[key] = value;
    j["verdict"] = verdict_name(r.verdict);

    if (json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "body = " << r.body << "\n";
        std::cout << "model = " << kind_name(r.model) << "\n";
        std::cout << "t_q_s = " << sci(r.t_q_s) << "\n";
        std::cout << "t_cg_s = " << sci(r.t_cg_s) << "\n";
        std::cout << "diffusion_erg_g_s = " << sci(r.diffusion) << "\n";
        for (const auto& [key, value] : r.intermediates)
            std::cout << key << " = " << sci(value) << "\n";
        std::cout << "verdict = " << verdict_line(r.verdict) << "\n";
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::string report_path = (fs::path(out_dir) / "timescales_report.json").string();
        {
            auto out = open_for_write(report_path);
            out << j.dump(2) << "\n";
        }
        RunManifest m;
        m.command = "timescales";
        m.inputs["body"] = r.body;
        m.inputs["model"] = kind_name(r.model);
        m.inputs["q"] = format_g17(chaos.q);
        m.inputs["lambda_q_per_s"] = format_g17(chaos.lambda_q);
        m.inputs["m0"] = format_g17(chaos.m0);
        m.inputs["dims"] = std::to_string(chaos.dims);
        m.inputs["diffusion_erg_g_s"] = format_g17(r.diffusion);
        m.hash = config_hash(m.inputs);
        m.outputs = {report_path};
        m.wall_time_s = timer.seconds();
        write_manifest((fs::path(out_dir) / "run_manifest.json").string(), m);
    }
    return 0;
}

// -------------------------------------------------------------------- table2

int cmd_table2(const std::string& body_name, const std::string& catalog_path, bool json,
               const std::string& out_dir) {
    Timer timer;
    PhysicalConstants consts;
    auto catalog = load_catalog_or_builtin(catalog_path, consts);
    const BodyProfile& body = find_body(catalog, body_name);
    auto rows = table2(body, CollapseModelParams{}, consts);

    if (json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json r;
            r["body"] = body.name;
            r["model"] = kind_name(row.kind);
            r["computed_erg_g_s"] = row.computed;
            if (row.target) {
                r["target_erg_g_s"] = *row.target;
                r["dex"] = *row.dex;
                r["pass"] = *row.pass;
            }
            arr.push_back(r);
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        std::printf("%-6s %16s %16s %8s\n", "model", "D_erg_g_s", "target_erg_g_s",
                    "verdict");
        for (const auto& row : rows) {
            if (row.target)
                std::printf("%-6s %16.6e %16.6e %8s\n", kind_name(row.kind), row.computed,
                            *row.target, *row.pass ? "PASS" : "FAIL");
            else
                std::printf("%-6s %16.6e %16s %8s\n", kind_name(row.kind), row.computed,
                            "-", "-");
        }
    }

    std::string dir = out_dir.empty() ? "." : out_dir;
    fs::create_directories(dir);
    std::string csv_path = (fs::path(dir) / "table2.csv").string();
    {
        auto out = open_for_write(csv_path);
        out << "model, computed_erg_g_s, target_erg_g_s, dex, pass\n";
        for (const auto& row : rows) {
            out << kind_name(row.kind) << ", " << format_g17(row.computed) << ", ";
            if (row.target)
                out << format_g17(*row.target) << ", " << format_g17(*row.dex) << ", "
                    << (*row.pass ? "PASS" : "FAIL") << "\n";
            else
                out << ", , \n";
        }
    }
    RunManifest m;
    m.command = "table2";
    m.inputs["body"] = body.name;
    m.hash = config_hash(m.inputs);
    m.outputs = {csv_path};
    m.wall_time_s = timer.seconds();
    write_manifest((fs::path(dir) / "run_manifest.json").string(), m);
    return 0;
}

// -------------------------------------------------------------------- evolve

int cmd_evolve(const std::string& scenario_path, const std::string& out_dir) {
    Timer timer;
    Scenario sc = load_scenario_file(scenario_path);
    fs::create_directories(out_dir);

    WignerField initial = initial_state(sc);
    std::vector<Diagnostics> series;
    std::vector<std::string> snapshots;
    std::string last_good;

    auto sink = [&](const WignerField& f, const Diagnostics& d) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%05zu.csv", snapshots.size());
        std::string path = (fs::path(out_dir) / name).string();
        write_snapshot_csv(path, f);
        snapshots.push_back(path);
        last_good = path;
        series.push_back(d);
    };

    WignerField final_state = initial;
    try {
        final_state = evolve(initial, sc.spec, sink);
    } catch (const numerical_error&) {
        if (!last_good.empty())
            std::cerr << "last good snapshot: " << last_good << "\n";
        throw;
    }

    std::string diag_path = (fs::path(out_dir) / "diagnostics.csv").string();
    write_diagnostics_csv(diag_path, series);

    RunManifest m;
    m.command = "evolve";
    m.inputs = resolved_parameters(sc);
    m.hash = config_hash(m.inputs);
    m.outputs = snapshots;
    m.outputs.push_back(diag_path);
    m.extra["steps"] = planned_steps(sc.spec);
    nlohmann::ordered_json times = nlohmann::ordered_json::array();
    nlohmann::ordered_json diags = nlohmann::ordered_json::array();
    for (const auto& d : series) {
        times.push_back(d.time);
        diags.push_back(diagnostics_json(d));
    }
    m.extra["times"] = times;
    m.extra["diagnostics"] = diags;
    m.extra["initial_final_l1"] = l1_distance(final_state, initial);
    m.wall_time_s = timer.seconds();
    write_manifest((fs::path(out_dir) / "run_manifest.json").string(), m);

    std::cout << "steps = " << planned_steps(sc.spec) << "\n";
    std::cout << "snapshots = " << snapshots.size() << "\n";
    std::cout << "final_norm = " << sci(series.back().norm) << "\n";
    std::cout << "initial_final_l1 = " << sci(l1_distance(final_state, initial)) << "\n";
    return 0;
}

// ------------------------------------------------------------------- compare

int cmd_compare(const std::string& scenario_path, const std::string& out_dir,
                int hbar_sweep, double sweep_factor, double threshold) {
    Timer timer;
    Scenario sc = load_scenario_file(scenario_path);
    fs::create_directories(out_dir);

    RunManifest m;
    m.command = "compare";
    m.inputs = resolved_parameters(sc);
    m.inputs["compare.threshold"] = format_g17(threshold);
    m.inputs["compare.hbar_sweep"] = std::to_string(hbar_sweep);
    m.inputs["compare.sweep_factor"] = format_g17(sweep_factor);
    m.hash = config_hash(m.inputs);

    if (hbar_sweep <= 0) {
        auto series = classical_quantum_distance(initial_state(sc), sc.spec, threshold);
        std::string path = (fs::path(out_dir) / "distance.csv").string();
        write_distance_csv(path, series);
        m.outputs = {path};
        m.extra["threshold"] = threshold;
        if (series.breakdown_time)
            m.extra["breakdown_time"] = *series.breakdown_time;
        else
            m.extra["breakdown_time"] = nullptr;

        std::cout << "threshold = " << sci(threshold) << "\n";
        std::cout << "final_distance = " << sci(series.points.back().distance) << "\n";
        if (series.breakdown_time)
            std::cout << "breakdown_time = " << sci(*series.breakdown_time) << "\n";
        else
            std::cout << "breakdown_time = never\n";
    } else {
        if (!(sweep_factor > 1))
            throw config_error("compare: --sweep-factor must be greater than 1");
        std::vector<double> log_inv_hbar, breakdowns;
        nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
        std::string sweep_csv = (fs::path(out_dir) / "sweep.csv").string();
        auto out = open_for_write(sweep_csv);
        out << "hbar, breakdown_time\n";
        for (int k = 0; k < hbar_sweep; ++k) {
            Scenario run = sc;
            run.spec.hbar = sc.spec.hbar / std::pow(sweep_factor, k);
            auto series =
                classical_quantum_distance(initial_state(run), run.spec, threshold);
            char name[32];
            std::snprintf(name, sizeof name, "distance_%02d.csv", k);
            std::string path = (fs::path(out_dir) / name).string();
            write_distance_csv(path, series);
            m.outputs.push_back(path);

            nlohmann::ordered_json row;
            row["hbar"] = run.spec.hbar;
            out << format_g17(run.spec.hbar) << ", ";
            if (series.breakdown_time) {
                row["breakdown_time"] = *series.breakdown_time;
                out << format_g17(*series.breakdown_time) << "\n";
                log_inv_hbar.push_back(std::log(1.0 / run.spec.hbar));
                breakdowns.push_back(*series.breakdown_time);
            } else {
                row["breakdown_time"] = nullptr;
                out << "never\n";
            }
            sweep.push_back(row);
            std::cout << "hbar = " << sci(run.spec.hbar) << "  breakdown_time = "
                      << (series.breakdown_time ? sci(*series.breakdown_time) : "never")
                      << "\n";
        }
        out.close();
        m.outputs.push_back(sweep_csv);
        m.extra["threshold"] = threshold;
        m.extra["sweep"] = sweep;
        if (breakdowns.size() >= 2) {
            LinearFit fit = linear_fit(log_inv_hbar, breakdowns);
            m.extra["slope"] = fit.slope;
            m.extra["lyapunov_from_slope"] = 1.0 / fit.slope;
            std::cout << "slope = " << sci(fit.slope) << "\n";
            std::cout << "lyapunov_from_slope = " << sci(1.0 / fit.slope) << "\n";
        } else {
            throw std::domain_error(
                "compare: fewer than two sweep runs crossed the threshold; no slope fit");
        }
    }

    m.wall_time_s = timer.seconds();
    write_manifest((fs::path(out_dir) / "run_manifest.json").string(), m);
    return 0;
}

// ------------------------------------------------------------------- catalog

int cmd_catalog_list(const std::string& catalog_path) {
    PhysicalConstants consts;
    auto catalog = load_catalog_or_builtin(catalog_path, consts);
    for (const auto& b : catalog)
        std::printf("%-16s mass_g=%.6g chi_cm=%.6g lyapunov_per_s=%.6g sigma_p0=%.6g\n",
                    b.name.c_str(), b.mass_g, b.chi_cm, b.lyapunov_per_s,
                    b.sigma_p0_gcm_s);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-space decoherence laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string catalog_path;
    bool json = false;
    app.add_option("--catalog", catalog_path, "catalog file overriding the builtin set");
    app.add_flag("--json", json, "machine-readable output");

    TimescaleArgs ts;
    std::string ts_out;
    auto* ts_cmd = app.add_subcommand("timescales", "breakdown and coarse-graining times");
    ts_cmd->add_option("--body", ts.body, "catalog body name")->required();
    ts_cmd->add_option("--model", ts.model, "env | grw | gpr | ggr")->required();
    ts_cmd->add_option("--q", ts.q, "chaoticity index");
    ts_cmd->add_option("--lambda-q", ts.lambda_q, "generalized rate, 1/s");
    ts_cmd->add_option("--m0", ts.m0, "initial unexplored area");
    ts_cmd->add_option("--dims", ts.dims, "phase-space dimension pairs");
    ts_cmd->add_option("--lambda-grw", ts.lambda_grw, "per-nucleon rate, 1/s");
    ts_cmd->add_option("--a", ts.a, "localization length, cm");
    ts_cmd->add_option("--gamma-gpr", ts.gamma_gpr, "Wiener intensity, cm^-3 s^-1");
    ts_cmd->add_option("--gamma-env", ts.gamma_env, "environmental relax rate, 1/s");
    ts_cmd->add_option("--temp", ts.temp, "environment temperature, K");
    ts_cmd->add_option("--diffusion-override", ts.diffusion_override,
                       "substitute momentum diffusion, erg g/s");
    ts_cmd->add_option("--out", ts_out, "directory for the JSON report");

    std::string t2_body = "jupiter", t2_out;
    auto* t2_cmd = app.add_subcommand("table2", "diffusion coefficients across models");
    t2_cmd->add_option("--body", t2_body, "catalog body name");
    t2_cmd->add_option("--out", t2_out, "directory for the CSV");

    std::string ev_scenario, ev_out;
    auto* ev_cmd = app.add_subcommand("evolve", "integrate a scenario");
    ev_cmd->add_option("--scenario", ev_scenario, "scenario file")->required();
    ev_cmd->add_option("--out", ev_out, "output directory")->required();

    std::string cp_scenario, cp_out;
    int cp_sweep = 0;
    double cp_factor = 10.0, cp_threshold = default_breakdown_threshold;
    auto* cp_cmd = app.add_subcommand("compare", "corrected vs uncorrected runs");
    cp_cmd->add_option("--scenario", cp_scenario, "scenario file")->required();
    cp_cmd->add_option("--out", cp_out, "output directory")->required();
    cp_cmd->add_option("--hbar-sweep", cp_sweep, "number of scaled-hbar runs");
    cp_cmd->add_option("--sweep-factor", cp_factor, "hbar reduction per run");
    cp_cmd->add_option("--threshold", cp_threshold, "L1 breakdown threshold");

    auto* cat_cmd = app.add_subcommand("catalog", "catalog inspection");
    auto* cat_list = cat_cmd->add_subcommand("list", "list bodies");
    cat_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(ts_cmd))
            return cmd_timescales(ts, catalog_path, json, ts_out);
        if (app.got_subcommand(t2_cmd)) return cmd_table2(t2_body, catalog_path, json, t2_out);
        if (app.got_subcommand(ev_cmd)) return cmd_evolve(ev_scenario, ev_out);
        if (app.got_subcommand(cp_cmd))
            return cmd_compare(cp_scenario, cp_out, cp_sweep, cp_factor, cp_threshold);
        if (app.got_subcommand(cat_cmd) && cat_cmd->got_subcommand(cat_list))
            return cmd_catalog_list(catalog_path);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
