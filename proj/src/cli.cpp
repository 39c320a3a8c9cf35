#include "orbitsl/cli.hpp"

#include <sstream>

#include <CLI11.hpp>

#include "orbitsl/errors.hpp"
#include "orbitsl/optimizer.hpp"
#include "orbitsl/report.hpp"
#include "orbitsl/scenario.hpp"

namespace orbitsl::cli {

namespace {

struct Flags {
    std::string config;
    std::vector<std::string> presets;
    bool json = false;
    bool oracle = false;
    int oracle_points = 50;
    std::string fspl_distance;
    std::vector<double> pass_scales;
    bool lenient = false;
};

scenario::Scenario load(const Flags& f) {
    scenario::LoadOptions opts;
    opts.strict = !f.lenient;
    scenario::Scenario sc = f.config.empty() ? scenario::default_scenario()
                                             : scenario::load_scenario_file(f.config, opts);
    if (!f.fspl_distance.empty()) {
        sc.fspl_distance_mode = scenario::parse_fspl_mode(f.fspl_distance);
    }
    sc.validate();
    sc.refresh_derived();
    return sc;
}

double single_scale(const Flags& f) {
    if (f.pass_scales.size() > 1) {
        throw ValidationError("--pass-scale takes a single value for this command");
    }
    return f.pass_scales.empty() ? 1.0 : f.pass_scales.front();
}

scenario::Scenario with_scale(scenario::Scenario sc, double scale) {
    sc.pass_scale *= scale;
    sc.validate();
    return sc;
}

/// Workloads selected by --preset, or the config's own workload.
std::vector<compute::WorkloadSplit> catalog(const Flags& f, const scenario::Scenario& sc) {
    std::vector<compute::WorkloadSplit> out;
    for (const auto& name : f.presets) {
        try {
            out.push_back(scenario::preset_workload(name));
        } catch (const ConfigError& e) {
            throw ValidationError(e.what());
        }
    }
    if (out.empty()) out.push_back(sc.split);
    return out;
}

report::SolveRow row_from(const optimizer::SweepEntry& e, double scale, const char* solver) {
    report::SolveRow row;
    row.label = e.label;
    row.solver = solver;
    row.pass_scale = scale;
    row.report = e.report;
    row.error = e.error;
    row.infeasible = e.infeasible;
    return row;
}

int cmd_geometry(const Flags& f, std::ostream& out) {
    const auto sc = with_scale(load(f), single_scale(f));
    out << (f.json ? report::geometry_json(sc) : report::geometry_text(sc));
    return kOk;
}

int cmd_sweep(const Flags& f, std::ostream& out, std::ostream& err, const char* command) {
    const auto base = load(f);
    const auto splits = catalog(f, base);
    const std::vector<double> scales = f.pass_scales.empty() ? std::vector<double>{1.0} : f.pass_scales;

    std::vector<report::SolveRow> rows;
    bool any_solved = false;
    bool any_nonconvergence = false;
    for (double scale : scales) {
        const auto sc = with_scale(base, scale);
        const auto result = optimizer::sweep_splits(sc, splits);
        for (std::size_t i = 0; i < result.entries.size(); ++i) {
            auto row = row_from(result.entries[i], scale, "bisection");
            row.argmin = result.argmin && *result.argmin == i;
            any_solved = any_solved || row.report.has_value();
            any_nonconvergence = any_nonconvergence || (!row.report && !row.infeasible);
            if (!row.report) err << row.label << ": " << row.error << "\n";
            rows.push_back(std::move(row));
        }
    }
    out << (f.json ? report::solve_json(base, command, rows) : report::solve_csv(base, rows));
    if (any_solved) return kOk;
    return any_nonconvergence ? kNonConvergence : kInfeasible;
}

int cmd_optimize(const Flags& f, std::ostream& out, std::ostream& err) {
    if (f.presets.size() > 1) {
        throw ValidationError("optimize takes a single --preset; use sweep for several");
    }
    if (!f.oracle) {
        if (f.pass_scales.size() > 1) single_scale(f);
        return cmd_sweep(f, out, err, "optimize");
    }
    auto sc = with_scale(load(f), single_scale(f));
    sc.split = catalog(f, sc).front();
    const double scale = f.pass_scales.empty() ? 1.0 : f.pass_scales.front();

    report::SolveRow solved;
    solved.label = sc.split.split_label;
    solved.solver = "bisection";
    solved.pass_scale = scale;
    solved.argmin = true;
    solved.report = optimizer::minimize_energy(sc);

    report::SolveRow grid = solved;
    grid.solver = "grid_oracle";
    grid.argmin = false;
    grid.report = optimizer::oracle_grid_search(sc, f.oracle_points);

    const double gap = 100.0 * (grid.report->breakdown.e_total_j / solved.report->breakdown.e_total_j - 1.0);
    std::vector<report::SolveRow> rows = {solved, grid};
    out << (f.json ? report::solve_json(sc, "optimize", rows) : report::solve_csv(sc, rows));
    err << "oracle gap: " << report::format_number(gap) << " %\n";
    return kOk;
}

int cmd_compare(const Flags& f, std::ostream& out, std::ostream& err) {
    if (f.presets.size() > 1) {
        throw ValidationError("compare takes a single --preset");
    }
    auto sc = with_scale(load(f), single_scale(f));
    sc.split = catalog(f, sc).front();

    report::Comparison cmp;
    bool nonconvergence = false;
    auto attempt = [&](auto&& fn, std::optional<optimizer::SolveReport>& slot, std::string& error) {
        try {
            slot = fn(sc, optimizer::SolverOptions{});
        } catch (const InfeasibleProblem& e) {
            error = e.what();
        } catch (const NonConvergence& e) {
            error = e.what();
            nonconvergence = true;
        }
        if (!error.empty()) err << error << "\n";
    };
    attempt(optimizer::minimize_energy, cmp.split_learning, cmp.split_error);
    attempt(optimizer::minimize_energy_direct_download, cmp.direct_download, cmp.direct_error);
    out << (f.json ? report::compare_json(sc, cmp) : report::compare_csv(sc, cmp));
    if (cmp.split_learning && cmp.direct_download) return kOk;
    return nonconvergence ? kNonConvergence : kInfeasible;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energy-optimal split learning over a LEO orbital ring", "orbitsl"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", f.config, "Scenario config file (JSON)");
        cmd->add_flag("--json", f.json, "Emit JSON instead of CSV/text");
        cmd->add_option("--fspl-distance", f.fspl_distance, "Path-loss distance: mean or worst_case")
            ->check(CLI::IsMember({"mean", "worst_case"}));
        cmd->add_option("--pass-scale", f.pass_scales, "Multiplier on the pass duration budget")
            ->delimiter(',');
        cmd->add_flag("--lenient", f.lenient, "Ignore unknown config keys");
    };

    auto* geometry = app.add_subcommand("geometry", "Pass geometry of the constellation");
    add_common(geometry);
    auto* optimize = app.add_subcommand("optimize", "Minimum-energy allocation for one split");
    add_common(optimize);
    optimize->add_option("--preset", f.presets, "Workload preset")->delimiter(',');
    optimize->add_flag("--oracle", f.oracle, "Also run the grid-search oracle and print the gap");
    optimize->add_option("--oracle-points", f.oracle_points, "Grid points per axis")
        ->check(CLI::Range(10, 400));
    auto* compare = app.add_subcommand("compare", "Split learning vs direct download");
    add_common(compare);
    compare->add_option("--preset", f.presets, "Workload preset")->delimiter(',');
    auto* sweep = app.add_subcommand("sweep", "Minimum energy for each split point");
    add_common(sweep);
    sweep->add_option("--preset", f.presets, "Workload presets, comma separated")->delimiter(',');
    auto* presets = app.add_subcommand("presets", "List built-in workload presets");
    presets->add_flag("--json", f.json, "Emit JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << e.what() << "\n" << sub->help();
        return kUsage;
    }

    try {
        if (geometry->parsed()) return cmd_geometry(f, out);
        if (optimize->parsed()) return cmd_optimize(f, out, err);
        if (compare->parsed()) return cmd_compare(f, out, err);
        if (sweep->parsed()) return cmd_sweep(f, out, err, "sweep");
        if (presets->parsed()) {
            out << (f.json ? report::presets_json() : report::presets_csv());
            return kOk;
        }
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return kConfigParse;
    } catch (const ValidationError& e) {
        err << "invalid config: " << e.what() << "\n";
        return kConfigInvalid;
    } catch (const UnknownKeyError& e) {
        err << "invalid config: " << e.what() << "\n";
        return kConfigInvalid;
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return kConfigParse;
    } catch (const InfeasibleProblem& e) {
        err << e.what() << "\nrequired pass duration: " << report::format_number(e.required_pass_s())
            << " s\n";
        return kInfeasible;
    } catch (const NonConvergence& e) {
        err << e.what() << "\n";
        return kNonConvergence;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kConfigInvalid;
    }
    return kUsage;
}

}  // namespace orbitsl::cli
