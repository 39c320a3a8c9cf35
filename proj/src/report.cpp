#include "orbitsl/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace orbitsl::report {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

ordered_json num(double v) { return rounded(v); }

ordered_json provenance(const scenario::Scenario& sc) {
    const optimizer::SolverOptions defaults;
    ordered_json p;
    p["artifact_version"] = kArtifactVersion;
    p["fspl_distance"] = std::string(scenario::to_string(sc.fspl_distance_mode));
    p["fspl_distance_m"] = num(sc.fspl_distance_m());
    p["mean_slant_samples"] = sc.mean_slant_samples;
    p["budget_rel_tol"] = defaults.budget_rel_tol;
    p["bracket_rel_tol"] = defaults.bracket_rel_tol;
    p["max_iterations"] = defaults.max_iterations;
    return p;
}

ordered_json breakdown_json(const optimizer::EnergyBreakdown& b) {
    ordered_json j;
    j["e_proc_sat"] = num(b.e_proc_sat_j);
    j["e_comm_down"] = num(b.e_comm_down_j);
    j["e_proc_ground"] = num(b.e_proc_ground_j);
    j["e_comm_up"] = num(b.e_comm_up_j);
    j["e_isl"] = num(b.e_isl_j);
    j["e_total"] = num(b.e_total_j);
    j["t_proc_sat"] = num(b.t_proc_sat_s);
    j["t_comm_down"] = num(b.t_comm_down_s);
    j["t_prop"] = num(b.t_prop_s);
    j["t_proc_ground"] = num(b.t_proc_ground_s);
    j["t_comm_up"] = num(b.t_comm_up_s);
    j["t_isl"] = num(b.t_isl_s);
    j["t_total"] = num(b.t_total_s);
    return j;
}

ordered_json report_json(const optimizer::SolveReport& r) {
    ordered_json j;
    j["architecture"] = std::string(optimizer::to_string(r.architecture));
    j["pass_budget"] = num(r.pass_budget_s);
    j["allocation"]["f_sat"] = num(r.allocation.freq_sat_hz);
    j["allocation"]["f_gs"] = num(r.allocation.freq_ground_hz);
    j["allocation"]["p_down"] = num(r.allocation.power_down_w);
    j["allocation"]["p_up"] = num(r.allocation.power_up_w);
    j["breakdown"] = breakdown_json(r.breakdown);
    j["active_constraints"] = r.active_constraints;
    j["lambda"] = num(r.lambda);
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    return j;
}

constexpr const char* kSolveColumns[] = {
    "split", "solver", "architecture", "pass_scale", "status", "argmin", "pass_budget",
    "f_sat", "f_gs", "p_down", "p_up",
    "e_proc_sat", "e_comm_down", "e_proc_ground", "e_comm_up", "e_isl", "e_total",
    "t_proc_sat", "t_comm_down", "t_prop", "t_proc_ground", "t_comm_up", "t_isl", "t_total",
    "lambda", "iterations", "active_constraints", "fspl_distance", "fingerprint",
};

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

double rounded(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

std::string geometry_text(const scenario::Scenario& sc) {
    const auto g = sc.geometry();
    char line[160];
    std::string out;
    auto row = [&](const char* name, double si, const char* unit, double human, const char* hunit) {
        std::snprintf(line, sizeof line, "%-22s %18s %-3s  (%.4f %s)\n", name,
                      format_number(si).c_str(), unit, human, hunit);
        out += line;
    };
    row("period", g.period_s, "s", g.period_s / 60.0, "min");
    row("slant_at_min_elev", g.slant_at_min_elev_m, "m", g.slant_at_min_elev_m / 1e3, "km");
    row("central_angle", g.central_angle_rad, "rad", g.central_angle_rad * 180.0 / std::numbers::pi,
        "deg");
    row("pass_duration", g.pass_duration_s, "s", g.pass_duration_s / 60.0, "min");
    row("isl_distance", g.isl_distance_m, "m", g.isl_distance_m / 1e3, "km");
    row("mean_slant", g.mean_slant_m, "m", g.mean_slant_m / 1e3, "km");
    row("prop_delay", g.prop_delay_s, "s", g.prop_delay_s * 1e3, "ms");
    out += "fingerprint            " + scenario::fingerprint(sc) + "\n";
    return out;
}

std::string geometry_json(const scenario::Scenario& sc) {
    const auto g = sc.geometry();
    ordered_json j;
    j["schema"] = kGeometrySchema;
    j["command"] = "geometry";
    j["fingerprint"] = scenario::fingerprint(sc);
    j["results"]["period_s"] = num(g.period_s);
    j["results"]["slant_at_min_elev_m"] = num(g.slant_at_min_elev_m);
    j["results"]["central_angle_rad"] = num(g.central_angle_rad);
    j["results"]["pass_duration_s"] = num(g.pass_duration_s);
    j["results"]["isl_distance_m"] = num(g.isl_distance_m);
    j["results"]["mean_slant_m"] = num(g.mean_slant_m);
    j["results"]["prop_delay_s"] = num(g.prop_delay_s);
    j["provenance"] = provenance(sc);
    return j.dump(2) + "\n";
}

std::string solve_csv(const scenario::Scenario& sc, const std::vector<SolveRow>& rows) {
    std::vector<std::string> header(std::begin(kSolveColumns), std::end(kSolveColumns));
    std::string out = join(header, ',') + "\n";
    const std::string mode(scenario::to_string(sc.fspl_distance_mode));
    const std::string fp = scenario::fingerprint(sc);
    for (const auto& row : rows) {
        std::vector<std::string> cells;
        cells.push_back(row.label);
        cells.push_back(row.solver);
        if (row.report) {
            const auto& r = *row.report;
            const auto& b = r.breakdown;
            const auto& a = r.allocation;
            cells.push_back(std::string(optimizer::to_string(r.architecture)));
            cells.push_back(format_number(row.pass_scale));
            cells.push_back("ok");
            cells.push_back(row.argmin ? "1" : "0");
            for (double v : {r.pass_budget_s, a.freq_sat_hz, a.freq_ground_hz, a.power_down_w,
                             a.power_up_w, b.e_proc_sat_j, b.e_comm_down_j, b.e_proc_ground_j,
                             b.e_comm_up_j, b.e_isl_j, b.e_total_j, b.t_proc_sat_s,
                             b.t_comm_down_s, b.t_prop_s, b.t_proc_ground_s, b.t_comm_up_s,
                             b.t_isl_s, b.t_total_s, r.lambda}) {
                cells.push_back(format_number(v));
            }
            cells.push_back(std::to_string(r.iterations));
            cells.push_back(join(r.active_constraints, ';'));
        } else {
            cells.push_back("split_learning");
            cells.push_back(format_number(row.pass_scale));
            cells.push_back(row.infeasible ? "infeasible" : "error");
            cells.push_back("0");
            for (int i = 0; i < 19; ++i) cells.emplace_back();
            cells.emplace_back();
            cells.emplace_back();
        }
        cells.push_back(mode);
        cells.push_back(fp);
        out += join(cells, ',') + "\n";
    }
    return out;
}

std::string solve_json(const scenario::Scenario& sc, const std::string& command,
                       const std::vector<SolveRow>& rows) {
    ordered_json j;
    j["schema"] = kSolveSchema;
    j["command"] = command;
    j["fingerprint"] = scenario::fingerprint(sc);
    j["results"] = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json e;
        e["split"] = row.label;
        e["solver"] = row.solver;
        e["pass_scale"] = num(row.pass_scale);
        e["argmin"] = row.argmin;
        if (row.report) {
            e["status"] = "ok";
            e["report"] = report_json(*row.report);
        } else {
            e["status"] = row.infeasible ? "infeasible" : "error";
            e["error"] = row.error;
        }
        j["results"].push_back(e);
    }
    j["provenance"] = provenance(sc);
    return j.dump(2) + "\n";
}

std::optional<double> Comparison::savings_percent() const {
    if (!split_learning || !direct_download) return std::nullopt;
    const double sl = rounded(split_learning->breakdown.e_total_j);
    const double dd = rounded(direct_download->breakdown.e_total_j);
    return 100.0 * (1.0 - sl / dd);
}

std::string compare_csv(const scenario::Scenario& sc, const Comparison& cmp) {
    std::string out =
        "variant,e_proc_sat,e_comm_down,e_proc_ground,e_comm_up,e_isl,e_total,t_total,status,"
        "savings_pct,fspl_distance,fingerprint\n";
    const auto savings = cmp.savings_percent();
    const std::string tail = "," + (savings ? format_number(*savings) : std::string()) + "," +
                             std::string(scenario::to_string(sc.fspl_distance_mode)) + "," +
                             scenario::fingerprint(sc) + "\n";
    auto row = [&](const char* variant, const std::optional<optimizer::SolveReport>& r) {
        std::string line = variant;
        if (r) {
            const auto& b = r->breakdown;
            for (double v : {b.e_proc_sat_j, b.e_comm_down_j, b.e_proc_ground_j, b.e_comm_up_j,
                             b.e_isl_j, b.e_total_j, b.t_total_s}) {
                line += "," + format_number(v);
            }
            line += ",ok";
        } else {
            line += ",,,,,,,,failed";
        }
        out += line + tail;
    };
    row("split_learning", cmp.split_learning);
    row("direct_download", cmp.direct_download);
    return out;
}

std::string compare_json(const scenario::Scenario& sc, const Comparison& cmp) {
    ordered_json j;
    j["schema"] = kCompareSchema;
    j["command"] = "compare";
    j["fingerprint"] = scenario::fingerprint(sc);
    auto side = [](const std::optional<optimizer::SolveReport>& r, const std::string& err) {
        ordered_json e;
        if (r) {
            e["status"] = "ok";
            e["report"] = report_json(*r);
        } else {
            e["status"] = "failed";
            e["error"] = err;
        }
        return e;
    };
    j["results"]["split_learning"] = side(cmp.split_learning, cmp.split_error);
    j["results"]["direct_download"] = side(cmp.direct_download, cmp.direct_error);
    const auto savings = cmp.savings_percent();
    j["results"]["savings_pct"] = savings ? ordered_json(rounded(*savings)) : ordered_json(nullptr);
    j["provenance"] = provenance(sc);
    return j.dump(2) + "\n";
}

std::string presets_csv() {
    std::string out = "name,flops_sat,flops_ground,activation_bits,gradient_bits,model_bits\n";
    for (const auto& p : scenario::builtin_presets()) {
        const auto& s = p.scenario.split;
        out += p.name;
        for (double v : {s.flops_sat_per_item, s.flops_ground_per_item, s.activation_bits_per_item,
                         s.gradient_bits_per_item, s.model_bits}) {
            out += "," + format_number(v);
        }
        out += "\n";
    }
    return out;
}

std::string presets_json() {
    ordered_json j = ordered_json::array();
    for (const auto& p : scenario::builtin_presets()) {
        const auto& s = p.scenario.split;
        ordered_json e;
        e["name"] = p.name;
        e["flops_sat"] = num(s.flops_sat_per_item);
        e["flops_ground"] = num(s.flops_ground_per_item);
        e["activation_bits"] = num(s.activation_bits_per_item);
        e["gradient_bits"] = num(s.gradient_bits_per_item);
        e["model_bits"] = num(s.model_bits);
        j.push_back(e);
    }
    return j.dump(2) + "\n";
}

}  // namespace orbitsl::report
