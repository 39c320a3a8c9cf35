// Machine-readable reports (CSV / JSON) for geometry, solves, comparisons and sweeps.
//
// Numbers are printed with 9 significant digits in SI units; the JSON and
// CSV forms of the same run carry identical numerics.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitsl/optimizer.hpp"
#include "orbitsl/scenario.hpp"

namespace orbitsl::report {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kSolveSchema = "orbitsl.solve.v1";
inline constexpr const char* kCompareSchema = "orbitsl.compare.v1";
inline constexpr const char* kGeometrySchema = "orbitsl.geometry.v1";

/// "%.9g"
std::string format_number(double value);

/// Value after a round trip through format_number.
double rounded(double value);

std::string geometry_text(const scenario::Scenario& sc);
std::string geometry_json(const scenario::Scenario& sc);

/// One solved (or failed) run in a solve/sweep report.
struct SolveRow {
    std::string label;
    std::string solver;  // "bisection" or "grid_oracle"
    double pass_scale = 1.0;
    std::optional<optimizer::SolveReport> report;
    std::string error;
    bool infeasible = false;
    bool argmin = false;
};

std::string solve_csv(const scenario::Scenario& sc, const std::vector<SolveRow>& rows);
std::string solve_json(const scenario::Scenario& sc, const std::string& command,
                       const std::vector<SolveRow>& rows);

struct Comparison {
    std::optional<optimizer::SolveReport> split_learning;
    std::optional<optimizer::SolveReport> direct_download;
    std::string split_error;
    std::string direct_error;

    /// 100 * (1 - E_SL / E_direct); empty unless both sides solved.
    std::optional<double> savings_percent() const;
};

std::string compare_csv(const scenario::Scenario& sc, const Comparison& cmp);
std::string compare_json(const scenario::Scenario& sc, const Comparison& cmp);

std::string presets_csv();
std::string presets_json();

}  // namespace orbitsl::report
