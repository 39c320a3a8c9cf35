// Per-pass energy minimization over processor clocks and transmit powers.
//
// After eliminating the decision variables through the time models, every
// stage (satellite compute, downlink, ground compute, uplink) has an energy
// E_i(t_i) that is strictly convex and decreasing in its duration, bounded
// below by the duration at full clock / full power. The coupled problem
//
//     minimize  sum_i E_i(t_i)   s.t.  sum_i t_i <= T_pass - T_fixed,  t_i >= t_i,min
//
// is solved by bisection on the multiplier lambda of the latency budget:
// each stage independently picks the t_i where -E_i'(t_i) = lambda.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "orbitsl/compute.hpp"
#include "orbitsl/link.hpp"
#include "orbitsl/scenario.hpp"

namespace orbitsl::optimizer {

enum class Architecture {
    split_learning,   // satellite runs W1, ground runs W2, activations down, gradients up
    direct_download,  // raw items down, ground runs W1 + W2
};

std::string_view to_string(Architecture arch);

/// Decision variables. Variables an architecture does not use are 0.
struct Allocation {
    double freq_sat_hz = 0.0;
    double freq_ground_hz = 0.0;
    double power_down_w = 0.0;
    double power_up_w = 0.0;
};

struct EnergyBreakdown {
    double e_proc_sat_j = 0.0;
    double e_comm_down_j = 0.0;
    double e_proc_ground_j = 0.0;
    double e_comm_up_j = 0.0;
    double e_isl_j = 0.0;
    double e_total_j = 0.0;

    double t_proc_sat_s = 0.0;
    double t_comm_down_s = 0.0;
    double t_prop_s = 0.0;  // one-way; counted once per traversal in t_total_s
    double t_proc_ground_s = 0.0;
    double t_comm_up_s = 0.0;
    double t_isl_s = 0.0;  // transmission + propagation
    double t_total_s = 0.0;
};

enum class StageKind { compute, comm };

/// One separable stage of the reduced problem.
struct Stage {
    std::string name;  // proc_sat, comm_down, proc_ground, comm_up
    StageKind kind = StageKind::compute;
    double amount = 0.0;  // total FLOPs or bits
    compute::ProcessorSpec processor;
    link::RadioLink radio;

    double min_time() const;
    double energy(double time_s) const;
    double derivative(double time_s) const;

    /// Duration at which -E'(t) = lambda, clamped below at min_time().
    double time_for_marginal(double lambda) const;
};

struct StageResult {
    std::string name;
    double time_s = 0.0;
    double min_time_s = 0.0;
    double energy_j = 0.0;
    double marginal = 0.0;  // -E'(t), J/s
    bool clamped = false;
};

struct SolveReport {
    Architecture architecture = Architecture::split_learning;
    std::string split_label;
    Allocation allocation;
    EnergyBreakdown breakdown;
    /// Subset of {latency, f_sat_max, f_gs_max, p_down_max, p_up_max}, in that order.
    std::vector<std::string> active_constraints;
    double lambda = 0.0;  // J per second of latency budget
    int iterations = 0;
    bool converged = false;
    double pass_budget_s = 0.0;
    std::vector<StageResult> stages;
};

struct SolverOptions {
    double budget_rel_tol = 1e-6;
    double bracket_rel_tol = 1e-8;
    int max_iterations = 200;
};

struct GridOptions {
    /// Zoom rounds after the full-range pass; each recentres the grid on the incumbent.
    int refine_rounds = 6;
};

/// Non-degenerate stages of `arch` in the order proc_sat, comm_down, proc_ground, comm_up.
std::vector<Stage> build_stages(const scenario::Scenario& scenario, Architecture arch);

/// Latency not controlled by any decision variable (propagation and ISL).
double fixed_time(const scenario::Scenario& scenario, Architecture arch);

/// Evaluates the per-term energies and times of an allocation. Checks box
/// constraints only; latency feasibility is left to the caller.
EnergyBreakdown total_energy(const Allocation& alloc, const scenario::Scenario& scenario,
                             Architecture arch = Architecture::split_learning);

SolveReport minimize_energy(const scenario::Scenario& scenario, const SolverOptions& options = {});

SolveReport minimize_energy_direct_download(const scenario::Scenario& scenario,
                                            const SolverOptions& options = {});

SolveReport solve(const scenario::Scenario& scenario, Architecture arch,
                  const SolverOptions& options = {});

/// Brute-force reference: log-spaced grid over the decision variables, the
/// slowest feasible setting for the longest stage filling the remaining budget.
/// Intended for verification.
SolveReport oracle_grid_search(const scenario::Scenario& scenario, int points_per_axis,
                               Architecture arch = Architecture::split_learning,
                               const GridOptions& options = {});

struct SweepEntry {
    std::string label;
    std::optional<SolveReport> report;
    std::string error;  // set when the entry failed
    bool infeasible = false;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    std::optional<std::size_t> argmin;  // index of the lowest-energy solved entry
};

SweepResult sweep_splits(const scenario::Scenario& scenario,
                         const std::vector<compute::WorkloadSplit>& catalog,
                         const SolverOptions& options = {});

}  // namespace orbitsl::optimizer
