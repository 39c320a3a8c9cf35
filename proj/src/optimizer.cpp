#include "orbitsl/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "orbitsl/errors.hpp"

namespace orbitsl::optimizer {

namespace {

using scenario::Scenario;

/// Latency terms that no decision variable controls.
struct FixedTerms {
    double prop_s = 0.0;
    link::IslTransfer isl;
};

FixedTerms fixed_terms(const Scenario& sc, Architecture arch) {
    FixedTerms f;
    f.prop_s = sc.geometry().prop_delay_s;
    if (arch == Architecture::split_learning) {
        f.isl = link::isl_transfer(sc.split.model_bits, sc.isl, sc.consts);
    }
    return f;
}

double batch_items(const Scenario& sc) { return static_cast<double>(sc.batch.num_items); }

EnergyBreakdown evaluate(const Allocation& a, const Scenario& sc, Architecture arch,
                         const FixedTerms& fixed) {
    const double n = batch_items(sc);
    EnergyBreakdown b;
    b.t_prop_s = fixed.prop_s;
    if (arch == Architecture::split_learning) {
        const double w1 = n * sc.split.flops_sat_per_item;
        const double w2 = n * sc.split.flops_ground_per_item;
        const double down = n * sc.split.activation_bits_per_item;
        const double up = n * sc.split.gradient_bits_per_item;

        b.t_proc_sat_s = compute::proc_time(w1, a.freq_sat_hz, sc.proc_sat);
        b.e_proc_sat_j = compute::proc_energy(w1, a.freq_sat_hz, sc.proc_sat);
        b.t_comm_down_s = link::comm_time(down, a.power_down_w, sc.link_down);
        b.e_comm_down_j = link::comm_energy(down, a.power_down_w, sc.link_down);
        b.t_proc_ground_s = compute::proc_time(w2, a.freq_ground_hz, sc.proc_ground);
        b.e_proc_ground_j = compute::proc_energy(w2, a.freq_ground_hz, sc.proc_ground);
        b.t_comm_up_s = link::comm_time(up, a.power_up_w, sc.link_up);
        b.e_comm_up_j = link::comm_energy(up, a.power_up_w, sc.link_up);
        b.t_isl_s = fixed.isl.time_s;
        b.e_isl_j = fixed.isl.energy_j;

        b.t_total_s = b.t_proc_sat_s + b.t_comm_down_s + 2.0 * b.t_prop_s + b.t_proc_ground_s +
                      b.t_comm_up_s + b.t_isl_s;
    } else {
        const double raw = n * sc.batch.bits_per_item;
        const double work = n * sc.split.total_flops_per_item();

        b.t_comm_down_s = link::comm_time(raw, a.power_down_w, sc.link_down);
        b.e_comm_down_j = link::comm_energy(raw, a.power_down_w, sc.link_down);
        b.t_proc_ground_s = compute::proc_time(work, a.freq_ground_hz, sc.proc_ground);
        b.e_proc_ground_j = compute::proc_energy(work, a.freq_ground_hz, sc.proc_ground);

        b.t_total_s = b.t_comm_down_s + b.t_prop_s + b.t_proc_ground_s;
    }
    b.e_total_j = b.e_proc_sat_j + b.e_comm_down_j + b.e_proc_ground_j + b.e_comm_up_j + b.e_isl_j;
    return b;
}

/// Every variable the architecture uses at its cap; unused ones at 0.
Allocation full_speed(const Scenario& sc, Architecture arch) {
    Allocation a;
    a.freq_ground_hz = sc.proc_ground.max_freq_hz;
    a.power_down_w = sc.link_down.max_tx_power_w;
    if (arch == Architecture::split_learning) {
        a.freq_sat_hz = sc.proc_sat.max_freq_hz;
        a.power_up_w = sc.link_up.max_tx_power_w;
    }
    return a;
}

double& variable(Allocation& a, const std::string& stage) {
    if (stage == "proc_sat") return a.freq_sat_hz;
    if (stage == "comm_down") return a.power_down_w;
    if (stage == "proc_ground") return a.freq_ground_hz;
    return a.power_up_w;
}

double stage_time(const EnergyBreakdown& b, const std::string& stage) {
    if (stage == "proc_sat") return b.t_proc_sat_s;
    if (stage == "comm_down") return b.t_comm_down_s;
    if (stage == "proc_ground") return b.t_proc_ground_s;
    return b.t_comm_up_s;
}

double stage_energy(const EnergyBreakdown& b, const std::string& stage) {
    if (stage == "proc_sat") return b.e_proc_sat_j;
    if (stage == "comm_down") return b.e_comm_down_j;
    if (stage == "proc_ground") return b.e_proc_ground_j;
    return b.e_comm_up_j;
}

double stage_cap(const Stage& s) {
    return s.kind == StageKind::compute ? s.processor.max_freq_hz : s.radio.max_tx_power_w;
}

const char* constraint_name(const std::string& stage) {
    if (stage == "proc_sat") return "f_sat_max";
    if (stage == "comm_down") return "p_down_max";
    if (stage == "proc_ground") return "f_gs_max";
    return "p_up_max";
}

/// Fills breakdown-derived fields shared by the solver and the grid oracle.
void finalize(SolveReport& r, const Scenario& sc, const std::vector<Stage>& stages,
              const FixedTerms& fixed, double latency_tol) {
    r.breakdown = evaluate(r.allocation, sc, r.architecture, fixed);
    r.stages.clear();
    r.active_constraints.clear();
    if (r.breakdown.t_total_s >= r.pass_budget_s - latency_tol) {
        r.active_constraints.emplace_back("latency");
    }
    static const char* const kOrder[] = {"proc_sat", "proc_ground", "comm_down", "comm_up"};
    for (const char* name : kOrder) {
        for (const auto& s : stages) {
            if (s.name == name && variable(r.allocation, s.name) == stage_cap(s)) {
                r.active_constraints.emplace_back(constraint_name(s.name));
            }
        }
    }
    for (const auto& s : stages) {
        StageResult sr;
        sr.name = s.name;
        sr.time_s = stage_time(r.breakdown, s.name);
        sr.min_time_s = s.min_time();
        sr.energy_j = stage_energy(r.breakdown, s.name);
        sr.marginal = -s.derivative(sr.time_s);
        sr.clamped = variable(r.allocation, s.name) == stage_cap(s);
        r.stages.push_back(sr);
    }
}

[[noreturn]] void throw_infeasible(const std::vector<Stage>& stages, double fixed, double pass) {
    std::vector<const Stage*> order;
    for (const auto& s : stages) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(),
                     [](const Stage* a, const Stage* b) { return a->min_time() > b->min_time(); });
    double required = fixed;
    std::vector<std::string> names;
    std::ostringstream msg;
    msg.precision(9);
    msg << "infeasible: pass budget " << pass << " s is shorter than the minimum " ;
    for (const auto* s : order) {
        required += s->min_time();
        names.push_back(s->name);
    }
    msg << required << " s (fixed " << fixed << " s";
    for (const auto* s : order) {
        msg << ", " << s->name << " " << s->min_time() << " s";
    }
    msg << ")";
    throw InfeasibleProblem(msg.str(), std::move(names), required);
}

double solve_marginal_shape(double target, double y_max) {
    // g(y) = e^y (y - 1) + 1 is convex increasing with g(y) >= y^2/2, so
    // Newton started right of the root approaches it monotonically.
    double lo = 0.0;
    double hi = y_max;
    double y = std::min(hi, std::sqrt(2.0 * target));
    for (int i = 0; i < 200; ++i) {
        const double residual = link::marginal_shape(y) - target;
        if (residual == 0.0) break;
        if (residual > 0.0) {
            hi = y;
        } else {
            lo = y;
        }
        double next = y - residual / (y * std::exp(y));
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - y) <= 1e-15 * next) {
            y = next;
            break;
        }
        y = next;
    }
    return y;
}

}  // namespace

std::string_view to_string(Architecture arch) {
    return arch == Architecture::split_learning ? "split_learning" : "direct_download";
}

// ---------------------------------------------------------------------------
// Stage

double Stage::min_time() const {
    return kind == StageKind::compute ? compute::min_time(amount, processor)
                                      : link::min_comm_time(amount, radio);
}

double Stage::energy(double time_s) const {
    return kind == StageKind::compute ? compute::energy_vs_time(amount, time_s, processor)
                                      : link::comm_energy_vs_time(amount, time_s, radio);
}

double Stage::derivative(double time_s) const {
    return kind == StageKind::compute
               ? compute::energy_vs_time_derivative(amount, time_s, processor)
               : link::comm_energy_vs_time_derivative(amount, time_s, radio);
}

double Stage::time_for_marginal(double lambda) const {
    const double t_min = min_time();
    if (!(lambda > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    if (kind == StageKind::compute) {
        const double c = compute::energy_time_coefficient(amount, processor);
        return std::max(t_min, std::cbrt(2.0 * c / lambda));
    }
    // -E'(t) = marginal_shape(y) / snr, y = ln2 * bits / (B t)
    const double target = lambda * radio.snr_per_watt();
    const double scale = std::numbers::ln2 * amount / radio.bandwidth_hz;
    const double y_max = scale / t_min;
    if (link::marginal_shape(y_max) <= target) {
        return t_min;
    }
    const double y = solve_marginal_shape(target, y_max);
    return std::max(t_min, scale / y);
}

// ---------------------------------------------------------------------------

std::vector<Stage> build_stages(const Scenario& sc, Architecture arch) {
    const double n = batch_items(sc);
    std::vector<Stage> stages;
    auto add_compute = [&](const char* name, double work, const compute::ProcessorSpec& p) {
        if (work > 0.0) {
            Stage s;
            s.name = name;
            s.kind = StageKind::compute;
            s.amount = work;
            s.processor = p;
            stages.push_back(std::move(s));
        }
    };
    auto add_comm = [&](const char* name, double bits, const link::RadioLink& r) {
        if (bits > 0.0) {
            Stage s;
            s.name = name;
            s.kind = StageKind::comm;
            s.amount = bits;
            s.radio = r;
            stages.push_back(std::move(s));
        }
    };
    if (arch == Architecture::split_learning) {
        add_compute("proc_sat", n * sc.split.flops_sat_per_item, sc.proc_sat);
        add_comm("comm_down", n * sc.split.activation_bits_per_item, sc.link_down);
        add_compute("proc_ground", n * sc.split.flops_ground_per_item, sc.proc_ground);
        add_comm("comm_up", n * sc.split.gradient_bits_per_item, sc.link_up);
    } else {
        add_comm("comm_down", n * sc.batch.bits_per_item, sc.link_down);
        add_compute("proc_ground", n * sc.split.total_flops_per_item(), sc.proc_ground);
    }
    return stages;
}

double fixed_time(const Scenario& sc, Architecture arch) {
    const FixedTerms f = fixed_terms(sc, arch);
    return arch == Architecture::split_learning ? 2.0 * f.prop_s + f.isl.time_s : f.prop_s;
}

EnergyBreakdown total_energy(const Allocation& alloc, const Scenario& sc, Architecture arch) {
    return evaluate(alloc, sc, arch, fixed_terms(sc, arch));
}

SolveReport solve(const Scenario& sc, Architecture arch, const SolverOptions& options) {
    const FixedTerms fixed = fixed_terms(sc, arch);
    const double t_fixed =
        arch == Architecture::split_learning ? 2.0 * fixed.prop_s + fixed.isl.time_s : fixed.prop_s;
    const std::vector<Stage> stages = build_stages(sc, arch);

    SolveReport r;
    r.architecture = arch;
    r.split_label = sc.split.split_label;
    r.pass_budget_s = sc.pass_budget_s();
    r.allocation = full_speed(sc, arch);

    const double budget = r.pass_budget_s - t_fixed;
    const double latency_tol = options.budget_rel_tol * r.pass_budget_s;

    double min_sum = 0.0;
    for (const auto& s : stages) min_sum += s.min_time();
    if (min_sum > budget || budget < 0.0) {
        throw_infeasible(stages, t_fixed, r.pass_budget_s);
    }

    if (stages.empty()) {
        r.converged = true;
        finalize(r, sc, stages, fixed, latency_tol);
        return r;
    }

    if (budget - min_sum <= options.budget_rel_tol * budget) {
        // No slack: every stage runs flat out. Report the largest marginal as
        // the (lower bound of the) multiplier.
        for (const auto& s : stages) r.lambda = std::max(r.lambda, -s.derivative(s.min_time()));
        r.converged = true;
        finalize(r, sc, stages, fixed, latency_tol);
        return r;
    }

    auto total_time = [&](double lambda) {
        double sum = 0.0;
        for (const auto& s : stages) sum += s.time_for_marginal(lambda);
        return sum;
    };

    constexpr int kMaxBracketSteps = 4000;
    double hi = 1.0;
    int steps = 0;
    while (total_time(hi) > budget) {
        hi *= 2.0;
        if (++steps > kMaxBracketSteps || !std::isfinite(hi)) {
            throw NonConvergence("multiplier bracket could not be closed from above");
        }
    }
    double lo = 0.5 * hi;
    if (steps == 0) {
        while (total_time(lo) <= budget) {
            hi = lo;
            lo *= 0.5;
            if (++steps > kMaxBracketSteps || lo == 0.0) {
                throw NonConvergence("multiplier bracket could not be closed from below");
            }
        }
    }

    double time_hi = total_time(hi);
    bool converged = budget - time_hi <= options.budget_rel_tol * budget;
    int it = 0;
    while (!converged && it < options.max_iterations) {
        ++it;
        const double mid = std::sqrt(lo * hi);
        const double t_mid = total_time(mid);
        if (t_mid > budget) {
            lo = mid;
        } else {
            hi = mid;
            time_hi = t_mid;
        }
        converged = budget - time_hi <= options.budget_rel_tol * budget ||
                    hi - lo <= options.bracket_rel_tol * hi;
    }
    if (!converged) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "multiplier bisection did not converge after " << it << " iterations; bracket ["
            << lo << ", " << hi << "], stage time " << time_hi << " s vs budget " << budget << " s";
        throw NonConvergence(msg.str());
    }

    r.lambda = hi;
    r.iterations = it;
    r.converged = true;
    for (const auto& s : stages) {
        const double t = s.time_for_marginal(hi);
        double& v = variable(r.allocation, s.name);
        const double cap = stage_cap(s);
        if (t <= s.min_time()) {
            v = cap;
        } else if (s.kind == StageKind::compute) {
            v = std::min(cap, compute::freq_for_time(s.amount, t, s.processor));
        } else {
            v = std::min(cap, link::power_for_time(s.amount, t, s.radio));
        }
    }
    finalize(r, sc, stages, fixed, latency_tol);
    return r;
}

SolveReport minimize_energy(const Scenario& sc, const SolverOptions& options) {
    return solve(sc, Architecture::split_learning, options);
}

SolveReport minimize_energy_direct_download(const Scenario& sc, const SolverOptions& options) {
    return solve(sc, Architecture::direct_download, options);
}

// ---------------------------------------------------------------------------
// Grid oracle. Uses only the forward time/energy models.

namespace {

struct OracleAxis {
    const Stage* stage = nullptr;
    double lo = 0.0;
    double hi = 0.0;
};

double forward_time(const Stage& s, double v) {
    return s.kind == StageKind::compute ? compute::proc_time(s.amount, v, s.processor)
                                        : link::comm_time(s.amount, v, s.radio);
}

/// Smallest setting v in (0, cap] with forward_time(v) <= target, by bisection in log v.
/// Assumes forward_time(cap) <= target.
double slowest_setting_within(const Stage& s, double target) {
    const double cap = stage_cap(s);
    double hi = cap;
    double lo = cap;
    while (forward_time(s, lo) <= target) {
        hi = lo;
        lo *= 0.5;
        if (lo < cap * 1e-300) return hi;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (forward_time(s, mid) <= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double ratio = std::log(hi / lo);
    for (int k = 0; k < n; ++k) {
        g[static_cast<std::size_t>(k)] = lo * std::exp(ratio * k / (n - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace

SolveReport oracle_grid_search(const Scenario& sc, int points_per_axis, Architecture arch,
                               const GridOptions& options) {
    if (points_per_axis < 10) {
        throw DomainError("oracle_grid_search needs at least 10 points per axis");
    }
    const FixedTerms fixed = fixed_terms(sc, arch);
    const std::vector<Stage> stages = build_stages(sc, arch);

    SolveReport best;
    best.architecture = arch;
    best.split_label = sc.split.split_label;
    best.pass_budget_s = sc.pass_budget_s();
    best.converged = true;

    const Allocation top = full_speed(sc, arch);
    const EnergyBreakdown fastest = evaluate(top, sc, arch, fixed);
    double t_fixed = fastest.t_total_s;
    for (const auto& s : stages) t_fixed -= stage_time(fastest, s.name);
    const double budget = best.pass_budget_s - t_fixed;
    const double feasibility_slack = 1e-9 * best.pass_budget_s;
    if (fastest.t_total_s > best.pass_budget_s) {
        throw_infeasible(stages, t_fixed, best.pass_budget_s);
    }
    if (stages.empty()) {
        best.allocation = top;
        finalize(best, sc, stages, fixed, 1e-6 * best.pass_budget_s);
        return best;
    }

    // The stage with the longest minimum duration absorbs the leftover budget.
    std::size_t fill = 0;
    for (std::size_t i = 1; i < stages.size(); ++i) {
        if (stage_time(fastest, stages[i].name) > stage_time(fastest, stages[fill].name)) fill = i;
    }
    std::vector<OracleAxis> axes;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (i == fill) continue;
        OracleAxis ax;
        ax.stage = &stages[i];
        ax.hi = stage_cap(stages[i]);
        ax.lo = slowest_setting_within(stages[i], budget);
        axes.push_back(ax);
    }

    double best_energy = std::numeric_limits<double>::infinity();
    Allocation best_alloc;
    std::vector<double> best_setting(axes.size());
    long long evaluations = 0;

    for (int round = 0; round <= options.refine_rounds; ++round) {
        std::vector<std::vector<double>> settings(axes.size());
        std::vector<std::vector<double>> times(axes.size());
        for (std::size_t a = 0; a < axes.size(); ++a) {
            settings[a] = log_grid(axes[a].lo, axes[a].hi, points_per_axis);
            for (double v : settings[a]) times[a].push_back(forward_time(*axes[a].stage, v));
        }
        const Stage& fill_stage = stages[fill];
        const double fill_fastest = forward_time(fill_stage, stage_cap(fill_stage));

        std::vector<std::size_t> idx(axes.size(), 0);
        while (true) {
            double used = 0.0;
            for (std::size_t a = 0; a < axes.size(); ++a) used += times[a][idx[a]];
            const double remaining = budget - used;
            if (remaining >= fill_fastest) {
                Allocation alloc = top;
                for (std::size_t a = 0; a < axes.size(); ++a) {
                    variable(alloc, axes[a].stage->name) = settings[a][idx[a]];
                }
                variable(alloc, fill_stage.name) = slowest_setting_within(fill_stage, remaining);
                const EnergyBreakdown b = evaluate(alloc, sc, arch, fixed);
                ++evaluations;
                if (b.t_total_s <= best.pass_budget_s + feasibility_slack &&
                    b.e_total_j < best_energy) {
                    best_energy = b.e_total_j;
                    best_alloc = alloc;
                    for (std::size_t a = 0; a < axes.size(); ++a) {
                        best_setting[a] = settings[a][idx[a]];
                    }
                }
            }
            std::size_t a = 0;
            for (; a < axes.size(); ++a) {
                if (++idx[a] < settings[a].size()) break;
                idx[a] = 0;
            }
            if (a == axes.size()) break;
        }

        if (!std::isfinite(best_energy)) break;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const double step = std::pow(axes[a].hi / axes[a].lo, 1.0 / (points_per_axis - 1));
            const double span = step * step;
            axes[a].lo = std::max(axes[a].lo, best_setting[a] / span);
            axes[a].hi = std::min(axes[a].hi, best_setting[a] * span);
        }
        if (axes.empty()) break;
    }

    if (!std::isfinite(best_energy)) {
        throw InfeasibleProblem("grid oracle found no feasible allocation", {}, best.pass_budget_s);
    }
    best.allocation = best_alloc;
    best.iterations = static_cast<int>(std::min<long long>(evaluations, std::numeric_limits<int>::max()));
    finalize(best, sc, stages, fixed, 1e-6 * best.pass_budget_s);
    return best;
}

// ---------------------------------------------------------------------------

SweepResult sweep_splits(const Scenario& sc, const std::vector<compute::WorkloadSplit>& catalog,
                         const SolverOptions& options) {
    if (catalog.empty()) {
        throw DomainError("sweep_splits needs a non-empty catalog");
    }
    std::vector<std::future<SweepEntry>> jobs;
    for (const auto& split : catalog) {
        jobs.push_back(std::async(std::launch::async, [sc, split, options]() {
            SweepEntry e;
            e.label = split.split_label;
            Scenario local = sc;
            local.split = split;
            try {
                e.report = minimize_energy(local, options);
            } catch (const InfeasibleProblem& ex) {
                e.infeasible = true;
                e.error = ex.what();
            } catch (const Error& ex) {
                e.error = ex.what();
            }
            return e;
        }));
    }
    SweepResult result;
    for (auto& job : jobs) {
        result.entries.push_back(job.get());
    }
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
        const auto& rep = result.entries[i].report;
        if (!rep) continue;
        if (!result.argmin ||
            rep->breakdown.e_total_j < result.entries[*result.argmin].report->breakdown.e_total_j) {
            result.argmin = i;
        }
    }
    return result;
}

}  // namespace orbitsl::optimizer
