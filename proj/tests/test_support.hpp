// Randomized scenario generation shared by the optimizer tests and the acceptance suite.
#pragma once

#include <cmath>
#include <random>

#include "orbitsl/optimizer.hpp"
#include "orbitsl/scenario.hpp"

namespace orbitsl::testing {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Feasible split-learning scenario with a single batch item carrying the
/// stage totals: workloads 1e9..1e15 FLOP, transfers 1e3..1e9 bit, budget
/// 10..1000 s. Hardware parameters are perturbed around the defaults.
inline scenario::Scenario random_scenario(std::mt19937_64& rng) {
    while (true) {
        scenario::Scenario sc = scenario::default_scenario();
        sc.batch.num_items = 1;
        sc.batch.bits_per_item = log_uniform(rng, 1e3, 1e9);
        sc.split.split_label = "random";
        sc.split.flops_sat_per_item = log_uniform(rng, 1e9, 1e15);
        sc.split.flops_ground_per_item = log_uniform(rng, 1e9, 1e15);
        sc.split.activation_bits_per_item = log_uniform(rng, 1e3, 1e9);
        sc.split.gradient_bits_per_item = log_uniform(rng, 1e3, 1e9);
        sc.split.model_bits = log_uniform(rng, 1e3, 1e9);
        sc.proc_sat.power_at_max_w = uniform(rng, 5.0, 30.0);
        sc.proc_sat.max_freq_hz = uniform(rng, 300e6, 1.5e9);
        sc.proc_ground.power_at_max_w = uniform(rng, 5.0, 60.0);
        sc.proc_ground.max_freq_hz = uniform(rng, 300e6, 2e9);
        sc.link_down.max_tx_power_w = uniform(rng, 1.0, 20.0);
        sc.link_up.max_tx_power_w = uniform(rng, 1.0, 20.0);
        sc.link_up.bandwidth_hz = uniform(rng, 50e6, 500e6);
        sc.refresh_derived();

        const auto stages = optimizer::build_stages(sc, optimizer::Architecture::split_learning);
        double min_sum = optimizer::fixed_time(sc, optimizer::Architecture::split_learning);
        for (const auto& s : stages) min_sum += s.min_time();
        const double lo = std::max(10.0, 1.05 * min_sum);
        if (lo >= 1000.0) continue;
        const double budget = log_uniform(rng, lo, 1000.0);
        sc.pass_scale = budget / orbit::pass_duration(sc.shell, sc.consts);
        return sc;
    }
}

}  // namespace orbitsl::testing
