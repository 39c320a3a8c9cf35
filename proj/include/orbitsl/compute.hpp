// DVFS processing model: time = work / (cores * flops_per_cycle * f),
// power = P_max * (f / f_max)^3, so energy at fixed work scales with f^2.
#pragma once

#include <string>

namespace orbitsl::compute {

struct ProcessorSpec {
    double num_cores = 1024;
    double flops_per_cycle = 2;
    double max_freq_hz = 625e6;
    double power_at_max_w = 15.0;

    void validate() const;

    /// Peak throughput in FLOP/s.
    double capacity_flops() const { return num_cores * flops_per_cycle * max_freq_hz; }
};

/// FLOP and bit footprint of one split point of a sequential model, per data item.
struct WorkloadSplit {
    std::string split_label;
    double flops_sat_per_item = 0.0;
    double flops_ground_per_item = 0.0;
    double activation_bits_per_item = 0.0;  // downlink
    double gradient_bits_per_item = 0.0;    // uplink
    double model_bits = 0.0;                // satellite-side weights, sent over the ISL

    void validate() const;
    double total_flops_per_item() const { return flops_sat_per_item + flops_ground_per_item; }
};

struct Batch {
    long long num_items = 400;
    double bits_per_item = 1.605e6;

    void validate() const;
};

/// Fastest possible execution of `total_flops` (at f_max).
double min_time(double total_flops, const ProcessorSpec& spec);

double proc_time(double total_flops, double freq_hz, const ProcessorSpec& spec);

double proc_energy(double total_flops, double freq_hz, const ProcessorSpec& spec);

/// Power drawn at clock frequency `freq_hz`.
double power_at(double freq_hz, const ProcessorSpec& spec);

/// Frequency that finishes `total_flops` in exactly `time_s`.
double freq_for_time(double total_flops, double time_s, const ProcessorSpec& spec);

/// Energy when the stage is stretched to exactly `alloc_time_s`:
/// E(t) = (P/f_max^3) * (W / (N_c N_FLOPS))^3 / t^2.
double energy_vs_time(double total_flops, double alloc_time_s, const ProcessorSpec& spec);

/// dE/dt of energy_vs_time; always negative for positive work.
double energy_vs_time_derivative(double total_flops, double alloc_time_s,
                                 const ProcessorSpec& spec);

/// Coefficient c of E(t) = c / t^2.
double energy_time_coefficient(double total_flops, const ProcessorSpec& spec);

}  // namespace orbitsl::compute
