#include "orbitsl/compute.hpp"

#include <cmath>
#include <string>

#include "orbitsl/errors.hpp"

namespace orbitsl::compute {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be finite and strictly positive");
    }
}

void require_non_negative(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be finite and non-negative");
    }
}

void check_freq(double freq_hz, const ProcessorSpec& spec) {
    if (!(freq_hz > 0.0)) {
        throw DomainError("processor frequency must be strictly positive");
    }
    if (freq_hz > spec.max_freq_hz) {
        throw ConstraintViolation("processor frequency " + std::to_string(freq_hz) +
                                  " Hz exceeds maximum " + std::to_string(spec.max_freq_hz) +
                                  " Hz");
    }
}

double throughput_per_hz(const ProcessorSpec& spec) { return spec.num_cores * spec.flops_per_cycle; }

}  // namespace

void ProcessorSpec::validate() const {
    require_positive(num_cores, "num_cores");
    require_positive(flops_per_cycle, "flops_per_cycle");
    require_positive(max_freq_hz, "max_freq_hz");
    require_positive(power_at_max_w, "power_at_max_w");
}

void WorkloadSplit::validate() const {
    require_non_negative(flops_sat_per_item, "flops_sat_per_item");
    require_non_negative(flops_ground_per_item, "flops_ground_per_item");
    require_non_negative(activation_bits_per_item, "activation_bits_per_item");
    require_non_negative(gradient_bits_per_item, "gradient_bits_per_item");
    require_non_negative(model_bits, "model_bits");
}

void Batch::validate() const {
    if (num_items < 1) {
        throw DomainError("num_items must be >= 1");
    }
    require_positive(bits_per_item, "bits_per_item");
}

double min_time(double total_flops, const ProcessorSpec& spec) {
    require_non_negative(total_flops, "total_flops");
    return total_flops / (throughput_per_hz(spec) * spec.max_freq_hz);
}

double proc_time(double total_flops, double freq_hz, const ProcessorSpec& spec) {
    require_non_negative(total_flops, "total_flops");
    check_freq(freq_hz, spec);
    return total_flops / (throughput_per_hz(spec) * freq_hz);
}

double proc_energy(double total_flops, double freq_hz, const ProcessorSpec& spec) {
    require_non_negative(total_flops, "total_flops");
    check_freq(freq_hz, spec);
    const double fmax = spec.max_freq_hz;
    return total_flops * spec.power_at_max_w * freq_hz * freq_hz /
           (throughput_per_hz(spec) * fmax * fmax * fmax);
}

double power_at(double freq_hz, const ProcessorSpec& spec) {
    check_freq(freq_hz, spec);
    const double ratio = freq_hz / spec.max_freq_hz;
    return spec.power_at_max_w * ratio * ratio * ratio;
}

double freq_for_time(double total_flops, double time_s, const ProcessorSpec& spec) {
    require_non_negative(total_flops, "total_flops");
    require_positive(time_s, "time_s");
    return total_flops / (throughput_per_hz(spec) * time_s);
}

double energy_time_coefficient(double total_flops, const ProcessorSpec& spec) {
    require_non_negative(total_flops, "total_flops");
    // Written as P * t_min^3 so that large FLOP counts do not overflow the cube.
    const double t_min = total_flops / (throughput_per_hz(spec) * spec.max_freq_hz);
    return spec.power_at_max_w * t_min * t_min * t_min;
}

double energy_vs_time(double total_flops, double alloc_time_s, const ProcessorSpec& spec) {
    require_positive(alloc_time_s, "alloc_time_s");
    const double t_min = min_time(total_flops, spec);
    if (alloc_time_s < t_min) {
        throw InfeasibleStage("processing stage needs at least " + std::to_string(t_min) +
                              " s, got " + std::to_string(alloc_time_s) + " s");
    }
    return energy_time_coefficient(total_flops, spec) / (alloc_time_s * alloc_time_s);
}

double energy_vs_time_derivative(double total_flops, double alloc_time_s,
                                 const ProcessorSpec& spec) {
    require_positive(alloc_time_s, "alloc_time_s");
    return -2.0 * energy_time_coefficient(total_flops, spec) /
           (alloc_time_s * alloc_time_s * alloc_time_s);
}

}  // namespace orbitsl::compute
