#include "orbitsl/link.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "orbitsl/errors.hpp"

namespace orbitsl::link {

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

void check_power(double tx_power_w, const RadioLink& link) {
    if (!(tx_power_w > 0.0)) {
        throw DomainError("transmit power must be strictly positive");
    }
    if (tx_power_w > link.max_tx_power_w) {
        throw ConstraintViolation("transmit power " + std::to_string(tx_power_w) +
                                  " W exceeds maximum " + std::to_string(link.max_tx_power_w) +
                                  " W");
    }
}

}  // namespace

void RadioLink::validate() const {
    require_positive(bandwidth_hz, "bandwidth_hz");
    require_positive(carrier_hz, "carrier_hz");
    require_positive(antenna_gain_linear, "antenna_gain_linear");
    require_positive(noise_power_w, "noise_power_w");
    require_positive(max_tx_power_w, "max_tx_power_w");
    if (!(path_loss_linear >= 1.0) || !std::isfinite(path_loss_linear)) {
        throw DomainError("path_loss_linear must be finite and >= 1");
    }
}

void IslLink::validate() const {
    require_positive(data_rate_bps, "data_rate_bps");
    require_positive(tx_power_w, "tx_power_w");
    require_positive(distance_m, "distance_m");
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

double from_db(double db) { return std::pow(10.0, db / 10.0); }

double fspl(double distance_m, double carrier_hz, const orbit::PhysicalConstants& consts) {
    require_positive(distance_m, "distance_m");
    require_positive(carrier_hz, "carrier_hz");
    const double amplitude = 4.0 * std::numbers::pi * distance_m * carrier_hz / consts.light_speed_m_s;
    return amplitude * amplitude;
}

double shannon_rate(double tx_power_w, const RadioLink& link) {
    check_power(tx_power_w, link);
    return link.bandwidth_hz * std::log2(1.0 + tx_power_w * link.snr_per_watt());
}

double comm_time(double bits, double tx_power_w, const RadioLink& link) {
    require_non_negative(bits, "bits");
    const double rate = shannon_rate(tx_power_w, link);
    return bits == 0.0 ? 0.0 : bits / rate;
}

double comm_energy(double bits, double tx_power_w, const RadioLink& link) {
    return tx_power_w * comm_time(bits, tx_power_w, link);
}

double min_comm_time(double bits, const RadioLink& link) {
    require_non_negative(bits, "bits");
    return bits == 0.0 ? 0.0 : bits / shannon_rate(link.max_tx_power_w, link);
}

double power_for_time(double bits, double time_s, const RadioLink& link) {
    require_non_negative(bits, "bits");
    require_positive(time_s, "time_s");
    const double y = std::numbers::ln2 * bits / (link.bandwidth_hz * time_s);
    return std::expm1(y) / link.snr_per_watt();
}

double comm_energy_vs_time(double bits, double alloc_time_s, const RadioLink& link) {
    require_positive(alloc_time_s, "alloc_time_s");
    if (bits == 0.0) {
        return 0.0;
    }
    const double t_min = min_comm_time(bits, link);
    if (alloc_time_s < t_min) {
        throw InfeasibleStage("communication stage needs at least " + std::to_string(t_min) +
                              " s, got " + std::to_string(alloc_time_s) + " s");
    }
    return alloc_time_s * power_for_time(bits, alloc_time_s, link);
}

double marginal_shape(double y) {
    if (y < 1.0) {
        // sum_{m>=2} (m-1)/m! y^m; the closed form cancels badly for small y.
        double power_over_factorial = y;  // y^m / m!
        double sum = 0.0;
        for (int m = 2; m < 40; ++m) {
            power_over_factorial *= y / m;
            const double term = (m - 1) * power_over_factorial;
            sum += term;
            if (term <= 1e-17 * sum) break;
        }
        return sum;
    }
    return std::exp(y) * (y - 1.0) + 1.0;
}

double comm_energy_vs_time_derivative(double bits, double alloc_time_s, const RadioLink& link) {
    require_non_negative(bits, "bits");
    require_positive(alloc_time_s, "alloc_time_s");
    const double y = std::numbers::ln2 * bits / (link.bandwidth_hz * alloc_time_s);
    return -marginal_shape(y) / link.snr_per_watt();
}

IslTransfer isl_transfer(double model_bits, const IslLink& isl,
                         const orbit::PhysicalConstants& consts) {
    require_non_negative(model_bits, "model_bits");
    IslTransfer out;
    out.transmit_time_s = model_bits / isl.data_rate_bps;
    out.propagation_s = isl.distance_m / consts.light_speed_m_s;
    out.time_s = out.transmit_time_s + out.propagation_s;
    out.energy_j = isl.tx_power_w * out.transmit_time_s;
    return out;
}

}  // namespace orbitsl::link
