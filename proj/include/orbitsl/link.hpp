// Radio links: Shannon-rate ground/satellite channel under free-space path
// loss, and the fixed-rate inter-satellite link used to hand the model over.
#pragma once

#include "orbitsl/orbit.hpp"

namespace orbitsl::link {

struct RadioLink {
    double bandwidth_hz = 500e6;
    double carrier_hz = 20e9;
    double antenna_gain_linear = 4295364.267648873;  // 66.33 dBi
    double noise_power_w = 1.258925411794166e-12;  // -119 dBW
    double max_tx_power_w = 10.0;
    double path_loss_linear = 1.0;  // filled from the pass geometry

    void validate() const;

    /// Received SNR per transmitted watt, G / (FSPL * sigma^2).
    double snr_per_watt() const { return antenna_gain_linear / (path_loss_linear * noise_power_w); }
};

struct IslLink {
    double data_rate_bps = 5e9;
    double tx_power_w = 0.5;
    double distance_m = 1.0;

    void validate() const;
};

struct IslTransfer {
    double transmit_time_s = 0.0;
    double propagation_s = 0.0;
    double time_s = 0.0;  // transmit + propagation
    double energy_j = 0.0;
};

double to_db(double linear);
double from_db(double db);

/// Free-space path loss (4 pi d f / c)^2 as a linear factor.
double fspl(double distance_m, double carrier_hz, const orbit::PhysicalConstants& consts);

double shannon_rate(double tx_power_w, const RadioLink& link);

double comm_time(double bits, double tx_power_w, const RadioLink& link);

double comm_energy(double bits, double tx_power_w, const RadioLink& link);

/// Shortest transfer time for `bits`, attained at max_tx_power_w.
double min_comm_time(double bits, const RadioLink& link);

/// Transmit power needed to move `bits` in exactly `time_s`.
double power_for_time(double bits, double time_s, const RadioLink& link);

/// E(t) = t * (FSPL sigma^2 / G) * (2^{bits/(B t)} - 1).
double comm_energy_vs_time(double bits, double alloc_time_s, const RadioLink& link);

double comm_energy_vs_time_derivative(double bits, double alloc_time_s, const RadioLink& link);

/// e^y (y - 1) + 1, accurate for small y. -dE/dt of a comm stage equals
/// (FSPL sigma^2 / G) * marginal_shape(ln2 * bits / (B t)).
double marginal_shape(double y);

IslTransfer isl_transfer(double model_bits, const IslLink& isl,
                         const orbit::PhysicalConstants& consts);

}  // namespace orbitsl::link
