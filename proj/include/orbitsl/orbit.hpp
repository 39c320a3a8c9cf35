// Orbital-ring geometry for a single circular shell observed by one ground
// terminal lying in the orbital plane (zenith pass, no Earth rotation).
#pragma once

#include <cstddef>

namespace orbitsl::orbit {

struct PhysicalConstants {
    double earth_radius_m = 6.371e6;
    double earth_mass_kg = 5.972e24;
    double gravitational_constant = 6.674e-11;  // m^3 kg^-1 s^-2
    double light_speed_m_s = 2.998e8;

    void validate() const;
};

struct OrbitShell {
    int num_satellites = 25;
    double altitude_m = 550e3;
    double min_elevation_rad = 0.5235987755982988;  // 30 deg

    void validate() const;
};

struct PassGeometry {
    double period_s = 0.0;
    double slant_at_min_elev_m = 0.0;
    double central_angle_rad = 0.0;
    double pass_duration_s = 0.0;
    double isl_distance_m = 0.0;
    double mean_slant_m = 0.0;
    double prop_delay_s = 0.0;
};

inline constexpr std::size_t kDefaultMeanSlantSamples = 1000;

double orbital_period(const OrbitShell& shell, const PhysicalConstants& consts);

/// Ground-to-satellite distance at elevation `elevation_rad` in (0, pi/2].
double slant_range(double elevation_rad, const OrbitShell& shell, const PhysicalConstants& consts);

/// Earth central angle swept while the satellite is above the minimum elevation.
double pass_central_angle(const OrbitShell& shell, const PhysicalConstants& consts);

/// Visibility time of one pass: T_o * alpha_pass / (2 pi).
double pass_duration(const OrbitShell& shell, const PhysicalConstants& consts);

/// Pass duration for an arbitrary central angle (full circle gives the period).
double pass_duration_for_angle(double central_angle_rad, double period_s);

/// Chord between neighbouring satellites of the ring.
double isl_distance(const OrbitShell& shell, const PhysicalConstants& consts);

/// Slant range when the satellite sits `central_angle_rad` away from the terminal's zenith.
double slant_at_central_angle(double central_angle_rad, const OrbitShell& shell,
                              const PhysicalConstants& consts);

/// Time-averaged slant range over one pass, trapezoid rule on `samples` points.
double mean_slant_range(const OrbitShell& shell, const PhysicalConstants& consts,
                        std::size_t samples = kDefaultMeanSlantSamples);

PassGeometry pass_geometry(const OrbitShell& shell, const PhysicalConstants& consts,
                           std::size_t samples = kDefaultMeanSlantSamples);

}  // namespace orbitsl::orbit
