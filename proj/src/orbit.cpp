#include "orbitsl/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "orbitsl/errors.hpp"

namespace orbitsl::orbit {

namespace {

constexpr double kArccosTolerance = 1e-12;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be finite and strictly positive");
    }
}

}  // namespace

void PhysicalConstants::validate() const {
    require_positive(earth_radius_m, "earth_radius_m");
    require_positive(earth_mass_kg, "earth_mass_kg");
    require_positive(gravitational_constant, "gravitational_constant");
    require_positive(light_speed_m_s, "light_speed_m_s");
}

void OrbitShell::validate() const {
    if (num_satellites < 2) {
        throw DomainError("num_satellites must be >= 2");
    }
    require_positive(altitude_m, "altitude_m");
    if (!(min_elevation_rad > 0.0 && min_elevation_rad < std::numbers::pi / 2)) {
        throw DomainError("min_elevation_rad must lie in (0, pi/2)");
    }
}

double orbital_period(const OrbitShell& shell, const PhysicalConstants& consts) {
    const double radius = consts.earth_radius_m + shell.altitude_m;
    const double mu = consts.gravitational_constant * consts.earth_mass_kg;
    return std::sqrt(4.0 * std::numbers::pi * std::numbers::pi * radius * radius * radius / mu);
}

double slant_range(double elevation_rad, const OrbitShell& shell, const PhysicalConstants& consts) {
    if (!(elevation_rad > 0.0 && elevation_rad <= std::numbers::pi / 2)) {
        throw DomainError("elevation must lie in (0, pi/2]");
    }
    const double re = consts.earth_radius_m;
    const double h = shell.altitude_m;
    const double re_sin = re * std::sin(elevation_rad);
    return std::sqrt(re_sin * re_sin + 2.0 * re * h + h * h) - re_sin;
}

double pass_central_angle(const OrbitShell& shell, const PhysicalConstants& consts) {
    const double re = consts.earth_radius_m;
    const double h = shell.altitude_m;
    const double d = slant_range(shell.min_elevation_rad, shell, consts);
    double arg = ((re + h) * (re + h) + re * re - d * d) / (2.0 * (re * re + re * h));
    if (arg > 1.0 + kArccosTolerance || arg < -1.0 - kArccosTolerance) {
        throw InvalidGeometry("pass central angle: arccos argument " + std::to_string(arg) +
                              " outside [-1, 1]");
    }
    arg = std::clamp(arg, -1.0, 1.0);
    return 2.0 * std::acos(arg);
}

double pass_duration_for_angle(double central_angle_rad, double period_s) {
    return period_s * central_angle_rad / (2.0 * std::numbers::pi);
}

double pass_duration(const OrbitShell& shell, const PhysicalConstants& consts) {
    return pass_duration_for_angle(pass_central_angle(shell, consts), orbital_period(shell, consts));
}

double isl_distance(const OrbitShell& shell, const PhysicalConstants& consts) {
    if (shell.num_satellites < 2) {
        throw DomainError("num_satellites must be >= 2");
    }
    return 2.0 * (consts.earth_radius_m + shell.altitude_m) *
           std::sin(std::numbers::pi / shell.num_satellites);
}

double slant_at_central_angle(double central_angle_rad, const OrbitShell& shell,
                              const PhysicalConstants& consts) {
    const double re = consts.earth_radius_m;
    const double rs = re + shell.altitude_m;
    // 1 - cos(phi) = 2 sin^2(phi/2) keeps the zenith limit exact.
    const double s = std::sin(0.5 * central_angle_rad);
    const double radicand = (rs - re) * (rs - re) + 4.0 * re * rs * s * s;
    return std::sqrt(radicand);
}

double mean_slant_range(const OrbitShell& shell, const PhysicalConstants& consts,
                        std::size_t samples) {
    if (samples < 2) {
        throw DomainError("mean_slant_range needs at least 2 samples");
    }
    const double alpha = pass_central_angle(shell, consts);
    if (alpha == 0.0) {
        return shell.altitude_m;
    }
    const double start = -0.5 * alpha;
    const double step = alpha / static_cast<double>(samples - 1);
    double sum = 0.5 * (slant_at_central_angle(start, shell, consts) +
                        slant_at_central_angle(0.5 * alpha, shell, consts));
    for (std::size_t i = 1; i + 1 < samples; ++i) {
        sum += slant_at_central_angle(start + step * static_cast<double>(i), shell, consts);
    }
    return sum * step / alpha;
}

PassGeometry pass_geometry(const OrbitShell& shell, const PhysicalConstants& consts,
                           std::size_t samples) {
    consts.validate();
    shell.validate();
    PassGeometry g;
    g.period_s = orbital_period(shell, consts);
    g.slant_at_min_elev_m = slant_range(shell.min_elevation_rad, shell, consts);
    g.central_angle_rad = pass_central_angle(shell, consts);
    g.pass_duration_s = pass_duration_for_angle(g.central_angle_rad, g.period_s);
    g.isl_distance_m = isl_distance(shell, consts);
    g.mean_slant_m = mean_slant_range(shell, consts, samples);
    g.prop_delay_s = g.mean_slant_m / consts.light_speed_m_s;
    return g;
}

}  // namespace orbitsl::orbit
