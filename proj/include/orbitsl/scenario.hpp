// Scenario assembly: constellation, links, processors, workload and batch,
// loaded from a JSON configuration with unit-suffixed values.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbitsl/compute.hpp"
#include "orbitsl/link.hpp"
#include "orbitsl/orbit.hpp"

namespace orbitsl::scenario {

/// Distance at which the ground/satellite path loss is evaluated.
enum class FsplDistanceMode {
    mean,        // pass-averaged slant range
    worst_case,  // slant range at minimum elevation
};

std::string_view to_string(FsplDistanceMode mode);
FsplDistanceMode parse_fspl_mode(std::string_view text);

struct Scenario {
    orbit::OrbitShell shell;
    orbit::PhysicalConstants consts;
    link::RadioLink link_down;
    link::RadioLink link_up;
    link::IslLink isl;
    compute::ProcessorSpec proc_sat;
    compute::ProcessorSpec proc_ground;
    compute::WorkloadSplit split;
    compute::Batch batch;
    FsplDistanceMode fspl_distance_mode = FsplDistanceMode::mean;
    double pass_scale = 1.0;  // multiplies the visibility window used as latency budget
    std::size_t mean_slant_samples = orbit::kDefaultMeanSlantSamples;

    orbit::PassGeometry geometry() const;

    /// Latency budget of one pass, T_pass * pass_scale.
    double pass_budget_s() const;

    /// Distance used for FSPL under the current mode.
    double fspl_distance_m() const;

    /// Recomputes path loss on both radio links and the ISL distance from the geometry.
    void refresh_derived();

    /// Throws ValidationError naming the violated invariant.
    void validate() const;
};

struct Anchor {
    std::string quantity;
    double expected;
    double rel_tol;
};

struct Preset {
    std::string name;
    Scenario scenario;
    std::vector<Anchor> expected_anchors;
};

struct LoadOptions {
    bool strict = true;  // reject unknown keys
};

/// Default constellation, links and processors with the autoencoder workload.
Scenario default_scenario();

/// Parses and validates a scenario. Empty or whitespace-only text gives the defaults.
Scenario load_scenario(std::string_view source, const LoadOptions& options = {});

Scenario load_scenario_file(const std::string& path, const LoadOptions& options = {});

/// Normalized config text: every key present, plain SI/linear numbers.
std::string serialize_scenario(const Scenario& scenario);

/// FNV-1a 64-bit hash of the normalized config, as 16 hex digits.
std::string fingerprint(const Scenario& scenario);

std::vector<Preset> builtin_presets();

/// Workload of a named preset; throws ConfigError for unknown names.
compute::WorkloadSplit preset_workload(std::string_view name);

std::vector<std::string> preset_names();

/// Value of an anchor quantity for `scenario` (see Anchor::quantity names).
double anchor_value(std::string_view quantity, const Scenario& scenario);

/// Parses "550 km", "-119 dBW", "66.33 dBi", ... into SI / linear units.
/// `dimension` is one of: length, angle, power, frequency, gain, bits, rate,
/// flops, speed, time, mass, dimensionless.
double parse_quantity(std::string_view text, std::string_view dimension);

}  // namespace orbitsl::scenario
