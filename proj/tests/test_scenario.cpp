#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "orbitsl/errors.hpp"
#include "orbitsl/optimizer.hpp"
#include "orbitsl/scenario.hpp"
#include "test_support.hpp"

using namespace orbitsl;
using namespace orbitsl::scenario;

namespace {

constexpr double kPi = std::numbers::pi;

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST(LoadScenario, EmptyTextGivesDefaults) {
    for (const char* text : {"", "   \n\t", "{}"}) {
        const Scenario s = load_scenario(text);
        EXPECT_EQ(s.shell.num_satellites, 25);
        EXPECT_DOUBLE_EQ(s.shell.altitude_m, 550e3);
        EXPECT_DOUBLE_EQ(s.shell.min_elevation_rad, 30.0 * kPi / 180.0);
        EXPECT_DOUBLE_EQ(s.consts.earth_radius_m, 6.371e6);
        EXPECT_DOUBLE_EQ(s.consts.earth_mass_kg, 5.972e24);
        EXPECT_DOUBLE_EQ(s.consts.gravitational_constant, 6.674e-11);
        EXPECT_DOUBLE_EQ(s.consts.light_speed_m_s, 2.998e8);
        EXPECT_DOUBLE_EQ(s.link_down.max_tx_power_w, 10.0);
        EXPECT_DOUBLE_EQ(s.link_down.bandwidth_hz, 500e6);
        EXPECT_DOUBLE_EQ(s.link_down.carrier_hz, 20e9);
        EXPECT_NEAR(10 * std::log10(s.link_down.noise_power_w), -119.0, 1e-12);
        EXPECT_NEAR(10 * std::log10(s.link_down.antenna_gain_linear), 66.33, 1e-12);
        EXPECT_DOUBLE_EQ(s.isl.tx_power_w, 0.5);
        EXPECT_DOUBLE_EQ(s.isl.data_rate_bps, 5e9);
        EXPECT_DOUBLE_EQ(s.proc_sat.power_at_max_w, 15.0);
        EXPECT_DOUBLE_EQ(s.proc_sat.max_freq_hz, 625e6);
        EXPECT_DOUBLE_EQ(s.proc_sat.num_cores, 1024);
        EXPECT_DOUBLE_EQ(s.proc_sat.flops_per_cycle, 2);
        EXPECT_EQ(s.batch.num_items, 400);
        EXPECT_DOUBLE_EQ(s.batch.bits_per_item, 1.605e6);
        EXPECT_EQ(s.split.split_label, "autoencoder");
        EXPECT_EQ(s.fspl_distance_mode, FsplDistanceMode::mean);
        EXPECT_DOUBLE_EQ(s.pass_scale, 1.0);
    }
}

TEST(LoadScenario, DerivedLinkTermsFollowGeometry) {
    const Scenario s = load_scenario("");
    const auto g = s.geometry();
    EXPECT_DOUBLE_EQ(s.link_down.path_loss_linear, link::fspl(g.mean_slant_m, 20e9, s.consts));
    EXPECT_DOUBLE_EQ(s.isl.distance_m, g.isl_distance_m);
    Scenario w = s;
    w.fspl_distance_mode = FsplDistanceMode::worst_case;
    w.refresh_derived();
    EXPECT_DOUBLE_EQ(w.fspl_distance_m(), g.slant_at_min_elev_m);
    EXPECT_GT(w.link_down.path_loss_linear, s.link_down.path_loss_linear);
}

TEST(LoadScenario, UnitSuffixesNormalize) {
    const Scenario s = load_scenario(R"({
        "constellation": {"altitude": "550 km", "min_elevation": "30 deg"},
        "communication": {"max_tx_power": "40 dBm", "bandwidth": "500 MHz", "carrier": "20 GHz",
                          "noise_power": "-119 dBW", "antenna_gain": "66.33 dBi",
                          "isl_rate": "5 Gbps", "isl_tx_power": "500 mW"},
        "computing": {"max_freq": "625 MHz"},
        "dataset": {"item_size": "1.605 Mbit"},
        "workload": {"flops_sat": "302 GFLOP", "flops_ground": "39 MFLOP",
                     "activation_bits": "4.7 kbit", "model_bits": "168.8 kbit"}
    })");
    const Scenario d = default_scenario();
    EXPECT_TRUE(close_rel(s.shell.altitude_m, 550e3, 1e-12));
    EXPECT_TRUE(close_rel(s.shell.min_elevation_rad, d.shell.min_elevation_rad, 1e-12));
    EXPECT_TRUE(close_rel(s.link_down.max_tx_power_w, 10.0, 1e-12));
    EXPECT_TRUE(close_rel(s.link_down.bandwidth_hz, 500e6, 1e-12));
    EXPECT_TRUE(close_rel(s.link_down.carrier_hz, 20e9, 1e-12));
    EXPECT_TRUE(close_rel(s.link_down.noise_power_w, d.link_down.noise_power_w, 1e-12));
    EXPECT_TRUE(close_rel(s.link_down.antenna_gain_linear, d.link_down.antenna_gain_linear, 1e-12));
    EXPECT_TRUE(close_rel(s.isl.data_rate_bps, 5e9, 1e-12));
    EXPECT_TRUE(close_rel(s.isl.tx_power_w, 0.5, 1e-12));
    EXPECT_TRUE(close_rel(s.proc_sat.max_freq_hz, 625e6, 1e-12));
    EXPECT_TRUE(close_rel(s.batch.bits_per_item, 1.605e6, 1e-12));
    EXPECT_TRUE(close_rel(s.split.flops_sat_per_item, 302e9, 1e-12));
    EXPECT_TRUE(close_rel(s.split.flops_ground_per_item, 39e6, 1e-12));
    EXPECT_TRUE(close_rel(s.split.activation_bits_per_item, 4.7e3, 1e-12));
    EXPECT_TRUE(close_rel(s.split.gradient_bits_per_item, 4.7e3, 1e-12));
    EXPECT_TRUE(close_rel(s.split.model_bits, 168.8e3, 1e-12));
}

TEST(ParseQuantity, EquivalentSpellings) {
    EXPECT_TRUE(close_rel(parse_quantity("550 km", "length"), parse_quantity("550000 m", "length"), 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("0.5 W", "power"), parse_quantity("500 mW", "power"), 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("10 W", "power"), parse_quantity("10 dBW", "power"), 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("10 dBW", "power"), parse_quantity("40 dBm", "power"), 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("1 kW", "power"), 1000.0, 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("20 GHz", "frequency"), 20e9, 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("3 kHz", "frequency"), 3e3, 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("90 deg", "angle"), kPi / 2, 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("3 dB", "gain"), std::pow(10.0, 0.3), 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("2 min", "time"), 120.0, 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("250 ms", "time"), 0.25, 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("1 TFLOP", "flops"), 1e12, 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("3 km/s", "speed"), 3e3, 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("2 Gbit", "bits"), 2e9, 1e-12));
    EXPECT_TRUE(close_rel(parse_quantity("12 kbps", "rate"), 12e3, 1e-12));
}

TEST(ParseQuantity, RejectsWrongDimensionAndGarbage) {
    EXPECT_THROW(parse_quantity("550 Hz", "length"), ConfigError);
    EXPECT_THROW(parse_quantity("fast", "length"), ConfigError);
    EXPECT_THROW(parse_quantity("10 parsecs", "length"), ConfigError);
    EXPECT_THROW(parse_quantity("", "power"), ConfigError);
}

TEST(LoadScenario, ParseErrorCarriesLineAndColumn) {
    const std::string text = "{\n  \"constellation\": {\n    \"altitude\": 550e3,,\n  }\n}\n";
    try {
        load_scenario(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_GE(e.column(), 20u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(LoadScenario, UnknownKeysStrictVsLenient) {
    const char* text = R"({"constellation": {"altitude": 600e3, "colour": "blue"}, "extras": 1})";
    EXPECT_THROW(load_scenario(text), UnknownKeyError);
    LoadOptions lenient;
    lenient.strict = false;
    const Scenario s = load_scenario(text, lenient);
    EXPECT_DOUBLE_EQ(s.shell.altitude_m, 600e3);
}

TEST(LoadScenario, ZeroMinimumElevationIsRejected) {
    EXPECT_THROW(load_scenario(R"({"constellation": {"min_elevation": 0}})"), ValidationError);
    EXPECT_THROW(load_scenario(R"({"constellation": {"min_elevation": "0 deg"}})"), ValidationError);
}

TEST(LoadScenario, InvalidValuesAreValidationErrors) {
    for (const char* text : {
             R"({"constellation": {"num_satellites": 1}})",
             R"({"constellation": {"num_satellites": 2.5}})",
             R"({"constellation": {"altitude": -5}})",
             R"({"communication": {"bandwidth": 0}})",
             R"({"communication": {"fspl_distance": "median"}})",
             R"({"computing": {"max_freq": "-1 GHz"}})",
             R"({"dataset": {"num_items": -3}})",
             R"({"workload": {"preset": "vgg16"}})",
             R"({"workload": {"flops_sat": -1}})",
             R"({"simulation": {"pass_scale": 0}})",
             R"({"simulation": {"mean_slant_samples": 1}})",
             R"({"constellation": []})",
             R"({"communication": {"max_tx_power": true}})",
         }) {
        EXPECT_THROW(load_scenario(text), ValidationError) << text;
    }
}

TEST(LoadScenario, UplinkDefaultsToDownlinkAndCanDiverge) {
    const Scenario a = load_scenario(R"({"communication": {"bandwidth": "100 MHz"}})");
    EXPECT_DOUBLE_EQ(a.link_up.bandwidth_hz, 100e6);
    const Scenario b = load_scenario(
        R"({"communication": {"bandwidth": "100 MHz", "uplink": {"bandwidth": "50 MHz"}}})");
    EXPECT_DOUBLE_EQ(b.link_down.bandwidth_hz, 100e6);
    EXPECT_DOUBLE_EQ(b.link_up.bandwidth_hz, 50e6);
}

TEST(LoadScenario, GroundProcessorDefaultsToSatelliteSpec) {
    const Scenario a = load_scenario(R"({"computing": {"power": "20 W"}})");
    EXPECT_DOUBLE_EQ(a.proc_ground.power_at_max_w, 20.0);
    const Scenario b = load_scenario(R"({"computing": {"power": "20 W", "ground": {"power": "60 W"}}})");
    EXPECT_DOUBLE_EQ(b.proc_sat.power_at_max_w, 20.0);
    EXPECT_DOUBLE_EQ(b.proc_ground.power_at_max_w, 60.0);
}

TEST(LoadScenario, PresetThenOverride) {
    const Scenario s = load_scenario(R"({"workload": {"preset": "resnet18_l2", "model_bits": 1e6}})");
    EXPECT_EQ(s.split.split_label, "resnet18_l2");
    EXPECT_DOUBLE_EQ(s.split.flops_sat_per_item, 3.006e9);
    EXPECT_DOUBLE_EQ(s.split.model_bits, 1e6);
}

TEST(LoadScenarioFile, MissingFileIsConfigError) {
    EXPECT_THROW(load_scenario_file("/nonexistent/orbitsl/config.json"), ConfigError);
}

TEST(SerializeScenario, RoundTripsRandomScenarios) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        Scenario s = orbitsl::testing::random_scenario(rng);
        s.shell.num_satellites = 2 + static_cast<int>(rng() % 200);
        s.shell.altitude_m = orbitsl::testing::uniform(rng, 300e3, 1500e3);
        s.shell.min_elevation_rad = orbitsl::testing::uniform(rng, 0.1, 1.4);
        s.fspl_distance_mode = (rng() & 1) ? FsplDistanceMode::mean : FsplDistanceMode::worst_case;
        s.refresh_derived();
        const std::string text = serialize_scenario(s);
        const Scenario back = load_scenario(text);
        EXPECT_EQ(serialize_scenario(back), text);
        EXPECT_EQ(fingerprint(back), fingerprint(s));
        EXPECT_DOUBLE_EQ(back.link_down.path_loss_linear, s.link_down.path_loss_linear);
        EXPECT_DOUBLE_EQ(back.pass_budget_s(), s.pass_budget_s());
    }
}

TEST(Fingerprint, SensitiveToEveryEdit) {
    const Scenario base = default_scenario();
    Scenario a = base;
    a.shell.altitude_m += 1.0;
    Scenario b = base;
    b.split.model_bits *= 2;
    Scenario c = base;
    c.fspl_distance_mode = FsplDistanceMode::worst_case;
    EXPECT_EQ(fingerprint(base), fingerprint(default_scenario()));
    EXPECT_EQ(fingerprint(base).size(), 16u);
    EXPECT_NE(fingerprint(a), fingerprint(base));
    EXPECT_NE(fingerprint(b), fingerprint(base));
    EXPECT_NE(fingerprint(c), fingerprint(base));
}

TEST(Presets, CellsExact) {
    struct Row {
        const char* name;
        double w1, w2, act, model;
    };
    const Row rows[] = {
        {"autoencoder", 302e9, 39e6, 4.7e3, 168.8e3},
        {"resnet18_l1", 1.765e9, 3.714e9, 6.423e6, 369.056e6},
        {"resnet18_l2", 3.006e9, 2.474e9, 3.211e6, 352.224e6},
        {"resnet18_l3", 4.243e9, 1.237e9, 1.605e6, 285.024e6},
    };
    ASSERT_EQ(preset_names().size(), 4u);
    for (const auto& r : rows) {
        const auto w = preset_workload(r.name);
        EXPECT_EQ(w.flops_sat_per_item, r.w1) << r.name;
        EXPECT_EQ(w.flops_ground_per_item, r.w2) << r.name;
        EXPECT_EQ(w.activation_bits_per_item, r.act) << r.name;
        EXPECT_EQ(w.gradient_bits_per_item, r.act) << r.name;
        EXPECT_EQ(w.model_bits, r.model) << r.name;
    }
    EXPECT_THROW(preset_workload("resnet18_l4"), ConfigError);
}

TEST(Presets, ResnetTotalsNearFiveAndAHalfGflop) {
    for (const char* name : {"resnet18_l1", "resnet18_l2", "resnet18_l3"}) {
        const double total = preset_workload(name).total_flops_per_item();
        EXPECT_LE(std::abs(total - 5.48e9) / 5.48e9, 0.01) << name;
    }
}

TEST(Presets, AnchorsHold) {
    for (const auto& p : builtin_presets()) {
        ASSERT_FALSE(p.expected_anchors.empty());
        for (const auto& a : p.expected_anchors) {
            const double v = anchor_value(a.quantity, p.scenario);
            EXPECT_LE(std::abs(v - a.expected), a.rel_tol * std::abs(a.expected))
                << p.name << " " << a.quantity;
        }
    }
    EXPECT_THROW(anchor_value("nonsense", default_scenario()), ConfigError);
}

TEST(Presets, AllFeasibleUnderDefaults) {
    for (const auto& p : builtin_presets()) {
        EXPECT_NO_THROW(optimizer::minimize_energy(p.scenario)) << p.name;
        EXPECT_NO_THROW(optimizer::minimize_energy_direct_download(p.scenario)) << p.name;
    }
}

TEST(FsplMode, ParsesBothSpellings) {
    EXPECT_EQ(parse_fspl_mode("mean"), FsplDistanceMode::mean);
    EXPECT_EQ(parse_fspl_mode("worst_case"), FsplDistanceMode::worst_case);
    EXPECT_EQ(to_string(FsplDistanceMode::worst_case), "worst_case");
    EXPECT_THROW(parse_fspl_mode("best_case"), ConfigError);
}

TEST(Scenario, PassBudgetScales) {
    Scenario s = default_scenario();
    const double base = s.pass_budget_s();
    EXPECT_NEAR(base, 227.17877813873787, 1e-6);
    s.pass_scale = 2.5;
    EXPECT_DOUBLE_EQ(s.pass_budget_s(), 2.5 * base);
}
