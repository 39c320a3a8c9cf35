#include "orbitsl/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "orbitsl/errors.hpp"

namespace orbitsl::scenario {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Units

enum class Conversion { scale, db, dbm };

struct UnitDef {
    std::string_view dimension;
    std::string_view suffix;
    Conversion conversion;
    int exponent;  // power of ten for Conversion::scale
};

constexpr std::array kUnits = {
    UnitDef{"length", "m", Conversion::scale, 0},
    UnitDef{"length", "km", Conversion::scale, 3},
    UnitDef{"angle", "rad", Conversion::scale, 0},
    UnitDef{"angle", "deg", Conversion::scale, 0},  // handled specially
    UnitDef{"power", "W", Conversion::scale, 0},
    UnitDef{"power", "mW", Conversion::scale, -3},
    UnitDef{"power", "kW", Conversion::scale, 3},
    UnitDef{"power", "dBW", Conversion::db, 0},
    UnitDef{"power", "dBm", Conversion::dbm, 0},
    UnitDef{"frequency", "Hz", Conversion::scale, 0},
    UnitDef{"frequency", "kHz", Conversion::scale, 3},
    UnitDef{"frequency", "MHz", Conversion::scale, 6},
    UnitDef{"frequency", "GHz", Conversion::scale, 9},
    UnitDef{"gain", "dB", Conversion::db, 0},
    UnitDef{"gain", "dBi", Conversion::db, 0},
    UnitDef{"bits", "bit", Conversion::scale, 0},
    UnitDef{"bits", "kbit", Conversion::scale, 3},
    UnitDef{"bits", "Mbit", Conversion::scale, 6},
    UnitDef{"bits", "Gbit", Conversion::scale, 9},
    UnitDef{"rate", "bps", Conversion::scale, 0},
    UnitDef{"rate", "kbps", Conversion::scale, 3},
    UnitDef{"rate", "Mbps", Conversion::scale, 6},
    UnitDef{"rate", "Gbps", Conversion::scale, 9},
    UnitDef{"flops", "FLOP", Conversion::scale, 0},
    UnitDef{"flops", "kFLOP", Conversion::scale, 3},
    UnitDef{"flops", "MFLOP", Conversion::scale, 6},
    UnitDef{"flops", "GFLOP", Conversion::scale, 9},
    UnitDef{"flops", "TFLOP", Conversion::scale, 12},
    UnitDef{"speed", "m/s", Conversion::scale, 0},
    UnitDef{"speed", "km/s", Conversion::scale, 3},
    UnitDef{"time", "s", Conversion::scale, 0},
    UnitDef{"time", "ms", Conversion::scale, -3},
    UnitDef{"time", "min", Conversion::scale, 0},  // handled specially
    UnitDef{"mass", "kg", Conversion::scale, 0},
};

double pow10_exact(int exponent) {
    double p = 1.0;
    for (int i = 0; i < exponent; ++i) {
        p *= 10.0;
    }
    return p;
}

double apply_unit(double value, const UnitDef& unit) {
    switch (unit.conversion) {
        case Conversion::db:
            return link::from_db(value);
        case Conversion::dbm:
            return link::from_db(value - 30.0);
        case Conversion::scale:
            break;
    }
    if (unit.suffix == "deg") {
        return value * std::numbers::pi / 180.0;
    }
    if (unit.suffix == "min") {
        return value * 60.0;
    }
    // One multiplication or division by an exact power of ten: correctly rounded.
    return unit.exponent >= 0 ? value * pow10_exact(unit.exponent)
                              : value / pow10_exact(-unit.exponent);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// ---------------------------------------------------------------------------
// Sections

std::string join_path(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

class SectionReader {
public:
    SectionReader(const json& object, std::string path, bool strict)
        : object_(object), path_(std::move(path)), strict_(strict) {
        if (!object_.is_object()) {
            throw ValidationError(where() + " must be an object");
        }
    }

    std::optional<double> quantity(std::string_view key, std::string_view dimension) {
        const json* v = find(key);
        if (v == nullptr) return std::nullopt;
        const std::string name = join_path(path_, key);
        if (v->is_number()) {
            return v->get<double>();
        }
        if (!v->is_string()) {
            throw ValidationError(name + " must be a number or a \"<value> <unit>\" string");
        }
        try {
            return parse_quantity(v->get<std::string>(), dimension);
        } catch (const ConfigError& e) {
            throw ValidationError(name + ": " + e.what());
        }
    }

    std::optional<long long> integer(std::string_view key) {
        const json* v = find(key);
        if (v == nullptr) return std::nullopt;
        const std::string name = join_path(path_, key);
        if (v->is_number_integer()) {
            return v->get<long long>();
        }
        if (v->is_number_float()) {
            const double d = v->get<double>();
            if (std::floor(d) == d && std::abs(d) < 9e15) {
                return static_cast<long long>(d);
            }
        }
        throw ValidationError(name + " must be an integer");
    }

    std::optional<std::string> text(std::string_view key) {
        const json* v = find(key);
        if (v == nullptr) return std::nullopt;
        if (!v->is_string()) {
            throw ValidationError(join_path(path_, key) + " must be a string");
        }
        return v->get<std::string>();
    }

    std::optional<SectionReader> section(std::string_view key) {
        const json* v = find(key);
        if (v == nullptr) return std::nullopt;
        return SectionReader(*v, join_path(path_, key), strict_);
    }

    void finish() const {
        if (!strict_) return;
        for (const auto& item : object_.items()) {
            if (!seen_.contains(item.key())) {
                throw UnknownKeyError("unknown key '" + join_path(path_, item.key()) + "'");
            }
        }
    }

private:
    std::string where() const { return path_.empty() ? "config root" : path_; }

    const json* find(std::string_view key) {
        seen_.insert(std::string(key));
        auto it = object_.find(key);
        return it == object_.end() ? nullptr : &*it;
    }

    const json& object_;
    std::string path_;
    bool strict_;
    std::set<std::string> seen_;
};

template <typename T>
void assign(T& target, const std::optional<T>& value) {
    if (value) target = *value;
}

void read_radio(SectionReader& r, link::RadioLink& radio) {
    assign(radio.max_tx_power_w, r.quantity("max_tx_power", "power"));
    assign(radio.bandwidth_hz, r.quantity("bandwidth", "frequency"));
    assign(radio.carrier_hz, r.quantity("carrier", "frequency"));
    assign(radio.noise_power_w, r.quantity("noise_power", "power"));
    assign(radio.antenna_gain_linear, r.quantity("antenna_gain", "gain"));
}

void read_processor(SectionReader& r, compute::ProcessorSpec& proc) {
    assign(proc.power_at_max_w, r.quantity("power", "power"));
    assign(proc.max_freq_hz, r.quantity("max_freq", "frequency"));
    assign(proc.num_cores, r.quantity("cores", "dimensionless"));
    assign(proc.flops_per_cycle, r.quantity("flops_per_cycle", "dimensionless"));
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(byte, text.size());
    for (std::size_t i = 0; i + 1 < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

template <typename Fn>
void wrap_validation(const char* what, Fn&& fn) {
    try {
        fn();
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

compute::WorkloadSplit make_split(std::string label, double w1, double w2, double tx_bits,
                                  double isl_bits) {
    compute::WorkloadSplit s;
    s.split_label = std::move(label);
    s.flops_sat_per_item = w1;
    s.flops_ground_per_item = w2;
    s.activation_bits_per_item = tx_bits;
    s.gradient_bits_per_item = tx_bits;
    s.model_bits = isl_bits;
    return s;
}

const std::vector<compute::WorkloadSplit>& preset_table() {
    static const std::vector<compute::WorkloadSplit> table = {
        make_split("autoencoder", 302e9, 39e6, 4.7e3, 168.8e3),
        make_split("resnet18_l1", 1.765e9, 3.714e9, 6.423e6, 369.056e6),
        make_split("resnet18_l2", 3.006e9, 2.474e9, 3.211e6, 352.224e6),
        make_split("resnet18_l3", 4.243e9, 1.237e9, 1.605e6, 285.024e6),
    };
    return table;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(FsplDistanceMode mode) {
    return mode == FsplDistanceMode::mean ? "mean" : "worst_case";
}

FsplDistanceMode parse_fspl_mode(std::string_view text) {
    if (text == "mean") return FsplDistanceMode::mean;
    if (text == "worst_case") return FsplDistanceMode::worst_case;
    throw ValidationError("fspl distance mode must be 'mean' or 'worst_case', got '" +
                          std::string(text) + "'");
}

double parse_quantity(std::string_view text, std::string_view dimension) {
    const std::string_view s = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || !std::isfinite(value)) {
        throw ValidationError("cannot parse a number from '" + std::string(text) + "'");
    }
    const std::string_view suffix = trim(std::string_view(ptr, s.data() + s.size() - ptr));
    if (suffix.empty()) {
        return value;
    }
    for (const auto& unit : kUnits) {
        if (unit.dimension == dimension && unit.suffix == suffix) {
            return apply_unit(value, unit);
        }
    }
    throw ValidationError("unit '" + std::string(suffix) + "' is not valid for a " +
                          std::string(dimension) + " quantity");
}

orbit::PassGeometry Scenario::geometry() const {
    return orbit::pass_geometry(shell, consts, mean_slant_samples);
}

double Scenario::pass_budget_s() const { return orbit::pass_duration(shell, consts) * pass_scale; }

double Scenario::fspl_distance_m() const {
    if (fspl_distance_mode == FsplDistanceMode::worst_case) {
        return orbit::slant_range(shell.min_elevation_rad, shell, consts);
    }
    return orbit::mean_slant_range(shell, consts, mean_slant_samples);
}

void Scenario::refresh_derived() {
    const double distance = fspl_distance_m();
    link_down.path_loss_linear = link::fspl(distance, link_down.carrier_hz, consts);
    link_up.path_loss_linear = link::fspl(distance, link_up.carrier_hz, consts);
    isl.distance_m = orbit::isl_distance(shell, consts);
}

void Scenario::validate() const {
    wrap_validation("constants", [&] { consts.validate(); });
    wrap_validation("constellation", [&] { shell.validate(); });
    wrap_validation("communication.downlink", [&] { link_down.validate(); });
    wrap_validation("communication.uplink", [&] { link_up.validate(); });
    wrap_validation("communication.isl", [&] { isl.validate(); });
    wrap_validation("computing.satellite", [&] { proc_sat.validate(); });
    wrap_validation("computing.ground", [&] { proc_ground.validate(); });
    wrap_validation("workload", [&] { split.validate(); });
    wrap_validation("dataset", [&] { batch.validate(); });
    if (!(pass_scale > 0.0) || !std::isfinite(pass_scale)) {
        throw ValidationError("simulation.pass_scale must be finite and strictly positive");
    }
    if (mean_slant_samples < 2) {
        throw ValidationError("simulation.mean_slant_samples must be >= 2");
    }
    wrap_validation("geometry", [&] { (void)geometry(); });
}

Scenario default_scenario() {
    Scenario s;
    s.link_down.antenna_gain_linear = link::from_db(66.33);
    s.link_down.noise_power_w = link::from_db(-119.0);
    s.link_up = s.link_down;
    s.split = preset_table().front();
    s.refresh_derived();
    return s;
}

Scenario load_scenario(std::string_view source, const LoadOptions& options) {
    Scenario s = default_scenario();
    if (trim(source).empty()) {
        return s;
    }

    json root;
    try {
        root = json::parse(source.begin(), source.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_and_column(source, e.byte);
        throw ParseError("config parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + e.what(),
                         line, column);
    }

    SectionReader top(root, "", options.strict);

    if (auto r = top.section("constants")) {
        assign(s.consts.earth_radius_m, r->quantity("earth_radius", "length"));
        assign(s.consts.earth_mass_kg, r->quantity("earth_mass", "mass"));
        assign(s.consts.gravitational_constant, r->quantity("gravitational_constant", "dimensionless"));
        assign(s.consts.light_speed_m_s, r->quantity("light_speed", "speed"));
        r->finish();
    }

    if (auto r = top.section("constellation")) {
        if (auto n = r->integer("num_satellites")) {
            if (*n < 2 || *n > 1'000'000) {
                throw ValidationError("constellation.num_satellites must be in [2, 1000000]");
            }
            s.shell.num_satellites = static_cast<int>(*n);
        }
        assign(s.shell.altitude_m, r->quantity("altitude", "length"));
        assign(s.shell.min_elevation_rad, r->quantity("min_elevation", "angle"));
        r->finish();
    }

    if (auto r = top.section("communication")) {
        read_radio(*r, s.link_down);
        s.link_up = s.link_down;
        assign(s.isl.tx_power_w, r->quantity("isl_tx_power", "power"));
        assign(s.isl.data_rate_bps, r->quantity("isl_rate", "rate"));
        if (auto mode = r->text("fspl_distance")) {
            s.fspl_distance_mode = parse_fspl_mode(*mode);
        }
        if (auto up = r->section("uplink")) {
            read_radio(*up, s.link_up);
            up->finish();
        }
        r->finish();
    }

    if (auto r = top.section("computing")) {
        read_processor(*r, s.proc_sat);
        s.proc_ground = s.proc_sat;
        if (auto g = r->section("ground")) {
            read_processor(*g, s.proc_ground);
            g->finish();
        }
        r->finish();
    }

    if (auto r = top.section("dataset")) {
        assign(s.batch.num_items, r->integer("num_items"));
        assign(s.batch.bits_per_item, r->quantity("item_size", "bits"));
        r->finish();
    }

    if (auto r = top.section("workload")) {
        if (auto name = r->text("preset")) {
            try {
                s.split = preset_workload(*name);
            } catch (const ConfigError& e) {
                throw ValidationError(std::string("workload.preset: ") + e.what());
            }
        }
        assign(s.split.split_label, r->text("label"));
        assign(s.split.flops_sat_per_item, r->quantity("flops_sat", "flops"));
        assign(s.split.flops_ground_per_item, r->quantity("flops_ground", "flops"));
        if (auto act = r->quantity("activation_bits", "bits")) {
            s.split.activation_bits_per_item = *act;
            s.split.gradient_bits_per_item = *act;
        }
        assign(s.split.gradient_bits_per_item, r->quantity("gradient_bits", "bits"));
        assign(s.split.model_bits, r->quantity("model_bits", "bits"));
        r->finish();
    }

    if (auto r = top.section("simulation")) {
        assign(s.pass_scale, r->quantity("pass_scale", "dimensionless"));
        if (auto n = r->integer("mean_slant_samples")) {
            if (*n < 2) {
                throw ValidationError("simulation.mean_slant_samples must be >= 2");
            }
            s.mean_slant_samples = static_cast<std::size_t>(*n);
        }
        r->finish();
    }

    top.finish();

    s.validate();
    s.refresh_derived();
    return s;
}

Scenario load_scenario_file(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario(buffer.str(), options);
}

std::string serialize_scenario(const Scenario& s) {
    auto radio = [](const link::RadioLink& r) {
        ordered_json j;
        j["max_tx_power"] = r.max_tx_power_w;
        j["bandwidth"] = r.bandwidth_hz;
        j["carrier"] = r.carrier_hz;
        j["noise_power"] = r.noise_power_w;
        j["antenna_gain"] = r.antenna_gain_linear;
        return j;
    };
    auto processor = [](const compute::ProcessorSpec& p) {
        ordered_json j;
        j["power"] = p.power_at_max_w;
        j["max_freq"] = p.max_freq_hz;
        j["cores"] = p.num_cores;
        j["flops_per_cycle"] = p.flops_per_cycle;
        return j;
    };

    ordered_json root;
    root["constants"]["earth_radius"] = s.consts.earth_radius_m;
    root["constants"]["earth_mass"] = s.consts.earth_mass_kg;
    root["constants"]["gravitational_constant"] = s.consts.gravitational_constant;
    root["constants"]["light_speed"] = s.consts.light_speed_m_s;

    root["constellation"]["num_satellites"] = s.shell.num_satellites;
    root["constellation"]["altitude"] = s.shell.altitude_m;
    root["constellation"]["min_elevation"] = s.shell.min_elevation_rad;

    ordered_json comm = radio(s.link_down);
    comm["isl_tx_power"] = s.isl.tx_power_w;
    comm["isl_rate"] = s.isl.data_rate_bps;
    comm["fspl_distance"] = std::string(to_string(s.fspl_distance_mode));
    comm["uplink"] = radio(s.link_up);
    root["communication"] = comm;

    ordered_json comp = processor(s.proc_sat);
    comp["ground"] = processor(s.proc_ground);
    root["computing"] = comp;

    root["dataset"]["num_items"] = s.batch.num_items;
    root["dataset"]["item_size"] = s.batch.bits_per_item;

    root["workload"]["label"] = s.split.split_label;
    root["workload"]["flops_sat"] = s.split.flops_sat_per_item;
    root["workload"]["flops_ground"] = s.split.flops_ground_per_item;
    root["workload"]["activation_bits"] = s.split.activation_bits_per_item;
    root["workload"]["gradient_bits"] = s.split.gradient_bits_per_item;
    root["workload"]["model_bits"] = s.split.model_bits;

    root["simulation"]["pass_scale"] = s.pass_scale;
    root["simulation"]["mean_slant_samples"] = s.mean_slant_samples;

    return root.dump(2) + "\n";
}

std::string fingerprint(const Scenario& scenario) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const unsigned char c : serialize_scenario(scenario)) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

compute::WorkloadSplit preset_workload(std::string_view name) {
    for (const auto& split : preset_table()) {
        if (split.split_label == name) {
            return split;
        }
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& split : preset_table()) {
        names.push_back(split.split_label);
    }
    return names;
}

std::vector<Preset> builtin_presets() {
    std::vector<Preset> presets;
    const Scenario base = default_scenario();
    for (const auto& split : preset_table()) {
        Preset p;
        p.name = split.split_label;
        p.scenario = base;
        p.scenario.split = split;
        // 3.8 min visibility window, read to one decimal of a minute.
        p.expected_anchors.push_back({"pass_duration_min", 3.8, 0.05 / 3.8});
        p.expected_anchors.push_back({"flops_sat_per_item", split.flops_sat_per_item, 0.0});
        p.expected_anchors.push_back({"flops_ground_per_item", split.flops_ground_per_item, 0.0});
        p.expected_anchors.push_back({"activation_bits_per_item", split.activation_bits_per_item, 0.0});
        p.expected_anchors.push_back({"model_bits", split.model_bits, 0.0});
        if (split.split_label != "autoencoder") {
            p.expected_anchors.push_back({"total_flops_per_item", 5.48e9, 0.01});
        }
        presets.push_back(std::move(p));
    }
    return presets;
}

double anchor_value(std::string_view quantity, const Scenario& s) {
    if (quantity == "pass_duration_s") return orbit::pass_duration(s.shell, s.consts);
    if (quantity == "pass_duration_min") return orbit::pass_duration(s.shell, s.consts) / 60.0;
    if (quantity == "period_s") return orbit::orbital_period(s.shell, s.consts);
    if (quantity == "flops_sat_per_item") return s.split.flops_sat_per_item;
    if (quantity == "flops_ground_per_item") return s.split.flops_ground_per_item;
    if (quantity == "total_flops_per_item") return s.split.total_flops_per_item();
    if (quantity == "activation_bits_per_item") return s.split.activation_bits_per_item;
    if (quantity == "gradient_bits_per_item") return s.split.gradient_bits_per_item;
    if (quantity == "model_bits") return s.split.model_bits;
    if (quantity == "num_items") return static_cast<double>(s.batch.num_items);
    if (quantity == "bits_per_item") return s.batch.bits_per_item;
    throw ConfigError("unknown anchor quantity '" + std::string(quantity) + "'");
}

}  // namespace orbitsl::scenario
