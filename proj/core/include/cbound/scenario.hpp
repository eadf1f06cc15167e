#pragma once

// Run configuration: every knob of a command, with defaults, JSON round trip
// and validation. Unknown keys are rejected.

#include "cbound/chronology.hpp"
#include "cbound/confmap.hpp"
#include "cbound/gridoracle.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cbound {

struct OracleConfig {
    BBox box{-3.0, 3.0, -3.0, -0.05};
    double h = 0.05;
    std::size_t samples = 10000;
};

struct ConfmapConfig {
    BBox cloud_box{-3.0, 3.0, -3.0, -0.05};
    std::size_t cloud_points = 10000;
    std::vector<double> interface_xs{-2.0, -1.0, -0.5, -0.1, -0.01};
    double interface_eps = 1e-9;
    double null_tol = 1e-9;
    std::vector<double> x_curve_seeds{-3.0, -2.0, -1.2, -1.0, -0.75, -0.5, 0.0, 0.5, 1.0};
    std::vector<double> y_curve_seeds{-2.0, -0.75, 0.0, 1.0};
    WedgeAngle angle = WedgeAngle::SeedAffine;
    WedgeRadius radius = WedgeRadius::Blended;
};

struct Scenario {
    std::vector<std::string> metrics{"g_cc", "g", "g_ca"};
    std::string curve_metric = "g";
    std::vector<double> t_seeds;                  ///< X seeds r(-1) = t
    std::vector<double> y_seeds;                  ///< Y seeds r(-1) = t, curves only
    std::vector<std::array<double, 2>> j_seeds;   ///< (t, x) seeds of null-infinity TIPs

    double tol = 1e-10;
    double x_stop = -1e-6;
    double s_min = -10.0;
    double max_relative_spacing = 0.01;
    double margin = kDefaultMargin;
    double boundary_tol = 1e-4;

    std::vector<std::pair<std::string, std::string>> jmap_pairs{{"g_cc", "g"}, {"g", "g_ca"}};
    std::vector<double> T_samples;

    OracleConfig oracle;
    ConfmapConfig confmap;
    std::uint64_t seed = 42;
    std::string out_dir = "out";

    Numerics numerics() const;
    ConfmapOptions confmap_options() const;
    std::vector<Point> j_points() const;
};

/// The shipped defaults: 33 strain seeds -1 + k/64 plus ten seeds off the
/// wedge, three null-infinity seeds and 41 endpoint samples on [-2, 1].
Scenario default_scenario();

/// Overlays the keys present in j on the defaults, then validates.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const Scenario& s);

/// Throws ConfigError naming the first offending field.
void validate(const Scenario& s);

} // namespace cbound
