#pragma once
// qgslink/config.hpp - site configuration file loading. Flat sectioned
// key/value text ('#' comments), one [scenario.*] section per link scenario,
// with referenced loss tables and spectral factors resolved at load time
// relative to the config file's directory.

#include "qgslink/linkgeom.hpp"
#include "qgslink/qber.hpp"
#include "qgslink/skysurvey.hpp"
#include "qgslink/viirs.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qgslink {

/// Configuration / usage failure (CLI exit status 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class LinkDirection { kUplink, kDownlink };

std::string to_string(LinkDirection direction);

struct ScenarioConfig {
    std::string name;
    LinkDirection direction;
    SourceSpec source;
    double coincidence_window_s;
    Thresholds thresholds;
    std::string loss_table_path;
    LossModel loss;

    ScenarioConfig(std::string scenario_name, LinkDirection dir, SourceSpec src,
                   double window_s, Thresholds thr, std::string table_path, LossModel model)
        : name(std::move(scenario_name)), direction(dir), source(src),
          coincidence_window_s(window_s), thresholds(thr),
          loss_table_path(std::move(table_path)), loss(std::move(model)) {}
};

/// Exclusion cone, optionally restricted to one moon label.
struct ExclusionConfig {
    std::optional<MoonLabel> moon_label;   // empty = applies always
    ExclusionZone zone;
};

struct SiteConfig {
    std::string site_id;
    std::string latitude;    // metadata, echoed into reports
    std::string longitude;
    double orbit_altitude_m = 550e3;
    double r_receiver_m = 0.125;
    double fov_half_angle_rad = 0.0;   // required, no default
    double extinction_coeff = kDefaultExtinctionCoeff;
    std::optional<FiberProbe> fiber_probe;
    std::optional<AreaFractions> area_fractions;
    std::vector<SpectralScaleFactor> spectral_factors;
    std::vector<ExclusionConfig> exclusions;
    std::vector<ScenarioConfig> scenarios;
    std::string config_path;

    const SpectralScaleFactor& factor_for_band(const SpectralBand& band) const;
    std::vector<ExclusionZone> exclusion_zones_for(MoonLabel label) const;
};

SiteConfig load_site_config(const std::string& path);

} // namespace qgslink
