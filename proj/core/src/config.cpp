#include "qgslink/config.hpp"

#include "qgslink/csv.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qgslink {

std::string to_string(LinkDirection direction) {
    return direction == LinkDirection::kUplink ? "uplink" : "downlink";
}

const SpectralScaleFactor& SiteConfig::factor_for_band(const SpectralBand& band) const {
    for (const auto& factor : spectral_factors) {
        if (factor.band == band) return factor;
    }
    std::ostringstream msg;
    msg << config_path << ": no spectral scale factor configured for band "
        << format_double(band.center_nm) << ":" << format_double(band.fwhm_nm) << " nm";
    throw ConfigError(msg.str());
}

std::vector<ExclusionZone> SiteConfig::exclusion_zones_for(MoonLabel label) const {
    std::vector<ExclusionZone> zones;
    for (const auto& e : exclusions) {
        if (!e.moon_label || *e.moon_label == label) zones.push_back(e.zone);
    }
    return zones;
}

namespace {

struct IniEntry {
    std::string section;
    std::string key;
    std::string value;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<IniEntry> parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");

    std::vector<IniEntry> entries;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        entries.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return entries;
}

class IniView {
public:
    IniView(const std::vector<IniEntry>& entries, std::string path)
        : entries_(entries), path_(std::move(path)) {}

    std::optional<std::string> get(const std::string& section, const std::string& key) const {
        for (const auto& e : entries_) {
            if (e.section == section && e.key == key) return e.value;
        }
        return std::nullopt;
    }

    std::vector<std::string> get_all(const std::string& section, const std::string& key) const {
        std::vector<std::string> values;
        for (const auto& e : entries_) {
            if (e.section == section && e.key == key) values.push_back(e.value);
        }
        return values;
    }

    std::string require(const std::string& section, const std::string& key) const {
        if (auto v = get(section, key)) return *v;
        throw ConfigError(path_ + ": missing required key [" + section + "] " + key);
    }

    double require_double(const std::string& section, const std::string& key) const {
        return to_double(require(section, key), section, key);
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        if (auto v = get(section, key)) return to_double(*v, section, key);
        return fallback;
    }

    std::vector<std::string> sections_with_prefix(const std::string& prefix) const {
        std::vector<std::string> names;
        for (const auto& e : entries_) {
            if (e.section.rfind(prefix, 0) == 0 &&
                std::find(names.begin(), names.end(), e.section) == names.end()) {
                names.push_back(e.section);
            }
        }
        return names;
    }

    double to_double(const std::string& text, const std::string& section,
                     const std::string& key) const {
        try {
            return parse_double(text, path_ + " [" + section + "] " + key);
        } catch (const ParseError& err) {
            throw ConfigError(err.what());
        }
    }

private:
    const std::vector<IniEntry>& entries_;
    std::string path_;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream stream(text);
    while (std::getline(stream, part, sep)) parts.push_back(trim(part));
    return parts;
}

SpectralBand parse_band(const IniView& ini, const std::string& section, const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) {
        throw ConfigError("band must be 'center_nm:fwhm_nm', got '" + text + "'");
    }
    return SpectralBand(ini.to_double(parts[0], section, "band"),
                        ini.to_double(parts[1], section, "band"));
}

std::string resolve(const std::filesystem::path& base_dir, const std::string& relative) {
    std::filesystem::path p(relative);
    if (p.is_absolute()) return p.string();
    return (base_dir / p).string();
}

} // namespace

SiteConfig load_site_config(const std::string& path) {
    const auto entries = parse_ini(path);
    const IniView ini(entries, path);
    const auto base_dir = std::filesystem::path(path).parent_path();

    SiteConfig config;
    config.config_path = path;
    config.site_id = ini.require("site", "site_id");
    config.latitude = ini.get("site", "latitude").value_or("");
    config.longitude = ini.get("site", "longitude").value_or("");
    config.orbit_altitude_m = ini.get_double("site", "orbit_altitude_m", 550e3);
    config.r_receiver_m = ini.get_double("site", "r_receiver_m", 0.125);
    config.extinction_coeff = ini.get_double("site", "extinction_coeff", kDefaultExtinctionCoeff);
    if (auto fov = ini.get("site", "fov_half_angle_rad")) {
        config.fov_half_angle_rad = ini.to_double(*fov, "site", "fov_half_angle_rad");
    } else {
        throw ConfigError(path + ": missing required key [site] fov_half_angle_rad "
                          "(receiver field of view has no published default and must be "
                          "supplied per mission)");
    }
    if (!(config.fov_half_angle_rad > 0.0)) {
        throw ConfigError(path + ": [site] fov_half_angle_rad must be > 0");
    }

    if (ini.get("fiber_probe", "core_radius_m")) {
        const double core = ini.require_double("fiber_probe", "core_radius_m");
        if (auto na = ini.get("fiber_probe", "numerical_aperture")) {
            config.fiber_probe = FiberProbe::from_numerical_aperture(
                core, ini.to_double(*na, "fiber_probe", "numerical_aperture"));
        } else {
            config.fiber_probe =
                FiberProbe(core, ini.require_double("fiber_probe", "half_angle_rad"));
        }
    }

    if (ini.get("area_fractions", "viirs_illuminated")) {
        config.area_fractions = AreaFractions(
            ini.require_double("area_fractions", "viirs_illuminated"),
            ini.require_double("area_fractions", "receiver_illuminated"),
            ini.get_double("area_fractions", "rel_uncertainty", 0.20));
    }

    try {
        if (auto factors_file = ini.get("spectral_factors", "factors_file")) {
            config.spectral_factors = load_scale_factors(resolve(base_dir, *factors_file));
        }
        for (const auto& text : ini.get_all("spectral_factors", "factor")) {
            const auto parts = split(text, ',');
            if (parts.size() != 4) {
                throw ConfigError(path + ": factor must be 'center,fwhm,fraction,abs_uncertainty'");
            }
            config.spectral_factors.emplace_back(
                SpectralBand(ini.to_double(parts[0], "spectral_factors", "factor"),
                             ini.to_double(parts[1], "spectral_factors", "factor")),
                ini.to_double(parts[2], "spectral_factors", "factor"),
                ini.to_double(parts[3], "spectral_factors", "factor"));
        }
        if (auto spectrum_file = ini.get("spectral_factors", "spectrum_file")) {
            const auto spectrum = load_spectrum(resolve(base_dir, *spectrum_file));
            for (const auto& band_text : ini.get_all("spectral_factors", "spectrum_band")) {
                config.spectral_factors.push_back(spectral_fraction_from_spectrum(
                    spectrum, parse_band(ini, "spectral_factors", band_text)));
            }
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError(path + ": " + err.what());
    } catch (const ParseError& err) {
        throw ConfigError(err.what());
    }

    for (const auto& text : ini.get_all("exclusion", "zone")) {
        const auto parts = split(text, ',');
        if (parts.size() != 4) {
            throw ConfigError(path + ": zone must be 'moon_label,azimuth,elevation,radius'");
        }
        ExclusionConfig e;
        if (parts[0] != "any") e.moon_label = moon_label_from_string(parts[0]);
        e.zone = {ini.to_double(parts[1], "exclusion", "zone"),
                  ini.to_double(parts[2], "exclusion", "zone"),
                  ini.to_double(parts[3], "exclusion", "zone")};
        config.exclusions.push_back(e);
    }

    for (const auto& section : ini.sections_with_prefix("scenario.")) {
        const std::string name = section.substr(std::string("scenario.").size());
        const std::string direction_text = ini.require(section, "direction");
        LinkDirection direction;
        if (direction_text == "uplink") {
            direction = LinkDirection::kUplink;
        } else if (direction_text == "downlink") {
            direction = LinkDirection::kDownlink;
        } else {
            throw ConfigError(path + ": [" + section + "] direction must be uplink or downlink");
        }

        Thresholds thresholds;
        if (auto text = ini.get(section, "thresholds")) {
            const auto parts = split(*text, ',');
            if (parts.size() != 3) {
                throw ConfigError(path + ": thresholds must be 'theoretical,practical,reference'");
            }
            thresholds.theoretical = ini.to_double(parts[0], section, "thresholds");
            thresholds.practical = ini.to_double(parts[1], section, "thresholds");
            thresholds.reference = ini.to_double(parts[2], section, "thresholds");
        }

        try {
            SourceSpec source(source_kind_from_string(ini.require(section, "source_kind")),
                              parse_band(ini, section, ini.require(section, "band")),
                              ini.require_double(section, "pulse_rate_hz"),
                              ini.get_double(section, "intrinsic_error", 0.0));
            const std::string table_path = resolve(base_dir, ini.require(section, "loss_table"));
            config.scenarios.emplace_back(name, direction, source,
                                          ini.get_double(section, "coincidence_window_s", 1e-9),
                                          thresholds, table_path, load_loss_table(table_path));
        } catch (const std::invalid_argument& err) {
            throw ConfigError(path + ": [" + section + "]: " + err.what());
        } catch (const ParseError& err) {
            throw ConfigError(err.what());
        }
    }

    return config;
}

} // namespace qgslink
