#include "qgslink/report.hpp"

#include "qgslink/csv.hpp"
#include "qgslink/linkgeom.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qgslink {

using ordered_json = nlohmann::ordered_json;

ElevationGrid ElevationGrid::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream stream(text);
    while (std::getline(stream, part, ':')) parts.push_back(part);
    if (parts.size() != 3) {
        throw ConfigError("grid must be 'LO:HI:STEP', got '" + text + "'");
    }
    ElevationGrid grid;
    grid.lo_deg = parse_double(parts[0], "grid LO");
    grid.hi_deg = parse_double(parts[1], "grid HI");
    grid.step_deg = parse_double(parts[2], "grid STEP");
    if (!(grid.lo_deg > 0.0 && grid.hi_deg <= 90.0 && grid.lo_deg <= grid.hi_deg) ||
        !(grid.step_deg > 0.0)) {
        throw ConfigError("grid must satisfy 0 < LO <= HI <= 90 and STEP > 0");
    }
    return grid;
}

std::vector<double> ElevationGrid::elevations() const {
    std::vector<double> result;
    const auto n = static_cast<std::size_t>(std::floor((hi_deg - lo_deg) / step_deg + 1e-9));
    result.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        result.push_back(lo_deg + static_cast<double>(i) * step_deg);
    }
    return result;
}

const ViirsPixel& select_site_pixel(std::span<const ViirsPixel> pixels,
                                    const std::string& site_id) {
    const ViirsPixel* best = nullptr;
    for (const auto& pixel : pixels) {
        if (pixel.site_id != site_id) continue;
        if (!best || pixel.radiance.nw_cm2_sr > best->radiance.nw_cm2_sr) best = &pixel;
    }
    if (!best) {
        throw std::runtime_error("no VIIRS pixel found for site '" + site_id + "'");
    }
    return *best;
}

PhotonRate uplink_background_from_radiance(const SiteConfig& site, const Radiance& band_radiance,
                                           double elevation_deg) {
    const double distance = slant_distance(site.orbit_altitude_m, elevation_deg);
    const LinkGeometry geom(elevation_deg, distance, site.fov_half_angle_rad, site.r_receiver_m);
    return radiance_to_rate(band_radiance, footprint_area(geom),
                            detector_solid_angle(site.r_receiver_m, distance),
                            atmospheric_transmission(elevation_deg, site.extinction_coeff));
}

namespace {

std::string bands_found(std::span<const SkySample> samples) {
    std::set<std::pair<double, double>> bands;
    for (const auto& s : samples) bands.insert({s.band.center_nm, s.band.fwhm_nm});
    std::string out;
    for (const auto& [center, fwhm] : bands) {
        if (!out.empty()) out += ", ";
        out += format_double(center) + ":" + format_double(fwhm);
    }
    return out.empty() ? "(none)" : out;
}

std::vector<SkySample> filter_band(std::span<const SkySample> samples, const SpectralBand& band,
                                   const std::string& what) {
    std::vector<SkySample> matching;
    for (const auto& s : samples) {
        if (s.band == band) matching.push_back(s);
    }
    if (matching.empty()) {
        throw std::runtime_error(what + ": no samples in band " + format_double(band.center_nm) +
                                 ":" + format_double(band.fwhm_nm) + " nm (bands found: " +
                                 bands_found(samples) + ")");
    }
    return matching;
}

} // namespace

UplinkResult run_uplink(const SiteConfig& site, const ScenarioConfig& scenario,
                        std::span<const ViirsPixel> pixels,
                        std::span<const SkySample> roof_samples, const ElevationGrid& grid) {
    if (scenario.direction != LinkDirection::kUplink) {
        throw std::invalid_argument("run_uplink: scenario '" + scenario.name + "' is not an uplink");
    }
    if (!site.area_fractions) {
        throw ConfigError(site.config_path + ": [area_fractions] required for uplink scenarios");
    }

    const ViirsPixel& pixel = select_site_pixel(pixels, site.site_id);
    const auto& factor = site.factor_for_band(scenario.source.band);
    const Radiance band_radiance = band_scale(
        effective_footprint_radiance(illuminated_radiance(pixel, *site.area_fractions),
                                     *site.area_fractions),
        factor);

    UplinkResult result;
    result.scenario_name = scenario.name;
    result.viirs_date = pixel.date_utc;
    result.pixel_radiance_nw_cm2_sr = pixel.radiance.nw_cm2_sr;
    result.band_radiance_nw_cm2_sr = band_radiance.nw_cm2_sr;
    result.band_radiance_rel_uncertainty = band_radiance.rel_uncertainty;
    result.elevations_deg = grid.elevations();

    for (double elevation : result.elevations_deg) {
        result.viirs_series.push_back(uplink_background_from_radiance(site, band_radiance, elevation));
    }

    if (!roof_samples.empty()) {
        if (!site.fiber_probe) {
            throw ConfigError(site.config_path +
                              ": [fiber_probe] required when a roof survey is supplied");
        }
        const auto matching = filter_band(roof_samples, scenario.source.band, "roof survey");
        double mean = 0.0;
        for (const auto& s : matching) mean += normalize(s).hz;
        mean /= static_cast<double>(matching.size());
        double variance = 0.0;
        if (matching.size() > 1) {
            for (const auto& s : matching) {
                const double r = normalize(s).hz;
                variance += (r - mean) * (r - mean);
            }
            variance /= static_cast<double>(matching.size() - 1);
        }
        const double rel = mean > 0.0 ? std::sqrt(variance) / mean : 0.0;
        const PhotonRate roof_rate(mean, rel);
        result.roof_mean_hz = mean;
        result.roof_rel_uncertainty = rel;
        for (double elevation : result.elevations_deg) {
            const LinkGeometry geom(elevation, slant_distance(site.orbit_altitude_m, elevation),
                                    site.fov_half_angle_rad, site.r_receiver_m);
            result.roof_series.push_back(
                uplink_background_rate(roof_rate, *site.fiber_probe, geom, site.extinction_coeff));
        }
    }

    result.curve = qber_curve(
        scenario.source, scenario.loss,
        [&](double elevation) { return uplink_background_from_radiance(site, band_radiance, elevation); },
        result.elevations_deg, scenario.coincidence_window_s);
    result.verdict = verdict(result.curve, scenario.thresholds);
    return result;
}

std::vector<DownlinkResult> run_downlink(const SiteConfig& site, const ScenarioConfig& scenario,
                                         std::span<const SkySample> survey) {
    if (scenario.direction != LinkDirection::kDownlink) {
        throw std::invalid_argument("run_downlink: scenario '" + scenario.name +
                                    "' is not a downlink");
    }
    if (survey.empty()) throw std::runtime_error("sky survey is empty");

    std::vector<SkySample> site_samples;
    for (const auto& s : survey) {
        if (s.site_id == site.site_id) site_samples.push_back(s);
    }
    if (site_samples.empty()) {
        throw std::runtime_error("sky survey has no samples for site '" + site.site_id + "'");
    }
    const auto matching = filter_band(site_samples, scenario.source.band, "sky survey");

    std::vector<DownlinkResult> results;
    for (MoonLabel label : {MoonLabel::kNew, MoonLabel::kFull}) {
        std::vector<SkySample> group;
        for (const auto& s : matching) {
            if (s.moon_label == label) group.push_back(s);
        }
        if (group.empty()) continue;

        DownlinkResult result;
        result.scenario_name = scenario.name;
        result.moon_label = label;
        const auto unique = dedupe_samples(group);
        for (const auto& s : unique) {
            const PhotonRate rate = normalize(s);
            result.sky_map.push_back({s.azimuth_deg, s.elevation_deg, rate.hz, rate.rel_uncertainty});
        }
        const auto zones = site.exclusion_zones_for(label);
        result.profile = aggregate_by_elevation(unique, zones);
        result.curve = qber_curve(scenario.source, scenario.loss, result.profile,
                                  scenario.coincidence_window_s);
        result.verdict = verdict(result.curve, scenario.thresholds);
        results.push_back(std::move(result));
    }
    return results;
}

namespace {

ordered_json verdicts_json(const ViabilityVerdict& verdict) {
    ordered_json list = ordered_json::array();
    for (const auto& entry : verdict.entries) {
        ordered_json e;
        e["name"] = entry.name;
        e["threshold"] = entry.threshold;
        if (entry.min_secure_elevation_deg) {
            e["min_secure_elevation_deg"] = *entry.min_secure_elevation_deg;
        } else {
            e["min_secure_elevation_deg"] = "never";
        }
        list.push_back(e);
    }
    return list;
}

ordered_json curve_json(std::span<const QberPoint> curve) {
    ordered_json list = ordered_json::array();
    for (const auto& p : curve) {
        ordered_json e;
        e["elevation_deg"] = p.elevation_deg;
        e["signal_hz"] = p.signal_hz;
        e["background_hz"] = p.background_hz;
        e["effective_background_hz"] = p.effective_background_hz;
        e["qber"] = p.qber;
        e["qber_lo"] = p.qber_lo;
        e["qber_hi"] = p.qber_hi;
        list.push_back(e);
    }
    return list;
}

std::string verdict_sentence(const ViabilityVerdict& verdict) {
    std::string out;
    for (const auto& entry : verdict.entries) {
        if (!out.empty()) out += "; ";
        const std::string pct = format_double(entry.threshold * 100.0) + "%";
        if (entry.min_secure_elevation_deg) {
            out += "secure above " + format_double(*entry.min_secure_elevation_deg) + " deg at " +
                   pct;
        } else {
            out += "never secure at " + pct;
        }
    }
    return out;
}

} // namespace

SiteReport build_report(const SiteConfig& site, std::span<const InputFile> inputs,
                        std::span<const UplinkResult> uplinks,
                        std::span<const DownlinkResult> downlinks,
                        std::span<const SkippedScenario> skipped) {
    ordered_json doc;
    doc["tool"] = "qgslink";
    doc["format_version"] = 1;

    ordered_json site_json;
    site_json["site_id"] = site.site_id;
    site_json["latitude"] = site.latitude;
    site_json["longitude"] = site.longitude;
    site_json["orbit_altitude_m"] = site.orbit_altitude_m;
    site_json["r_receiver_m"] = site.r_receiver_m;
    site_json["fov_half_angle_rad"] = site.fov_half_angle_rad;
    site_json["extinction_coeff"] = site.extinction_coeff;
    doc["site"] = site_json;

    ordered_json inputs_json = ordered_json::array();
    for (const auto& input : inputs) {
        ordered_json e;
        e["role"] = input.role;
        e["path"] = input.path;
        e["fnv1a64"] = input.fnv1a64;
        inputs_json.push_back(e);
    }
    doc["inputs"] = inputs_json;

    if (site.area_fractions) {
        ordered_json notes;
        notes["viirs_illuminated_fraction"] = site.area_fractions->viirs_illuminated;
        notes["receiver_illuminated_fraction"] = site.area_fractions->receiver_illuminated;
        notes["fraction_rel_uncertainty"] = site.area_fractions->rel_uncertainty;
        ordered_json factors = ordered_json::array();
        for (const auto& factor : site.spectral_factors) {
            ordered_json f;
            f["band_center_nm"] = factor.band.center_nm;
            f["band_fwhm_nm"] = factor.band.fwhm_nm;
            f["fraction"] = factor.fraction;
            f["abs_uncertainty"] = factor.abs_uncertainty;
            factors.push_back(f);
        }
        notes["spectral_factors"] = factors;
        doc["method_notes"] = notes;
    }

    std::ostringstream text;
    text << "qgslink site report: " << site.site_id << "\n";
    text << std::string(21 + site.site_id.size(), '=') << "\n\n";
    text << "inputs:\n";
    for (const auto& input : inputs) {
        text << "  " << input.role << ": " << input.path << " (fnv1a64 " << input.fnv1a64 << ")\n";
    }
    text << "\n";

    ordered_json scenarios = ordered_json::array();

    auto scenario_header = [&](const ScenarioConfig& s) {
        ordered_json e;
        e["name"] = s.name;
        e["direction"] = to_string(s.direction);
        ordered_json source;
        source["kind"] = to_string(s.source.kind);
        source["band_center_nm"] = s.source.band.center_nm;
        source["band_fwhm_nm"] = s.source.band.fwhm_nm;
        source["pulse_rate_hz"] = s.source.pulse_rate_hz;
        source["intrinsic_error"] = s.source.intrinsic_error;
        e["source"] = source;
        e["coincidence_window_s"] = s.coincidence_window_s;
        e["loss_table"] = s.loss_table_path;
        return e;
    };

    for (const auto& scenario : site.scenarios) {
        const bool is_uplink = scenario.direction == LinkDirection::kUplink;
        ordered_json e = scenario_header(scenario);

        const UplinkResult* up = nullptr;
        for (const auto& r : uplinks) {
            if (r.scenario_name == scenario.name) up = &r;
        }
        std::vector<const DownlinkResult*> downs;
        for (const auto& r : downlinks) {
            if (r.scenario_name == scenario.name) downs.push_back(&r);
        }
        const SkippedScenario* skip = nullptr;
        for (const auto& s : skipped) {
            if (s.scenario_name == scenario.name) skip = &s;
        }

        text << "scenario " << scenario.name << " (" << to_string(scenario.direction) << ", "
             << to_string(scenario.source.kind) << " " << format_double(scenario.source.band.center_nm)
             << " nm @ " << format_double(scenario.source.pulse_rate_hz) << " Hz)\n";

        if (skip || (is_uplink && !up) || (!is_uplink && downs.empty())) {
            e["status"] = "not assessed";
            e["reason"] = skip ? skip->reason : "required inputs not provided";
            text << "  not assessed: " << (skip ? skip->reason : "required inputs not provided")
                 << "\n\n";
            scenarios.push_back(e);
            continue;
        }

        e["status"] = "assessed";
        ordered_json results = ordered_json::array();
        if (is_uplink) {
            ordered_json r;
            r["label"] = "";
            r["viirs_date"] = up->viirs_date;
            r["pixel_radiance_nw_cm2_sr"] = up->pixel_radiance_nw_cm2_sr;
            r["band_radiance_nw_cm2_sr"] = up->band_radiance_nw_cm2_sr;
            r["band_radiance_rel_uncertainty"] = up->band_radiance_rel_uncertainty;
            ordered_json series = ordered_json::array();
            for (std::size_t i = 0; i < up->elevations_deg.size(); ++i) {
                ordered_json point;
                point["elevation_deg"] = up->elevations_deg[i];
                point["viirs_hz"] = up->viirs_series[i].hz;
                if (!up->roof_series.empty()) point["roof_hz"] = up->roof_series[i].hz;
                series.push_back(point);
            }
            r["background_series"] = series;
            if (up->roof_mean_hz) {
                r["roof_mean_hz"] = *up->roof_mean_hz;
                r["roof_rel_uncertainty"] = up->roof_rel_uncertainty;
            }
            r["curve"] = curve_json(up->curve);
            r["verdicts"] = verdicts_json(up->verdict);
            results.push_back(r);

            text << "  viirs pixel " << up->viirs_date << ": "
                 << format_double(up->pixel_radiance_nw_cm2_sr) << " nW/cm2/sr -> band "
                 << format_double(up->band_radiance_nw_cm2_sr) << " nW/cm2/sr (rel unc "
                 << format_double(up->band_radiance_rel_uncertainty) << ")\n";
            text << "  zenith prediction " << format_double(up->viirs_series.back().hz) << " Hz\n";
            if (up->roof_mean_hz) {
                text << "  roof method mean " << format_double(*up->roof_mean_hz)
                     << " Hz on the roof -> zenith " << format_double(up->roof_series.back().hz)
                     << " Hz\n";
            }
            text << "  " << verdict_sentence(up->verdict) << "\n";
        } else {
            for (const auto* down : downs) {
                ordered_json r;
                r["label"] = to_string(down->moon_label);
                ordered_json profile = ordered_json::array();
                for (const auto& row : down->profile.rows) {
                    ordered_json p;
                    p["elevation_deg"] = row.elevation_deg;
                    p["mean_rate_hz"] = row.mean_rate_hz;
                    p["std_rate_hz"] = row.std_rate_hz;
                    p["n_samples"] = row.n_samples;
                    profile.push_back(p);
                }
                r["profile"] = profile;
                r["curve"] = curve_json(down->curve);
                r["verdicts"] = verdicts_json(down->verdict);
                results.push_back(r);

                double max_qber = 0.0;
                for (const auto& p : down->curve) max_qber = std::max(max_qber, p.qber);
                text << "  [" << to_string(down->moon_label) << "] max qber "
                     << format_double(max_qber) << " over " << down->curve.size()
                     << " measured elevations\n";
                text << "  [" << to_string(down->moon_label) << "] " << verdict_sentence(down->verdict)
                     << "\n";
            }
        }
        e["results"] = results;
        scenarios.push_back(e);
        text << "\n";
    }
    doc["scenarios"] = scenarios;

    SiteReport report;
    report.json_text = doc.dump(2) + "\n";
    report.summary_text = text.str();
    return report;
}

std::string sky_map_csv(std::span<const SkyMapPoint> map) {
    std::string out = "azimuth_deg,elevation_deg,rate_hz,rel_uncertainty\n";
    for (const auto& p : map) {
        out += format_double(p.azimuth_deg) + "," + format_double(p.elevation_deg) + "," +
               format_double(p.rate_hz) + "," + format_double(p.rel_uncertainty) + "\n";
    }
    return out;
}

std::string elevation_profile_csv(const ElevationProfile& profile) {
    std::string out = "elevation_deg,mean_rate_hz,std_rate_hz,n_samples\n";
    for (const auto& row : profile.rows) {
        out += format_double(row.elevation_deg) + "," + format_double(row.mean_rate_hz) + "," +
               format_double(row.std_rate_hz) + "," + std::to_string(row.n_samples) + "\n";
    }
    return out;
}

std::string qber_curve_csv(std::span<const QberPoint> curve) {
    std::string out =
        "elevation_deg,signal_hz,background_hz,effective_background_hz,qber,qber_lo,qber_hi\n";
    for (const auto& p : curve) {
        out += format_double(p.elevation_deg) + "," + format_double(p.signal_hz) + "," +
               format_double(p.background_hz) + "," + format_double(p.effective_background_hz) +
               "," + format_double(p.qber) + "," + format_double(p.qber_lo) + "," +
               format_double(p.qber_hi) + "\n";
    }
    return out;
}

std::string uplink_series_csv(const UplinkResult& result) {
    std::string out =
        "elevation_deg,viirs_rate_hz,viirs_lo_hz,viirs_hi_hz,roof_rate_hz,roof_lo_hz,roof_hi_hz\n";
    for (std::size_t i = 0; i < result.elevations_deg.size(); ++i) {
        const auto& v = result.viirs_series[i];
        out += format_double(result.elevations_deg[i]) + "," + format_double(v.hz) + "," +
               format_double(v.hz * std::max(0.0, 1.0 - v.rel_uncertainty)) + "," +
               format_double(v.hz * (1.0 + v.rel_uncertainty)) + ",";
        if (!result.roof_series.empty()) {
            const auto& r = result.roof_series[i];
            out += format_double(r.hz) + "," +
                   format_double(r.hz * std::max(0.0, 1.0 - r.rel_uncertainty)) + "," +
                   format_double(r.hz * (1.0 + r.rel_uncertainty));
        } else {
            out += ",,";
        }
        out += "\n";
    }
    return out;
}

} // namespace qgslink
