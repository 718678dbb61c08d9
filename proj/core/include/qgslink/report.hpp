#pragma once
// qgslink/report.hpp - end-to-end scenario evaluation and site-report
// assembly. Deterministic given identical inputs: number formatting is
// shortest round-trip decimal, iteration orders are fixed, and no wall-clock
// value enters any computed field.

#include "qgslink/config.hpp"
#include "qgslink/qber.hpp"
#include "qgslink/skysurvey.hpp"
#include "qgslink/viirs.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgslink {

/// Elevation grid in degrees, inclusive of both ends when step divides the
/// span. Parsed from "LO:HI:STEP".
struct ElevationGrid {
    double lo_deg = 10.0;
    double hi_deg = 90.0;
    double step_deg = 1.0;

    static ElevationGrid parse(const std::string& text);
    std::vector<double> elevations() const;
};

struct SkyMapPoint {
    double azimuth_deg;
    double elevation_deg;
    double rate_hz;
    double rel_uncertainty;
};

/// Uplink prediction for one scenario: background photon rate reaching the
/// satellite, by the pixel-rescaling method and (when roof data is present)
/// by the ground-looking roof method, plus the QBER curve and verdicts
/// derived from the pixel-based series.
struct UplinkResult {
    std::string scenario_name;
    std::string viirs_date;
    double pixel_radiance_nw_cm2_sr = 0.0;
    double band_radiance_nw_cm2_sr = 0.0;
    double band_radiance_rel_uncertainty = 0.0;
    std::vector<double> elevations_deg;
    std::vector<PhotonRate> viirs_series;
    std::vector<PhotonRate> roof_series;     // empty when no roof survey given
    std::optional<double> roof_mean_hz;
    double roof_rel_uncertainty = 0.0;
    std::vector<QberPoint> curve;
    ViabilityVerdict verdict;
};

/// Downlink evaluation for one scenario and one moon label found in the
/// survey: normalized sky map, azimuth-averaged profile, QBER curve at the
/// measured elevations, and verdicts.
struct DownlinkResult {
    std::string scenario_name;
    MoonLabel moon_label = MoonLabel::kNew;
    std::vector<SkyMapPoint> sky_map;
    ElevationProfile profile;
    std::vector<QberPoint> curve;
    ViabilityVerdict verdict;
};

/// Pixel used for a site's uplink estimate: the highest radiance on record
/// for that site (upper-bound characterization). Throws std::runtime_error
/// when the file has no pixel for the site.
const ViirsPixel& select_site_pixel(std::span<const ViirsPixel> pixels,
                                    const std::string& site_id);

/// Background rate at the satellite receiver for one elevation, from a
/// band-scaled ground radiance and the configured receiver geometry.
PhotonRate uplink_background_from_radiance(const SiteConfig& site, const Radiance& band_radiance,
                                           double elevation_deg);

UplinkResult run_uplink(const SiteConfig& site, const ScenarioConfig& scenario,
                        std::span<const ViirsPixel> pixels,
                        std::span<const SkySample> roof_samples,   // may be empty
                        const ElevationGrid& grid);

std::vector<DownlinkResult> run_downlink(const SiteConfig& site, const ScenarioConfig& scenario,
                                         std::span<const SkySample> survey);

/// Input provenance recorded in reports.
struct InputFile {
    std::string role;
    std::string path;
    std::string fnv1a64;
};

/// A scenario that could not be evaluated for lack of inputs.
struct SkippedScenario {
    std::string scenario_name;
    std::string direction;
    std::string reason;
};

struct SiteReport {
    std::string json_text;     // machine-readable document
    std::string summary_text;  // per-scenario verdict summary
};

SiteReport build_report(const SiteConfig& site, std::span<const InputFile> inputs,
                        std::span<const UplinkResult> uplinks,
                        std::span<const DownlinkResult> downlinks,
                        std::span<const SkippedScenario> skipped);

/// CSV renderings of the computed series (plotting-ready exports).
std::string sky_map_csv(std::span<const SkyMapPoint> map);
std::string elevation_profile_csv(const ElevationProfile& profile);
std::string qber_curve_csv(std::span<const QberPoint> curve);
std::string uplink_series_csv(const UplinkResult& result);

} // namespace qgslink
