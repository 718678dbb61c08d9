#pragma once
// qgslink/skysurvey.hpp - ingestion of pointed night-sky photon-count
// surveys, normalisation to detector-independent rates, and azimuthal
// aggregation into per-elevation background profiles.

#include "qgslink/units.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgslink {

enum class MoonLabel { kNew, kFull };

std::string to_string(MoonLabel label);
MoonLabel moon_label_from_string(const std::string& text);

/// One pointed photon-count measurement.
struct SkySample {
    std::string site_id;
    std::string timestamp_utc;
    double azimuth_deg = 0.0;       // [0, 360)
    double elevation_deg = 0.0;     // (0, 90]
    SpectralBand band{850.0, 10.0};
    std::uint64_t raw_counts = 0;
    double integration_s = 0.0;
    double detector_efficiency = 1.0;  // (0, 1]
    double optics_efficiency = 1.0;    // (0, 1]
    double dark_rate_hz = 0.0;
    MoonLabel moon_label = MoonLabel::kNew;
    double fov_half_angle_deg = 0.0;
};

/// Azimuth-averaged background versus elevation for one site/band/moon set.
struct ElevationProfileRow {
    double elevation_deg;
    double mean_rate_hz;
    double std_rate_hz;   // sample standard deviation over azimuths
    std::size_t n_samples;
};

struct ElevationProfile {
    std::string site_id;
    SpectralBand band{850.0, 10.0};
    MoonLabel moon_label = MoonLabel::kNew;
    std::vector<ElevationProfileRow> rows;   // elevations strictly increasing
};

/// Sky directions dropped from azimuthal averaging (e.g. around the moon).
struct ExclusionZone {
    double azimuth_deg;
    double elevation_deg;
    double radius_deg;   // great-circle cone radius
};

/// Great-circle separation between two sky directions, in degrees.
double angular_separation_deg(double az1_deg, double el1_deg, double az2_deg, double el2_deg);

/// Drop exact duplicate records, keeping first occurrences in order.
/// Repeated measurements differ at least in their timestamps and survive.
std::vector<SkySample> dedupe_samples(std::span<const SkySample> samples);

/// Dark-subtracted, efficiency-corrected photon rate:
///   rate = max(0, counts / t - dark) / (eta_detector * eta_optics)
/// with Poisson counting statistics as the relative uncertainty.
PhotonRate normalize(const SkySample& sample);

/// Group samples by elevation and average normalized rates over azimuth,
/// dropping samples inside any exclusion zone. All samples must share
/// site, band, and moon label. An elevation whose samples are all excluded
/// is an error naming that elevation.
ElevationProfile aggregate_by_elevation(std::span<const SkySample> samples,
                                        std::span<const ExclusionZone> exclusions = {});

/// Diffuse-background rate rescaling between detector fields of view
/// (solid-angle ratio in the small-angle limit).
PhotonRate rescale_fov(const PhotonRate& rate, double from_half_angle_deg,
                       double to_half_angle_deg);

/// Survey CSV: site_id,timestamp_utc,azimuth_deg,elevation_deg,band_center_nm,
/// band_fwhm_nm,raw_counts,integration_s,detector_efficiency,optics_efficiency,
/// dark_rate_hz,moon_label,fov_half_angle_deg
std::vector<SkySample> load_sky_survey(const std::string& path);

} // namespace qgslink
