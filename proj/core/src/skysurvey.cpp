#include "qgslink/skysurvey.hpp"

#include "qgslink/csv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace qgslink {

std::string to_string(MoonLabel label) {
    return label == MoonLabel::kNew ? "new" : "full";
}

MoonLabel moon_label_from_string(const std::string& text) {
    if (text == "new") return MoonLabel::kNew;
    if (text == "full") return MoonLabel::kFull;
    throw std::invalid_argument("moon_label must be 'new' or 'full', got '" + text + "'");
}

double angular_separation_deg(double az1_deg, double el1_deg, double az2_deg, double el2_deg) {
    const double d = M_PI / 180.0;
    const double cos_sep = std::sin(el1_deg * d) * std::sin(el2_deg * d) +
                           std::cos(el1_deg * d) * std::cos(el2_deg * d) *
                               std::cos((az1_deg - az2_deg) * d);
    return std::acos(std::clamp(cos_sep, -1.0, 1.0)) / d;
}

PhotonRate normalize(const SkySample& sample) {
    if (!(sample.integration_s > 0.0)) {
        throw std::invalid_argument("normalize: integration_s must be > 0");
    }
    if (!(sample.detector_efficiency > 0.0 && sample.detector_efficiency <= 1.0) ||
        !(sample.optics_efficiency > 0.0 && sample.optics_efficiency <= 1.0)) {
        throw std::invalid_argument("normalize: efficiencies must be in (0, 1]");
    }
    const double counts = static_cast<double>(sample.raw_counts);
    const double raw_rate = counts / sample.integration_s;
    // Dark subtraction floors at zero: low-signal samples may fluctuate
    // below the dark rate.
    const double net = std::max(0.0, raw_rate - sample.dark_rate_hz);
    const double rate = net / (sample.detector_efficiency * sample.optics_efficiency);
    const double poisson = sample.raw_counts > 0 ? 1.0 / std::sqrt(counts) : 0.0;
    return PhotonRate(rate, poisson);
}

std::vector<SkySample> dedupe_samples(std::span<const SkySample> samples) {
    auto key = [](const SkySample& s) {
        return std::tuple(s.site_id, s.timestamp_utc, s.azimuth_deg, s.elevation_deg,
                          s.band.center_nm, s.band.fwhm_nm, s.raw_counts, s.integration_s,
                          s.detector_efficiency, s.optics_efficiency, s.dark_rate_hz,
                          s.moon_label, s.fov_half_angle_deg);
    };
    std::set<decltype(key(std::declval<SkySample>()))> seen;
    std::vector<SkySample> unique;
    unique.reserve(samples.size());
    for (const auto& s : samples) {
        if (seen.insert(key(s)).second) unique.push_back(s);
    }
    return unique;
}

namespace {

bool excluded(const SkySample& sample, std::span<const ExclusionZone> zones) {
    for (const auto& zone : zones) {
        if (angular_separation_deg(sample.azimuth_deg, sample.elevation_deg,
                                   zone.azimuth_deg, zone.elevation_deg) <= zone.radius_deg) {
            return true;
        }
    }
    return false;
}

} // namespace

ElevationProfile aggregate_by_elevation(std::span<const SkySample> raw_samples,
                                        std::span<const ExclusionZone> exclusions) {
    if (raw_samples.empty()) {
        throw std::invalid_argument("aggregate_by_elevation: no samples");
    }
    const std::vector<SkySample> samples = dedupe_samples(raw_samples);
    const auto& first = samples.front();
    for (const auto& s : samples) {
        if (s.site_id != first.site_id || !(s.band == first.band) ||
            s.moon_label != first.moon_label) {
            throw std::invalid_argument(
                "aggregate_by_elevation: samples must share site, band, and moon label");
        }
    }

    std::map<double, std::vector<double>> groups;   // ordered by elevation
    std::map<double, std::size_t> seen;
    for (const auto& s : samples) {
        ++seen[s.elevation_deg];
        if (excluded(s, exclusions)) continue;
        groups[s.elevation_deg].push_back(normalize(s).hz);
    }
    for (const auto& [elevation, count] : seen) {
        (void)count;
        if (groups.find(elevation) == groups.end()) {
            throw std::runtime_error("aggregate_by_elevation: all samples at elevation " +
                                     format_double(elevation) + " deg were excluded");
        }
    }

    ElevationProfile profile;
    profile.site_id = first.site_id;
    profile.band = first.band;
    profile.moon_label = first.moon_label;
    for (const auto& [elevation, rates] : groups) {
        double mean = 0.0;
        for (double r : rates) mean += r;
        mean /= static_cast<double>(rates.size());
        double variance = 0.0;
        if (rates.size() > 1) {
            for (double r : rates) variance += (r - mean) * (r - mean);
            variance /= static_cast<double>(rates.size() - 1);
        }
        profile.rows.push_back({elevation, mean, std::sqrt(variance), rates.size()});
    }
    return profile;
}

PhotonRate rescale_fov(const PhotonRate& rate, double from_half_angle_deg,
                       double to_half_angle_deg) {
    if (!(from_half_angle_deg > 0.0) || !(to_half_angle_deg > 0.0)) {
        throw std::invalid_argument("rescale_fov: half-angles must be > 0");
    }
    const double ratio = to_half_angle_deg / from_half_angle_deg;
    return PhotonRate(rate.hz * ratio * ratio, rate.rel_uncertainty);
}

std::vector<SkySample> load_sky_survey(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto c_site = table.col("site_id");
    const auto c_time = table.col("timestamp_utc");
    const auto c_az = table.col("azimuth_deg");
    const auto c_el = table.col("elevation_deg");
    const auto c_center = table.col("band_center_nm");
    const auto c_fwhm = table.col("band_fwhm_nm");
    const auto c_counts = table.col("raw_counts");
    const auto c_int = table.col("integration_s");
    const auto c_det = table.col("detector_efficiency");
    const auto c_opt = table.col("optics_efficiency");
    const auto c_dark = table.col("dark_rate_hz");
    const auto c_moon = table.col("moon_label");
    const auto c_fov = table.col("fov_half_angle_deg");

    std::vector<SkySample> samples;
    samples.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        SkySample s;
        s.site_id = row[c_site];
        s.timestamp_utc = row[c_time];
        s.azimuth_deg = parse_double(row[c_az], path + " azimuth_deg");
        s.elevation_deg = parse_double(row[c_el], path + " elevation_deg");
        s.band = SpectralBand(parse_double(row[c_center], path + " band_center_nm"),
                              parse_double(row[c_fwhm], path + " band_fwhm_nm"));
        s.raw_counts = parse_u64(row[c_counts], path + " raw_counts");
        s.integration_s = parse_double(row[c_int], path + " integration_s");
        s.detector_efficiency = parse_double(row[c_det], path + " detector_efficiency");
        s.optics_efficiency = parse_double(row[c_opt], path + " optics_efficiency");
        s.dark_rate_hz = parse_double(row[c_dark], path + " dark_rate_hz");
        s.moon_label = moon_label_from_string(row[c_moon]);
        s.fov_half_angle_deg = parse_double(row[c_fov], path + " fov_half_angle_deg");
        if (!(s.azimuth_deg >= 0.0 && s.azimuth_deg < 360.0)) {
            throw ParseError(path + ": azimuth_deg must be in [0, 360)");
        }
        if (!(s.elevation_deg > 0.0 && s.elevation_deg <= 90.0)) {
            throw ParseError(path + ": elevation_deg must be in (0, 90]");
        }
        if (!(s.fov_half_angle_deg > 0.0)) {
            throw ParseError(path + ": fov_half_angle_deg must be > 0");
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

} // namespace qgslink
