#include "qgslink/viirs.hpp"

#include "qgslink/csv.hpp"

#include <algorithm>
#include <cmath>

namespace qgslink {

Radiance illuminated_radiance(const ViirsPixel& pixel, const AreaFractions& fractions) {
    if (fractions.viirs_illuminated == 0.0) {
        throw std::domain_error("illuminated_radiance: viirs_illuminated fraction is zero");
    }
    const double value = pixel.radiance.nw_cm2_sr / fractions.viirs_illuminated;
    const double unc = combine_rel_uncertainty(pixel.radiance.rel_uncertainty,
                                               fractions.rel_uncertainty);
    return Radiance(value, pixel.radiance.band, unc);
}

Radiance effective_footprint_radiance(const Radiance& illuminated, const AreaFractions& fractions) {
    const double value = illuminated.nw_cm2_sr * fractions.receiver_illuminated;
    const double unc = combine_rel_uncertainty(illuminated.rel_uncertainty,
                                               fractions.rel_uncertainty);
    return Radiance(value, illuminated.band, unc);
}

Radiance band_scale(const Radiance& broadband, const SpectralScaleFactor& factor) {
    if (!is_viirs_broadband(broadband.band)) {
        throw std::invalid_argument("band_scale: input is already narrowband (would double-scale)");
    }
    const double value = broadband.nw_cm2_sr * factor.fraction;
    const double factor_rel =
        factor.fraction > 0.0 ? factor.abs_uncertainty / factor.fraction : 0.0;
    const double unc = combine_rel_uncertainty(broadband.rel_uncertainty, factor_rel);
    return Radiance(value, factor.band, unc);
}

namespace {

// Trapezoidal integral of the piecewise-linear spectrum over [lo, hi],
// with exact interpolation at the window edges.
double integrate(std::span<const SpectralSample> s, double lo, double hi) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double x0 = s[i].wavelength_nm, x1 = s[i + 1].wavelength_nm;
        if (x1 <= lo || x0 >= hi) continue;
        const double a = std::max(x0, lo), b = std::min(x1, hi);
        const double slope = (s[i + 1].intensity - s[i].intensity) / (x1 - x0);
        const double ya = s[i].intensity + slope * (a - x0);
        const double yb = s[i].intensity + slope * (b - x0);
        total += 0.5 * (ya + yb) * (b - a);
    }
    return total;
}

} // namespace

SpectralScaleFactor spectral_fraction_from_spectrum(std::span<const SpectralSample> spectrum,
                                                    const SpectralBand& band,
                                                    double abs_uncertainty) {
    if (spectrum.size() < 2) {
        throw std::invalid_argument("spectral_fraction_from_spectrum: need at least two samples");
    }
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (!(spectrum[i].intensity >= 0.0)) {
            throw std::invalid_argument("spectral_fraction_from_spectrum: negative intensity");
        }
        if (i > 0 && !(spectrum[i].wavelength_nm > spectrum[i - 1].wavelength_nm)) {
            throw std::invalid_argument(
                "spectral_fraction_from_spectrum: wavelengths must be strictly increasing");
        }
    }
    const double lo = spectrum.front().wavelength_nm;
    const double hi = spectrum.back().wavelength_nm;
    if (lo > kViirsDnbBand.lo_nm() || hi < kViirsDnbBand.hi_nm()) {
        throw std::invalid_argument(
            "spectral_fraction_from_spectrum: spectrum does not cover the 500-900 nm window");
    }
    if (lo > band.lo_nm() || hi < band.hi_nm()) {
        throw std::invalid_argument("spectral_fraction_from_spectrum: spectrum does not cover the band");
    }
    const double total = integrate(spectrum, kViirsDnbBand.lo_nm(), kViirsDnbBand.hi_nm());
    if (total == 0.0) {
        throw std::domain_error("spectral_fraction_from_spectrum: all-zero spectrum");
    }
    const double fraction = integrate(spectrum, band.lo_nm(), band.hi_nm()) / total;
    return SpectralScaleFactor(band, std::clamp(fraction, 0.0, 1.0), abs_uncertainty);
}

std::vector<ViirsPixel> load_viirs_pixels(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto c_site = table.col("site_id");
    const auto c_date = table.col("date_utc");
    const auto c_rad = table.col("radiance_nw_cm2_sr");
    const auto c_unc = table.col("rel_uncertainty");

    std::vector<ViirsPixel> pixels;
    pixels.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        const double value = parse_double(row[c_rad], path + " radiance_nw_cm2_sr");
        const double unc = parse_double(row[c_unc], path + " rel_uncertainty");
        pixels.emplace_back(Radiance(value, kViirsDnbBand, unc), row[c_site], row[c_date]);
    }
    return pixels;
}

std::vector<SpectralSample> load_spectrum(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto c_wl = table.col("wavelength_nm");
    const auto c_in = table.col("intensity");

    std::vector<SpectralSample> spectrum;
    spectrum.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        spectrum.push_back({parse_double(row[c_wl], path + " wavelength_nm"),
                            parse_double(row[c_in], path + " intensity")});
    }
    return spectrum;
}

std::vector<SpectralScaleFactor> load_scale_factors(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto c_center = table.col("band_center_nm");
    const auto c_fwhm = table.col("band_fwhm_nm");
    const auto c_frac = table.col("fraction");
    const auto c_unc = table.col("abs_uncertainty");

    std::vector<SpectralScaleFactor> factors;
    factors.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        factors.emplace_back(SpectralBand(parse_double(row[c_center], path + " band_center_nm"),
                                          parse_double(row[c_fwhm], path + " band_fwhm_nm")),
                             parse_double(row[c_frac], path + " fraction"),
                             parse_double(row[c_unc], path + " abs_uncertainty"));
    }
    return factors;
}

} // namespace qgslink
