#pragma once
// qgslink/viirs.hpp - rescaling of broadband day/night-band nighttime
// radiance pixels (500-900 nm, 500 m ground resolution) to a narrow quantum
// channel band and to the satellite receiver's ground footprint.
//
// The chain is three scalar multiplications on an area-intensive quantity:
//   1. divide by the illuminated fraction of the pixel (dark areas emit 0),
//   2. multiply by the illuminated fraction of the receiver footprint,
//   3. multiply by the band's share of the 500-900 nm integrated spectrum.

#include "qgslink/units.hpp"

#include <span>
#include <string>
#include <vector>

namespace qgslink {

/// Canonical broadband tag for day/night-band pixels.
inline const SpectralBand kViirsDnbBand{700.0, 400.0};

inline bool is_viirs_broadband(const SpectralBand& band) { return band == kViirsDnbBand; }

/// One nighttime-radiance pixel extracted for a site.
struct ViirsPixel {
    Radiance radiance;     // broadband, tagged kViirsDnbBand
    std::string site_id;
    std::string date_utc;  // ISO-8601 date of the overpass

    ViirsPixel(Radiance r, std::string site, std::string date)
        : radiance(r), site_id(std::move(site)), date_utc(std::move(date)) {
        if (!is_viirs_broadband(radiance.band)) {
            throw std::invalid_argument("ViirsPixel: radiance must carry the 500-900 nm broadband tag");
        }
    }
};

/// Share of the broadband signal falling inside one filter passband.
struct SpectralScaleFactor {
    SpectralBand band;
    double fraction;
    double abs_uncertainty;

    SpectralScaleFactor(SpectralBand b, double frac, double abs_unc)
        : band(b), fraction(frac), abs_uncertainty(abs_unc) {
        if (!(fraction >= 0.0 && fraction <= 1.0)) {
            throw std::invalid_argument("SpectralScaleFactor: fraction must be in [0, 1]");
        }
        if (!(abs_uncertainty >= 0.0) || fraction - abs_uncertainty < -1e-12) {
            throw std::invalid_argument("SpectralScaleFactor: fraction - abs_uncertainty must stay >= 0");
        }
    }
};

/// Illuminated-area fractions of the source pixel and of the receiver
/// footprint, estimated from overhead imagery. Each carries the same
/// relative uncertainty.
struct AreaFractions {
    double viirs_illuminated;
    double receiver_illuminated;
    double rel_uncertainty;

    AreaFractions(double viirs_frac, double receiver_frac, double rel_unc = 0.20)
        : viirs_illuminated(viirs_frac), receiver_illuminated(receiver_frac),
          rel_uncertainty(rel_unc) {
        if (!(viirs_illuminated > 0.0 && viirs_illuminated <= 1.0) ||
            !(receiver_illuminated > 0.0 && receiver_illuminated <= 1.0)) {
            throw std::invalid_argument("AreaFractions: fractions must be in (0, 1]");
        }
        if (!(rel_uncertainty >= 0.0)) {
            throw std::invalid_argument("AreaFractions: rel_uncertainty must be >= 0");
        }
    }
};

/// Radiance of the illuminated portion of the pixel, assuming dark areas
/// contribute nothing: L_ill = L_pixel / A_ill.
Radiance illuminated_radiance(const ViirsPixel& pixel, const AreaFractions& fractions);

/// Scale down to the fraction of the receiver footprint that is illuminated.
Radiance effective_footprint_radiance(const Radiance& illuminated, const AreaFractions& fractions);

/// Convert a broadband radiance to one filter band. Refuses to scale an
/// already-narrowband value (double-scaling guard).
Radiance band_scale(const Radiance& broadband, const SpectralScaleFactor& factor);

/// One sample of a relative spectral intensity series.
struct SpectralSample {
    double wavelength_nm;
    double intensity;
};

/// Integrate a sampled spectrum to obtain a band's share of the 500-900 nm
/// total. Trapezoidal rule; samples must cover both the band and the full
/// window with strictly increasing wavelengths.
SpectralScaleFactor spectral_fraction_from_spectrum(std::span<const SpectralSample> spectrum,
                                                    const SpectralBand& band,
                                                    double abs_uncertainty = 0.002);

/// Pixel CSV: site_id,date_utc,radiance_nw_cm2_sr,rel_uncertainty
std::vector<ViirsPixel> load_viirs_pixels(const std::string& path);

/// Spectrum CSV: wavelength_nm,intensity
std::vector<SpectralSample> load_spectrum(const std::string& path);

/// Factor CSV: band_center_nm,band_fwhm_nm,fraction,abs_uncertainty
std::vector<SpectralScaleFactor> load_scale_factors(const std::string& path);

} // namespace qgslink
