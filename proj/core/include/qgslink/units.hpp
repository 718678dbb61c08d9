#pragma once
// qgslink/units.hpp - radiometric scalar types and the radiance <-> photon
// rate conversions underlying every link-budget estimate in this library.
//
// External interfaces speak the survey units (nm, nW/cm^2/sr, Hz, degrees);
// all internal arithmetic is double-precision SI. Relative uncertainties are
// carried as single standard fractions and composed in quadrature.

#include <cmath>
#include <stdexcept>

namespace qgslink {

// CODATA 2018 exact values.
inline constexpr double kPlanckJs = 6.62607015e-34;
inline constexpr double kSpeedOfLightMps = 299792458.0;

// 1 nW/cm^2/sr = 1e-5 W/m^2/sr.
inline constexpr double kNwCm2SrToSi = 1.0e-5;

/// Quadrature composition of independent relative uncertainties.
inline double combine_rel_uncertainty(double a, double b) {
    return std::sqrt(a * a + b * b);
}

/// A filter passband: centre wavelength and full width at half maximum.
struct SpectralBand {
    double center_nm;
    double fwhm_nm;

    SpectralBand(double center, double fwhm) : center_nm(center), fwhm_nm(fwhm) {
        if (!(center_nm > 0.0) || !(fwhm_nm > 0.0) || !(fwhm_nm < center_nm)) {
            throw std::invalid_argument("SpectralBand: require 0 < fwhm_nm < center_nm");
        }
    }

    double lo_nm() const { return center_nm - 0.5 * fwhm_nm; }
    double hi_nm() const { return center_nm + 0.5 * fwhm_nm; }

    bool operator==(const SpectralBand&) const = default;
};

/// Band-integrated radiance. Stored in the external unit nW/cm^2/sr.
struct Radiance {
    double nw_cm2_sr;
    SpectralBand band;
    double rel_uncertainty;

    Radiance(double value_nw_cm2_sr, SpectralBand b, double rel_unc = 0.0)
        : nw_cm2_sr(value_nw_cm2_sr), band(b), rel_uncertainty(rel_unc) {
        if (!(nw_cm2_sr >= 0.0)) throw std::invalid_argument("Radiance: value must be >= 0");
        if (!(rel_uncertainty >= 0.0)) throw std::invalid_argument("Radiance: rel_uncertainty must be >= 0");
    }

    /// W/m^2/sr
    double si() const { return nw_cm2_sr * kNwCm2SrToSi; }

    static Radiance from_si(double w_m2_sr, SpectralBand b, double rel_unc = 0.0) {
        return Radiance(w_m2_sr / kNwCm2SrToSi, b, rel_unc);
    }
};

/// Photons per second, after normalisation to detector-independent rate.
struct PhotonRate {
    double hz = 0.0;
    double rel_uncertainty = 0.0;

    PhotonRate() = default;
    PhotonRate(double rate_hz, double rel_unc = 0.0) : hz(rate_hz), rel_uncertainty(rel_unc) {
        if (!(hz >= 0.0)) throw std::invalid_argument("PhotonRate: rate must be >= 0");
        if (!(rel_uncertainty >= 0.0)) throw std::invalid_argument("PhotonRate: rel_uncertainty must be >= 0");
    }
};

/// Energy of one photon at a band's centre wavelength.
struct PhotonEnergy {
    double joules = 0.0;
};

/// h*c / lambda at the band centre.
PhotonEnergy photon_energy(const SpectralBand& band);

/// Photon rate collected from an extended emitter:
///   N = e_atm * A_g * Omega_d * L / E_lambda.
/// The radiance uncertainty is carried through unchanged; the geometric
/// factors are treated as exact.
PhotonRate radiance_to_rate(const Radiance& radiance, double emitting_area_m2,
                            double solid_angle_sr, double e_atm);

/// Inverse of the above for a probe of acceptance half-angle phi and
/// aperture radius r:  L = E_lambda * N / ((pi * phi * r)^2 * e_atm).
/// Throws std::domain_error for degenerate geometry (phi, r, or e_atm zero).
Radiance rate_to_radiance(const PhotonRate& rate, const SpectralBand& band,
                          double fov_half_angle_rad, double r_detector_m,
                          double e_atm);

} // namespace qgslink
