#include "qgslink/units.hpp"

namespace qgslink {

PhotonEnergy photon_energy(const SpectralBand& band) {
    return PhotonEnergy{kPlanckJs * kSpeedOfLightMps / (band.center_nm * 1e-9)};
}

PhotonRate radiance_to_rate(const Radiance& radiance, double emitting_area_m2,
                            double solid_angle_sr, double e_atm) {
    if (!(emitting_area_m2 >= 0.0)) {
        throw std::invalid_argument("radiance_to_rate: emitting_area_m2 must be >= 0");
    }
    if (!(solid_angle_sr >= 0.0)) {
        throw std::invalid_argument("radiance_to_rate: solid_angle_sr must be >= 0");
    }
    if (!(e_atm >= 0.0 && e_atm <= 1.0)) {
        throw std::invalid_argument("radiance_to_rate: e_atm must be in [0, 1]");
    }
    const double energy = photon_energy(radiance.band).joules;
    const double hz = e_atm * emitting_area_m2 * solid_angle_sr * radiance.si() / energy;
    return PhotonRate(hz, radiance.rel_uncertainty);
}

Radiance rate_to_radiance(const PhotonRate& rate, const SpectralBand& band,
                          double fov_half_angle_rad, double r_detector_m,
                          double e_atm) {
    if (fov_half_angle_rad == 0.0 || r_detector_m == 0.0 || e_atm == 0.0) {
        throw std::domain_error("rate_to_radiance: degenerate geometry (division by zero)");
    }
    if (!(fov_half_angle_rad > 0.0) || !(r_detector_m > 0.0)) {
        throw std::invalid_argument("rate_to_radiance: geometry must be positive");
    }
    if (!(e_atm > 0.0 && e_atm <= 1.0)) {
        throw std::invalid_argument("rate_to_radiance: e_atm must be in (0, 1]");
    }
    const double energy = photon_energy(band).joules;
    const double throughput = M_PI * fov_half_angle_rad * r_detector_m; // sqrt(A*Omega)
    const double w_m2_sr = energy * rate.hz / (throughput * throughput * e_atm);
    return Radiance::from_si(w_m2_sr, band, rate.rel_uncertainty);
}

} // namespace qgslink
