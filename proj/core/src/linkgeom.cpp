#include "qgslink/linkgeom.hpp"

#include <cmath>

namespace qgslink {

namespace {

double deg_to_rad(double deg) { return deg * M_PI / 180.0; }

double cosecant(double elevation_deg) {
    return 1.0 / std::sin(deg_to_rad(elevation_deg));
}

} // namespace

double atmospheric_transmission(double elevation_deg, double extinction_coeff) {
    if (!(elevation_deg > 0.0 && elevation_deg <= 90.0)) {
        throw std::out_of_range("atmospheric_transmission: elevation_deg must be in (0, 90]");
    }
    return std::pow(10.0, -extinction_coeff * cosecant(elevation_deg));
}

double footprint_area(const LinkGeometry& geom) {
    const double radius = std::tan(geom.fov_half_angle_rad) * geom.distance_m;
    return M_PI * radius * radius * cosecant(geom.elevation_deg);
}

double detector_solid_angle(double r_receiver_m, double distance_m) {
    if (!(r_receiver_m >= 0.0) || !(distance_m > 0.0)) {
        throw std::invalid_argument("detector_solid_angle: require r >= 0 and distance > 0");
    }
    const double ratio = r_receiver_m / distance_m;
    return M_PI * ratio * ratio;
}

PhotonRate uplink_background_rate(const PhotonRate& roof_rate, const FiberProbe& probe,
                                  const LinkGeometry& geom, double extinction_coeff) {
    const double throughput = probe.half_angle_rad * probe.core_radius_m;
    if (throughput == 0.0) {
        throw std::domain_error("uplink_background_rate: degenerate probe (alpha * r_f = 0)");
    }
    const double csc = cosecant(geom.elevation_deg);
    const double tan_phi = std::tan(geom.fov_half_angle_rad);
    const double e_atm = atmospheric_transmission(geom.elevation_deg, extinction_coeff);
    const double hz = e_atm * tan_phi * tan_phi * csc *
                      geom.r_receiver_m * geom.r_receiver_m *
                      roof_rate.hz / (throughput * throughput);
    return PhotonRate(hz, roof_rate.rel_uncertainty);
}

double slant_distance(double orbit_altitude_m, double elevation_deg) {
    if (!(orbit_altitude_m > 0.0)) {
        throw std::invalid_argument("slant_distance: orbit altitude must be > 0");
    }
    if (!(elevation_deg > 0.0 && elevation_deg <= 90.0)) {
        throw std::out_of_range("slant_distance: elevation_deg must be in (0, 90]");
    }
    const double s = std::sin(deg_to_rad(elevation_deg));
    const double h = orbit_altitude_m;
    return std::sqrt(kEarthRadiusM * kEarthRadiusM * s * s + 2.0 * kEarthRadiusM * h + h * h) -
           kEarthRadiusM * s;
}

} // namespace qgslink
