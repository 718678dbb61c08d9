#pragma once
// qgslink/linkgeom.hpp - satellite/ground viewing geometry and the clear-sky
// transmission model. Covers the ground footprint seen from orbit, the
// receiver solid angle, slant range over a spherical Earth, and the closed
// form that turns a roof-level ground-looking photon rate into the rate at
// the satellite receiver.

#include "qgslink/units.hpp"

namespace qgslink {

inline constexpr double kEarthRadiusM = 6371e3;

// Zenith extinction exponent of the transmission model 10^(-k * csc(el)).
// Site-dependent in reality; overridable wherever it enters.
inline constexpr double kDefaultExtinctionCoeff = 0.32;

/// Satellite/receiver geometry at a single elevation angle.
struct LinkGeometry {
    double elevation_deg;     // angle above horizon, (0, 90]
    double distance_m;        // slant distance
    double fov_half_angle_rad;
    double r_receiver_m;      // receiver aperture radius

    LinkGeometry(double elevation, double distance, double fov_half_angle, double r_receiver)
        : elevation_deg(elevation), distance_m(distance),
          fov_half_angle_rad(fov_half_angle), r_receiver_m(r_receiver) {
        if (!(elevation_deg > 0.0 && elevation_deg <= 90.0)) {
            throw std::invalid_argument("LinkGeometry: elevation_deg must be in (0, 90]");
        }
        if (!(distance_m > 0.0) || !(fov_half_angle_rad > 0.0) || !(r_receiver_m > 0.0)) {
            throw std::invalid_argument("LinkGeometry: distances and angles must be > 0");
        }
    }
};

/// Ground-looking fibre probe: core radius and acceptance half-angle.
struct FiberProbe {
    double core_radius_m;
    double half_angle_rad;

    FiberProbe(double core_radius, double half_angle)
        : core_radius_m(core_radius), half_angle_rad(half_angle) {
        if (!(core_radius_m > 0.0) || !(half_angle_rad > 0.0)) {
            throw std::invalid_argument("FiberProbe: core radius and half-angle must be > 0");
        }
    }

    /// NA-specified fibre in air: half-angle = arcsin(NA).
    static FiberProbe from_numerical_aperture(double core_radius_m, double na) {
        if (!(na > 0.0 && na < 1.0)) {
            throw std::invalid_argument("FiberProbe: numerical aperture must be in (0, 1)");
        }
        return FiberProbe(core_radius_m, std::asin(na));
    }
};

/// Clear-sky transmission 10^(-k * csc(elevation)). Out-of-range elevations
/// throw std::out_of_range: the model is invalid at and below the horizon.
double atmospheric_transmission(double elevation_deg,
                                double extinction_coeff = kDefaultExtinctionCoeff);

/// Ground area seen by the satellite receiver: pi * (tan(phi) * D)^2 * csc(el).
double footprint_area(const LinkGeometry& geom);

/// Receiver solid angle as seen from the ground: pi * (r / D)^2.
double detector_solid_angle(double r_receiver_m, double distance_m);

/// Rate at the satellite receiver given the rate a ground-looking probe
/// measured at roof level (short path, transmission ~ 1):
///   N_sat(el) = 10^(-k csc el) * tan^2(phi) * csc(el) * r_sat^2 * N_r / (alpha r_f)^2
/// The roof rate's relative uncertainty is carried through unchanged.
PhotonRate uplink_background_rate(const PhotonRate& roof_rate, const FiberProbe& probe,
                                  const LinkGeometry& geom,
                                  double extinction_coeff = kDefaultExtinctionCoeff);

/// Spherical-Earth slant range for a circular orbit of the given altitude:
///   D = sqrt(R^2 sin^2(el) + 2 R h + h^2) - R sin(el).
double slant_distance(double orbit_altitude_m, double elevation_deg);

} // namespace qgslink
