#pragma once
// qgslink/qber.hpp - quantum bit error rate versus elevation for a source /
// loss-model / background combination, plus viability verdicts against the
// usual secure-key thresholds.
//
// Background photons land in a random basis and contribute errors at weight
// 1/2; only arrivals inside the coincidence window around each pulse count.

#include "qgslink/linkgeom.hpp"
#include "qgslink/skysurvey.hpp"
#include "qgslink/units.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qgslink {

enum class SourceKind { kWeakCoherentPulse, kEntangledPair, kGeneric };

std::string to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& text);

/// Quantum source parameters for one link scenario.
struct SourceSpec {
    SourceKind kind = SourceKind::kGeneric;
    SpectralBand band{850.0, 10.0};
    double pulse_rate_hz = 0.0;
    double intrinsic_error = 0.0;   // [0, 0.5]

    SourceSpec(SourceKind k, SpectralBand b, double pulse_rate, double intrinsic = 0.0)
        : kind(k), band(b), pulse_rate_hz(pulse_rate), intrinsic_error(intrinsic) {
        if (!(pulse_rate_hz > 0.0)) {
            throw std::invalid_argument("SourceSpec: pulse_rate_hz must be > 0");
        }
        if (!(intrinsic_error >= 0.0 && intrinsic_error <= 0.5)) {
            throw std::invalid_argument("SourceSpec: intrinsic_error must be in [0, 0.5]");
        }
    }
};

/// Channel loss in dB versus elevation. Either an interpolated table or a
/// parametric composition of a zenith loss with the csc-elevation
/// transmission model and inverse-square slant-range scaling.
class LossModel {
public:
    struct TablePoint {
        double elevation_deg;
        double loss_db;
    };

    static LossModel from_table(std::vector<TablePoint> points);
    static LossModel parametric(double zenith_loss_db, bool with_atmosphere,
                                bool with_geometric, double orbit_altitude_m,
                                double extinction_coeff = kDefaultExtinctionCoeff);

    /// Loss at an elevation. Table mode interpolates linearly and refuses to
    /// extrapolate (std::out_of_range).
    double loss_db(double elevation_deg) const;

    bool is_table() const { return !table_.empty(); }
    const std::vector<TablePoint>& table() const { return table_; }

private:
    LossModel() = default;

    std::vector<TablePoint> table_;
    double zenith_loss_db_ = 0.0;
    bool with_atmosphere_ = false;
    bool with_geometric_ = false;
    double orbit_altitude_m_ = 0.0;
    double extinction_coeff_ = kDefaultExtinctionCoeff;
};

/// Loss-table CSV: elevation_deg,loss_db
LossModel load_loss_table(const std::string& path);

/// Detected signal rate: pulse_rate * 10^(-loss(elevation) / 10).
PhotonRate signal_rate(const SourceSpec& source, const LossModel& loss, double elevation_deg);

/// Background surviving the timing gates: rate * (window * pulse_rate).
/// Windows must not overlap (window * pulse_rate <= 1).
PhotonRate effective_background(const PhotonRate& background, const SourceSpec& source,
                                double coincidence_window_s);

/// QBER of a link with the given detected signal and in-window background:
///   (intrinsic * S + 0.5 * B) / (S + B).
/// Both rates zero is undefined (std::domain_error).
double qber(double signal_hz, double effective_background_hz, double intrinsic_error);

/// One evaluated point of a QBER curve. Bounds come from re-evaluating the
/// QBER at background * (1 -+ rel uncertainty).
struct QberPoint {
    double elevation_deg = 0.0;
    double signal_hz = 0.0;
    double background_hz = 0.0;            // raw in-band background
    double effective_background_hz = 0.0;  // inside timing windows
    double qber = 0.0;
    double qber_lo = 0.0;
    double qber_hi = 0.0;

    double rel_uncertainty() const {
        return qber > 0.0 ? (qber_hi - qber_lo) / (2.0 * qber) : 0.0;
    }
};

/// Background rate as a function of elevation angle.
using BackgroundFn = std::function<PhotonRate(double elevation_deg)>;

/// Evaluate the QBER curve on explicit elevations with a background function
/// (uplink predictions), or on a measured elevation profile (downlink).
std::vector<QberPoint> qber_curve(const SourceSpec& source, const LossModel& loss,
                                  const BackgroundFn& background,
                                  std::span<const double> elevations_deg,
                                  double coincidence_window_s);
std::vector<QberPoint> qber_curve(const SourceSpec& source, const LossModel& loss,
                                  const ElevationProfile& background,
                                  double coincidence_window_s);

/// Secure-key QBER thresholds checked by verdict().
struct Thresholds {
    double theoretical = 0.11;  // qubit BB84 proof limit
    double practical = 0.05;    // realistic system margin
    double reference = 0.02;    // demonstrated downlink benchmark
};

/// Minimum elevation above which the central QBER stays below each
/// threshold; empty optional means never.
struct ViabilityVerdict {
    struct Entry {
        std::string name;
        double threshold;
        std::optional<double> min_secure_elevation_deg;
    };
    std::vector<Entry> entries;

    const Entry& find(const std::string& name) const;
};

ViabilityVerdict verdict(std::span<const QberPoint> curve, const Thresholds& thresholds = {});

} // namespace qgslink
