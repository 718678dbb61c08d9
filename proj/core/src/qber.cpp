#include "qgslink/qber.hpp"

#include "qgslink/csv.hpp"
#include "qgslink/linkgeom.hpp"

#include <algorithm>
#include <cmath>

namespace qgslink {

std::string to_string(SourceKind kind) {
    switch (kind) {
        case SourceKind::kWeakCoherentPulse: return "weak_coherent_pulse";
        case SourceKind::kEntangledPair: return "entangled_pair";
        case SourceKind::kGeneric: return "generic";
    }
    return "generic";
}

SourceKind source_kind_from_string(const std::string& text) {
    if (text == "weak_coherent_pulse") return SourceKind::kWeakCoherentPulse;
    if (text == "entangled_pair") return SourceKind::kEntangledPair;
    if (text == "generic") return SourceKind::kGeneric;
    throw std::invalid_argument("unknown source kind '" + text + "'");
}

LossModel LossModel::from_table(std::vector<TablePoint> points) {
    if (points.empty()) throw std::invalid_argument("LossModel: empty loss table");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].loss_db >= 0.0)) {
            throw std::invalid_argument("LossModel: losses must be >= 0 dB");
        }
        if (i > 0 && !(points[i].elevation_deg > points[i - 1].elevation_deg)) {
            throw std::invalid_argument("LossModel: table elevations must be strictly increasing");
        }
    }
    LossModel model;
    model.table_ = std::move(points);
    return model;
}

LossModel LossModel::parametric(double zenith_loss_db, bool with_atmosphere,
                                bool with_geometric, double orbit_altitude_m,
                                double extinction_coeff) {
    if (!(zenith_loss_db >= 0.0)) {
        throw std::invalid_argument("LossModel: zenith loss must be >= 0 dB");
    }
    if (with_geometric && !(orbit_altitude_m > 0.0)) {
        throw std::invalid_argument("LossModel: geometric scaling needs an orbit altitude");
    }
    LossModel model;
    model.zenith_loss_db_ = zenith_loss_db;
    model.with_atmosphere_ = with_atmosphere;
    model.with_geometric_ = with_geometric;
    model.orbit_altitude_m_ = orbit_altitude_m;
    model.extinction_coeff_ = extinction_coeff;
    return model;
}

double LossModel::loss_db(double elevation_deg) const {
    if (!table_.empty()) {
        if (elevation_deg < table_.front().elevation_deg ||
            elevation_deg > table_.back().elevation_deg) {
            throw std::out_of_range("LossModel: elevation " + format_double(elevation_deg) +
                                    " deg outside table range [" +
                                    format_double(table_.front().elevation_deg) + ", " +
                                    format_double(table_.back().elevation_deg) + "]");
        }
        auto upper = std::lower_bound(table_.begin(), table_.end(), elevation_deg,
                                      [](const TablePoint& p, double e) { return p.elevation_deg < e; });
        if (upper->elevation_deg == elevation_deg) return upper->loss_db;
        auto lower = upper - 1;
        const double t = (elevation_deg - lower->elevation_deg) /
                         (upper->elevation_deg - lower->elevation_deg);
        return lower->loss_db + t * (upper->loss_db - lower->loss_db);
    }
    double loss = zenith_loss_db_;
    if (with_atmosphere_) {
        // extra extinction relative to zenith, in dB
        const double csc = 1.0 / std::sin(elevation_deg * M_PI / 180.0);
        if (!(elevation_deg > 0.0 && elevation_deg <= 90.0)) {
            throw std::out_of_range("LossModel: elevation must be in (0, 90]");
        }
        loss += 10.0 * extinction_coeff_ * (csc - 1.0);
    }
    if (with_geometric_) {
        const double d = slant_distance(orbit_altitude_m_, elevation_deg);
        const double d_zenith = orbit_altitude_m_;
        loss += 20.0 * std::log10(d / d_zenith);
    }
    return loss;
}

LossModel load_loss_table(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto c_el = table.col("elevation_deg");
    const auto c_loss = table.col("loss_db");
    std::vector<LossModel::TablePoint> points;
    points.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        points.push_back({parse_double(row[c_el], path + " elevation_deg"),
                          parse_double(row[c_loss], path + " loss_db")});
    }
    return LossModel::from_table(std::move(points));
}

PhotonRate signal_rate(const SourceSpec& source, const LossModel& loss, double elevation_deg) {
    if (!(elevation_deg > 0.0 && elevation_deg <= 90.0)) {
        throw std::out_of_range("signal_rate: elevation must be in (0, 90]");
    }
    const double db = loss.loss_db(elevation_deg);
    return PhotonRate(source.pulse_rate_hz * std::pow(10.0, -db / 10.0));
}

PhotonRate effective_background(const PhotonRate& background, const SourceSpec& source,
                                double coincidence_window_s) {
    if (!(coincidence_window_s > 0.0)) {
        throw std::invalid_argument("effective_background: window must be > 0");
    }
    const double duty = coincidence_window_s * source.pulse_rate_hz;
    if (duty > 1.0 + 1e-12) {
        throw std::invalid_argument("effective_background: windows overlap (window * pulse rate > 1)");
    }
    return PhotonRate(background.hz * std::min(duty, 1.0), background.rel_uncertainty);
}

double qber(double signal_hz, double effective_background_hz, double intrinsic_error) {
    if (!(signal_hz >= 0.0) || !(effective_background_hz >= 0.0)) {
        throw std::invalid_argument("qber: rates must be >= 0");
    }
    if (!(intrinsic_error >= 0.0 && intrinsic_error <= 0.5)) {
        throw std::invalid_argument("qber: intrinsic_error must be in [0, 0.5]");
    }
    const double total = signal_hz + effective_background_hz;
    if (total == 0.0) {
        throw std::domain_error("qber: undefined for zero signal and zero background");
    }
    return (intrinsic_error * signal_hz + 0.5 * effective_background_hz) / total;
}

namespace {

QberPoint evaluate_point(const SourceSpec& source, const LossModel& loss, double elevation_deg,
                         const PhotonRate& background, double window_s) {
    QberPoint point;
    point.elevation_deg = elevation_deg;
    point.signal_hz = signal_rate(source, loss, elevation_deg).hz;
    point.background_hz = background.hz;
    const PhotonRate effective = effective_background(background, source, window_s);
    point.effective_background_hz = effective.hz;
    point.qber = qber(point.signal_hz, effective.hz, source.intrinsic_error);
    // Interval evaluation: the survey/VIIRS uncertainties are far outside the
    // linear regime of the QBER formula.
    const double u = background.rel_uncertainty;
    const double lo_bg = effective.hz * std::max(0.0, 1.0 - u);
    const double hi_bg = effective.hz * (1.0 + u);
    point.qber_lo = qber(point.signal_hz, lo_bg, source.intrinsic_error);
    point.qber_hi = qber(point.signal_hz, hi_bg, source.intrinsic_error);
    return point;
}

} // namespace

std::vector<QberPoint> qber_curve(const SourceSpec& source, const LossModel& loss,
                                  const BackgroundFn& background,
                                  std::span<const double> elevations_deg,
                                  double coincidence_window_s) {
    std::vector<QberPoint> curve;
    curve.reserve(elevations_deg.size());
    for (double elevation : elevations_deg) {
        curve.push_back(evaluate_point(source, loss, elevation, background(elevation),
                                       coincidence_window_s));
    }
    return curve;
}

std::vector<QberPoint> qber_curve(const SourceSpec& source, const LossModel& loss,
                                  const ElevationProfile& background,
                                  double coincidence_window_s) {
    std::vector<QberPoint> curve;
    curve.reserve(background.rows.size());
    for (const auto& row : background.rows) {
        const double rel = row.mean_rate_hz > 0.0 ? row.std_rate_hz / row.mean_rate_hz : 0.0;
        curve.push_back(evaluate_point(source, loss, row.elevation_deg,
                                       PhotonRate(row.mean_rate_hz, rel), coincidence_window_s));
    }
    return curve;
}

const ViabilityVerdict::Entry& ViabilityVerdict::find(const std::string& name) const {
    for (const auto& entry : entries) {
        if (entry.name == name) return entry;
    }
    throw std::invalid_argument("ViabilityVerdict: no entry named '" + name + "'");
}

ViabilityVerdict verdict(std::span<const QberPoint> curve, const Thresholds& thresholds) {
    if (curve.empty()) throw std::invalid_argument("verdict: empty curve");

    std::vector<QberPoint> sorted(curve.begin(), curve.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const QberPoint& a, const QberPoint& b) { return a.elevation_deg < b.elevation_deg; });

    auto min_secure = [&sorted](double threshold) -> std::optional<double> {
        std::optional<double> result;
        for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
            if (it->qber < threshold) {
                result = it->elevation_deg;
            } else {
                break;
            }
        }
        return result;
    };

    ViabilityVerdict v;
    v.entries.push_back({"theoretical", thresholds.theoretical, min_secure(thresholds.theoretical)});
    v.entries.push_back({"practical", thresholds.practical, min_secure(thresholds.practical)});
    v.entries.push_back({"reference", thresholds.reference, min_secure(thresholds.reference)});
    return v;
}

} // namespace qgslink
