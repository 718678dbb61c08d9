// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Invoked as: acceptance <path-to-qgslink> <fixtures-dir>

#include "qgslink/config.hpp"
#include "qgslink/csv.hpp"
#include "qgslink/linkgeom.hpp"
#include "qgslink/qber.hpp"
#include "qgslink/report.hpp"
#include "qgslink/skysurvey.hpp"
#include "qgslink/units.hpp"
#include "qgslink/viirs.hpp"

#include "support/mc_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace qgslink;

namespace {

int g_failed = 0;

void report_criterion(int number, bool pass, const std::string& description,
                      const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", number,
                description.c_str(), detail.c_str());
    if (!pass) ++g_failed;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_command(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string fixtures_dir;
std::string cli_path;

// --- criterion 1: transmission model anchor values -------------------------

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const double zenith = atmospheric_transmission(90.0);
    const double low = atmospheric_transmission(30.0);
    const double elapsed = seconds_since(start);
    const bool pass = std::abs(zenith - 0.47863) < 1e-4 && std::abs(low - 0.22909) < 1e-4 &&
                      elapsed < 1.0;
    std::ostringstream detail;
    detail << "e_atm(90)=" << zenith << ", e_atm(30)=" << low << ", " << elapsed << " s";
    report_criterion(1, pass, "transmission anchor values at 1e-4", detail.str());
}

// --- criterion 2: closed form vs chained conversion ------------------------

void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(22021);
    std::uniform_real_distribution<double> elevation(0.5, 90.0);
    std::uniform_real_distribution<double> log_phi(-6.0, -2.3);
    std::uniform_real_distribution<double> r_sat(0.01, 1.0);
    std::uniform_real_distribution<double> log_rf(-6.0, -3.0);
    std::uniform_real_distribution<double> alpha(0.01, 1.0);
    std::uniform_real_distribution<double> log_rate(-3.0, 6.0);
    std::uniform_real_distribution<double> distance(300e3, 3000e3);
    const SpectralBand band(780, 10);

    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const FiberProbe probe(std::pow(10.0, log_rf(rng)), alpha(rng));
        const LinkGeometry geom(elevation(rng), distance(rng), std::pow(10.0, log_phi(rng)),
                                r_sat(rng));
        const PhotonRate roof(std::pow(10.0, log_rate(rng)));
        const double direct = uplink_background_rate(roof, probe, geom).hz;
        const Radiance ground =
            rate_to_radiance(roof, band, probe.half_angle_rad, probe.core_radius_m, 1.0);
        const double chained =
            radiance_to_rate(ground, footprint_area(geom),
                             detector_solid_angle(geom.r_receiver_m, geom.distance_m),
                             atmospheric_transmission(geom.elevation_deg))
                .hz;
        worst = std::max(worst, std::abs(chained / direct - 1.0));
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst < 1e-6 && elapsed < 5.0;
    std::ostringstream detail;
    detail << "worst relative deviation " << worst << " over 10000 inputs, " << elapsed << " s";
    report_criterion(2, pass, "closed-form equals chained conversion at 1e-6", detail.str());
}

// --- criteria 3/4: uplink fixture anchors ----------------------------------

UplinkResult uplink_for(const std::string& config_name, bool with_roof) {
    const SiteConfig site = load_site_config(fixtures_dir + "/" + config_name);
    const auto pixels = load_viirs_pixels(fixtures_dir + "/viirs_pixels.csv");
    std::vector<SkySample> roof;
    if (with_roof) roof = load_sky_survey(fixtures_dir + "/roof_uw.csv");
    for (const auto& scenario : site.scenarios) {
        if (scenario.direction == LinkDirection::kUplink) {
            return run_uplink(site, scenario, pixels, roof, ElevationGrid{});
        }
    }
    throw std::runtime_error(config_name + ": no uplink scenario");
}

void criterion_3() {
    const UplinkResult result = uplink_for("waterloo.cfg", true);
    const double zenith = result.viirs_series.back().hz;
    bool roof_in_band = !result.roof_series.empty();
    double worst_ratio = 1.0;
    for (std::size_t i = 0; i < result.roof_series.size(); ++i) {
        const double viirs = result.viirs_series[i].hz;
        const double roof = result.roof_series[i].hz;
        roof_in_band = roof_in_band && roof >= 0.60 * viirs && roof <= 1.40 * viirs;
        worst_ratio = std::max(worst_ratio, std::max(roof / viirs, viirs / roof));
    }
    const bool pass = zenith >= 1e3 && zenith <= 4e3 && roof_in_band;
    std::ostringstream detail;
    detail << "zenith " << zenith << " Hz, roof/viirs ratio up to " << worst_ratio;
    report_criterion(3, pass, "urban uplink fixture near 2e3 Hz with roof agreement",
                     detail.str());
}

void criterion_4() {
    const UplinkResult result = uplink_for("rao.cfg", false);
    const double zenith = result.viirs_series.back().hz;
    const bool pass = zenith >= 3e1 && zenith <= 6e2;
    std::ostringstream detail;
    detail << "zenith " << zenith << " Hz";
    report_criterion(4, pass, "rural uplink fixture at hundreds of Hz", detail.str());
}

// --- criterion 5: downlink benchmark and the Monte-Carlo oracle ------------

void criterion_5() {
    const auto start = std::chrono::steady_clock::now();
    const SourceSpec source(SourceKind::kWeakCoherentPulse, SpectralBand(850, 10), 1e8);
    const double effective = effective_background(PhotonRate(1e3), source, 1e-9).hz;
    const double analytic = qber(1e4, effective, 0.0);

    const auto mc = qgslink_test::mc_qber(1e4, 1e3, 1e8, 1e-9, 0.0, 100'000'000, 20230207);
    const double elapsed = seconds_since(start);

    const bool formula_ok = analytic <= 0.02 && std::abs(analytic - 0.00495) <= 1e-4;
    const bool mc_ok = mc.detections > 0 && std::abs(mc.qber - analytic) <= 3.0 * mc.std_error &&
                       mc.std_error < 1.5e-3;
    const bool pass = formula_ok && mc_ok && elapsed < 60.0;
    std::ostringstream detail;
    detail << "analytic " << analytic << ", mc " << mc.qber << " +- " << mc.std_error << " ("
           << mc.detections << " detections over 1e8 windows), " << elapsed << " s";
    report_criterion(5, pass, "downlink benchmark at 0.495% with Monte-Carlo agreement (3 sigma)",
                     detail.str());
}

// --- criterion 6: verdict windows and nesting ------------------------------

void criterion_6() {
    const double waterloo =
        uplink_for("waterloo.cfg", false).verdict.find("theoretical").min_secure_elevation_deg.value_or(-1);
    const double calgary =
        uplink_for("calgary.cfg", false).verdict.find("theoretical").min_secure_elevation_deg.value_or(-1);
    const double rao =
        uplink_for("rao.cfg", false).verdict.find("theoretical").min_secure_elevation_deg.value_or(-1);

    bool nesting = true;
    std::mt19937 rng(66);
    std::uniform_real_distribution<double> q(0.0, 0.5);
    std::uniform_int_distribution<int> length(1, 30);
    for (int round = 0; round < 1000 && nesting; ++round) {
        std::vector<QberPoint> curve;
        const int n = length(rng);
        for (int i = 0; i < n; ++i) {
            QberPoint p;
            p.elevation_deg = 10.0 + i;
            p.qber = q(rng);
            curve.push_back(p);
        }
        const ViabilityVerdict v = verdict(curve);
        const auto loose = v.find("theoretical").min_secure_elevation_deg;
        const auto mid = v.find("practical").min_secure_elevation_deg;
        const auto tight = v.find("reference").min_secure_elevation_deg;
        if (tight && (!mid || *mid > *tight)) nesting = false;
        if (mid && (!loose || *loose > *mid)) nesting = false;
    }

    const bool pass = waterloo >= 35.0 && waterloo <= 50.0 && calgary >= 35.0 &&
                      calgary <= 50.0 && rao >= 10.0 && rao <= 25.0 && nesting;
    std::ostringstream detail;
    detail << "11% cutoffs: waterloo " << waterloo << " deg, calgary " << calgary << " deg, rao "
           << rao << " deg; nesting " << (nesting ? "holds" : "violated");
    report_criterion(6, pass, "urban cutoffs near 40 deg, rural near 10 deg, thresholds nest",
                     detail.str());
}

// --- criterion 7: randomized property suites -------------------------------

void criterion_7() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(77077);
    bool pass = true;
    std::string failure;

    // units-radiometry: rate -> radiance -> rate roundtrip at 1e-10
    {
        std::uniform_real_distribution<double> log_rate(-2.0, 6.0);
        std::uniform_real_distribution<double> phi(1e-5, 0.5);
        std::uniform_real_distribution<double> radius(1e-6, 0.5);
        std::uniform_real_distribution<double> transmission(0.05, 1.0);
        const SpectralBand band(780, 10);
        for (int i = 0; i < 10000 && pass; ++i) {
            const double fov = phi(rng), r = radius(rng), e = transmission(rng);
            const PhotonRate original(std::pow(10.0, log_rate(rng)));
            const Radiance l = rate_to_radiance(original, band, fov, r, e);
            const double throughput = M_PI * fov * r;
            const double back = radiance_to_rate(l, throughput, throughput, e).hz;
            if (std::abs(back / original.hz - 1.0) > 1e-10) {
                pass = false;
                failure = "units roundtrip";
            }
        }
    }

    // units-radiometry: collection rate is linear in each factor
    {
        std::uniform_real_distribution<double> value(0.1, 100.0);
        std::uniform_real_distribution<double> scale(0.1, 10.0);
        const SpectralBand band(780, 10);
        for (int i = 0; i < 10000 && pass; ++i) {
            const double l = value(rng), a = value(rng), o = value(rng) * 1e-10;
            const double k = scale(rng);
            const double base = radiance_to_rate(Radiance(l, band), a, o, 0.5).hz;
            const double scaled = radiance_to_rate(Radiance(l * k, band), a, o, 0.5).hz;
            if (std::abs(scaled / (base * k) - 1.0) > 1e-12) {
                pass = false;
                failure = "units linearity";
            }
        }
    }

    // viirs-scaling: the three scalings commute
    {
        std::uniform_real_distribution<double> value(0.01, 500.0);
        std::uniform_real_distribution<double> frac(0.05, 1.0);
        std::uniform_real_distribution<double> band_frac(0.003, 0.05);
        for (int i = 0; i < 10000 && pass; ++i) {
            const AreaFractions fractions(frac(rng), frac(rng));
            const SpectralScaleFactor factor(SpectralBand(780, 10), band_frac(rng), 0.002);
            const ViirsPixel pixel(Radiance(value(rng), kViirsDnbBand, 0.15), "s", "d");
            const double chain1 =
                band_scale(effective_footprint_radiance(illuminated_radiance(pixel, fractions),
                                                        fractions),
                           factor)
                    .nw_cm2_sr;
            const double chain2 = band_scale(pixel.radiance, factor).nw_cm2_sr /
                                  fractions.viirs_illuminated * fractions.receiver_illuminated;
            if (std::abs(chain1 / chain2 - 1.0) > 1e-12 && chain2 != 0.0) {
                pass = false;
                failure = "viirs order independence";
            }
        }
    }

    // skysurvey: aggregation invariant under sample order
    {
        std::uniform_int_distribution<std::uint64_t> counts(3000, 40000);
        for (int round = 0; round < 2500 && pass; ++round) {
            std::vector<SkySample> samples;
            for (double el : {30.0, 45.0, 60.0, 85.0}) {
                for (int i = 0; i < 8; ++i) {
                    SkySample s;
                    s.site_id = "prop";
                    s.azimuth_deg = i * 45.0;
                    s.elevation_deg = el;
                    s.band = SpectralBand(850, 10);
                    s.raw_counts = counts(rng);
                    s.integration_s = 30.0;
                    s.fov_half_angle_deg = 0.008;
                    samples.push_back(s);
                }
            }
            const ElevationProfile base = aggregate_by_elevation(samples);
            for (int shuffle = 0; shuffle < 4 && pass; ++shuffle) {
                std::shuffle(samples.begin(), samples.end(), rng);
                const ElevationProfile again = aggregate_by_elevation(samples);
                for (std::size_t i = 0; i < base.rows.size(); ++i) {
                    if (std::abs(again.rows[i].mean_rate_hz - base.rows[i].mean_rate_hz) >
                            1e-9 * base.rows[i].mean_rate_hz ||
                        again.rows[i].n_samples != base.rows[i].n_samples) {
                        pass = false;
                        failure = "aggregation invariance";
                    }
                }
            }
        }
    }

    const double elapsed = seconds_since(start);
    pass = pass && elapsed < 30.0;
    std::ostringstream detail;
    if (failure.empty()) {
        detail << "4 suites x >=1e4 cases, " << elapsed << " s";
    } else {
        detail << "failed: " << failure;
    }
    report_criterion(7, pass, "randomized property suites", detail.str());
}

// --- criterion 8: CLI determinism and exit statuses ------------------------

void criterion_8() {
    const auto tmp = std::filesystem::temp_directory_path() / "qgslink_acceptance";
    std::filesystem::remove_all(tmp);
    std::filesystem::create_directories(tmp);
    const std::string quiet = " > /dev/null 2>&1";

    const std::string report_cmd = cli_path + " report --config " + fixtures_dir +
                                   "/waterloo.cfg --viirs " + fixtures_dir +
                                   "/viirs_pixels.csv --survey " + fixtures_dir +
                                   "/survey_uw.csv --roof " + fixtures_dir + "/roof_uw.csv";
    const int run1 =
        run_command(report_cmd + " --out " + (tmp / "run1").string() + quiet);
    const int run2 =
        run_command(report_cmd + " --out " + (tmp / "run2").string() + quiet);
    const bool deterministic =
        run1 == 0 && run2 == 0 &&
        slurp(tmp / "run1" / "report.json") == slurp(tmp / "run2" / "report.json") &&
        slurp(tmp / "run1" / "report.txt") == slurp(tmp / "run2" / "report.txt") &&
        !slurp(tmp / "run1" / "report.json").empty();

    const int ok_status = run_command(cli_path + " convert --e-atm 90" + quiet);

    const auto empty_survey = tmp / "empty_survey.csv";
    {
        std::ofstream out(empty_survey);
        out << "site_id,timestamp_utc,azimuth_deg,elevation_deg,band_center_nm,band_fwhm_nm,"
               "raw_counts,integration_s,detector_efficiency,optics_efficiency,dark_rate_hz,"
               "moon_label,fov_half_angle_deg\n";
    }
    const int computation_status =
        run_command(cli_path + " downlink --config " + fixtures_dir + "/calgary.cfg --survey " +
                    empty_survey.string() + " --out " + (tmp / "dl").string() + quiet);

    const int usage_status = run_command(cli_path + " convert --radiance 1" + quiet);

    const bool pass =
        deterministic && ok_status == 0 && computation_status == 1 && usage_status == 2;
    std::ostringstream detail;
    detail << "identical outputs " << (deterministic ? "yes" : "no") << "; exits " << ok_status
           << "/" << computation_status << "/" << usage_status << " for ok/compute/usage";
    report_criterion(8, pass, "report determinism and exit-status contract", detail.str());
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: acceptance <qgslink-binary> <fixtures-dir>\n");
        return 2;
    }
    cli_path = argv[1];
    fixtures_dir = argv[2];

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();

    if (g_failed == 0) {
        std::printf("acceptance: all 8 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failed);
    return 1;
}
