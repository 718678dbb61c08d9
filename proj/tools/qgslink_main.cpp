// qgslink - command-line surface for the link-budget library.
//
// Subcommands:
//   convert    one-off unit conversions (transmission, radiance <-> rate)
//   uplink     background photon rate reaching the satellite vs elevation
//   downlink   sky-survey normalisation, profiles, and downlink QBER curves
//   report     full site report over every configured scenario
//
// Exit status: 0 success, 1 computation/data error, 2 usage/config error.

#include "qgslink/config.hpp"
#include "qgslink/csv.hpp"
#include "qgslink/linkgeom.hpp"
#include "qgslink/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace {

using namespace qgslink;

struct ConvertArgs {
    std::optional<double> e_atm_elevation_deg;
    std::optional<double> radiance_nw_cm2_sr;
    std::optional<double> rate_hz;
    std::string band_text;
    double area_m2 = 0.0;
    double solid_angle_sr = 0.0;
    double fov_half_angle_rad = 0.0;
    double r_detector_m = 0.0;
    double transmission = 1.0;
    double extinction_coeff = kDefaultExtinctionCoeff;
    double uncertainty = 0.0;
};

SpectralBand band_from_text(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("--band must be 'center_nm:fwhm_nm', got '" + text + "'");
    }
    return SpectralBand(parse_double(text.substr(0, colon), "--band center"),
                        parse_double(text.substr(colon + 1), "--band fwhm"));
}

int run_convert(const ConvertArgs& args) {
    const int modes = (args.e_atm_elevation_deg ? 1 : 0) + (args.radiance_nw_cm2_sr ? 1 : 0) +
                      (args.rate_hz ? 1 : 0);
    if (modes != 1) {
        throw ConfigError("convert: give exactly one of --e-atm, --radiance, --rate");
    }

    if (args.e_atm_elevation_deg) {
        const double t = atmospheric_transmission(*args.e_atm_elevation_deg, args.extinction_coeff);
        std::printf("%.5f\n", t);
        return 0;
    }

    if (args.radiance_nw_cm2_sr) {
        const Radiance radiance(*args.radiance_nw_cm2_sr, band_from_text(args.band_text),
                                args.uncertainty);
        const PhotonRate rate =
            radiance_to_rate(radiance, args.area_m2, args.solid_angle_sr, args.transmission);
        std::printf("%s Hz  rel_uncertainty %s\n", format_double(rate.hz).c_str(),
                    format_double(rate.rel_uncertainty).c_str());
        return 0;
    }

    const PhotonRate rate(*args.rate_hz, args.uncertainty);
    const Radiance radiance = rate_to_radiance(rate, band_from_text(args.band_text),
                                               args.fov_half_angle_rad, args.r_detector_m,
                                               args.transmission);
    std::printf("%s nW/cm2/sr  rel_uncertainty %s\n", format_double(radiance.nw_cm2_sr).c_str(),
                format_double(radiance.rel_uncertainty).c_str());
    return 0;
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out_dir + "': " + ec.message());
}

std::string out_path(const std::string& out_dir, const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
}

int run_uplink(const std::string& config_path, const std::string& viirs_path,
               const std::string& roof_path, const std::string& out_dir,
               const std::string& grid_text) {
    const SiteConfig site = load_site_config(config_path);
    const auto pixels = load_viirs_pixels(viirs_path);
    std::vector<SkySample> roof;
    if (!roof_path.empty()) roof = load_sky_survey(roof_path);
    const ElevationGrid grid = ElevationGrid::parse(grid_text);
    ensure_out_dir(out_dir);

    bool any = false;
    for (const auto& scenario : site.scenarios) {
        if (scenario.direction != LinkDirection::kUplink) continue;
        any = true;
        const UplinkResult result = qgslink::run_uplink(site, scenario, pixels, roof, grid);
        const std::string path = out_path(out_dir, "uplink_" + scenario.name + ".csv");
        write_text_file(path, uplink_series_csv(result));
        write_text_file(out_path(out_dir, "qber_uplink_" + scenario.name + ".csv"),
                        qber_curve_csv(result.curve));

        std::printf("uplink scenario %s (band %s nm, viirs pixel %s)\n", scenario.name.c_str(),
                    format_double(scenario.source.band.center_nm).c_str(),
                    result.viirs_date.c_str());
        std::printf("  band radiance %s nW/cm2/sr, composed rel uncertainty %s\n",
                    format_double(result.band_radiance_nw_cm2_sr).c_str(),
                    format_double(result.band_radiance_rel_uncertainty).c_str());
        std::printf("  zenith prediction %s Hz (viirs method)\n",
                    format_double(result.viirs_series.back().hz).c_str());
        if (result.roof_mean_hz) {
            std::printf("  zenith prediction %s Hz (roof method, mean %s Hz on the roof)\n",
                        format_double(result.roof_series.back().hz).c_str(),
                        format_double(*result.roof_mean_hz).c_str());
        }
        std::printf("  wrote %s\n", path.c_str());
    }
    if (!any) throw ConfigError(config_path + ": no uplink scenario configured");
    return 0;
}

int run_downlink(const std::string& config_path, const std::string& survey_path,
                 const std::string& out_dir) {
    const SiteConfig site = load_site_config(config_path);
    const auto survey = load_sky_survey(survey_path);
    ensure_out_dir(out_dir);

    bool any = false;
    for (const auto& scenario : site.scenarios) {
        if (scenario.direction != LinkDirection::kDownlink) continue;
        any = true;
        const auto results = qgslink::run_downlink(site, scenario, survey);
        for (const auto& result : results) {
            const std::string suffix = scenario.name + "_" + to_string(result.moon_label);
            write_text_file(out_path(out_dir, "sky_map_" + suffix + ".csv"),
                            sky_map_csv(result.sky_map));
            write_text_file(out_path(out_dir, "elevation_profile_" + suffix + ".csv"),
                            elevation_profile_csv(result.profile));
            write_text_file(out_path(out_dir, "qber_downlink_" + suffix + ".csv"),
                            qber_curve_csv(result.curve));

            double max_qber = 0.0;
            for (const auto& p : result.curve) max_qber = std::max(max_qber, p.qber);
            std::printf("downlink scenario %s [%s]: %zu sky samples, max qber %s\n",
                        scenario.name.c_str(), to_string(result.moon_label).c_str(),
                        result.sky_map.size(), format_double(max_qber).c_str());
            for (const auto& entry : result.verdict.entries) {
                if (entry.min_secure_elevation_deg) {
                    std::printf("  %s (qber < %s): secure above %s deg\n", entry.name.c_str(),
                                format_double(entry.threshold).c_str(),
                                format_double(*entry.min_secure_elevation_deg).c_str());
                } else {
                    std::printf("  %s (qber < %s): never secure\n", entry.name.c_str(),
                                format_double(entry.threshold).c_str());
                }
            }
        }
    }
    if (!any) throw ConfigError(config_path + ": no downlink scenario configured");
    return 0;
}

int run_report(const std::string& config_path, const std::string& viirs_path,
               const std::string& survey_path, const std::string& roof_path,
               const std::string& out_dir, const std::string& grid_text) {
    const SiteConfig site = load_site_config(config_path);
    const ElevationGrid grid = ElevationGrid::parse(grid_text);
    ensure_out_dir(out_dir);

    std::vector<InputFile> inputs;
    inputs.push_back({"config", config_path, fnv1a64_file(config_path)});

    std::vector<ViirsPixel> pixels;
    if (!viirs_path.empty()) {
        pixels = load_viirs_pixels(viirs_path);
        inputs.push_back({"viirs", viirs_path, fnv1a64_file(viirs_path)});
    }
    std::vector<SkySample> survey;
    if (!survey_path.empty()) {
        survey = load_sky_survey(survey_path);
        inputs.push_back({"survey", survey_path, fnv1a64_file(survey_path)});
    }
    std::vector<SkySample> roof;
    if (!roof_path.empty()) {
        roof = load_sky_survey(roof_path);
        inputs.push_back({"roof", roof_path, fnv1a64_file(roof_path)});
    }

    std::vector<UplinkResult> uplinks;
    std::vector<DownlinkResult> downlinks;
    std::vector<SkippedScenario> skipped;
    for (const auto& scenario : site.scenarios) {
        if (scenario.direction == LinkDirection::kUplink) {
            if (pixels.empty()) {
                skipped.push_back({scenario.name, "uplink", "no --viirs input provided"});
                std::fprintf(stderr, "warning: scenario %s not assessed (no --viirs input)\n",
                             scenario.name.c_str());
                continue;
            }
            uplinks.push_back(qgslink::run_uplink(site, scenario, pixels, roof, grid));
        } else {
            if (survey.empty()) {
                skipped.push_back({scenario.name, "downlink", "no --survey input provided"});
                std::fprintf(stderr, "warning: scenario %s not assessed (no --survey input)\n",
                             scenario.name.c_str());
                continue;
            }
            for (auto& result : qgslink::run_downlink(site, scenario, survey)) {
                downlinks.push_back(std::move(result));
            }
        }
    }
    if (uplinks.empty() && downlinks.empty()) {
        throw std::runtime_error("no scenario could be assessed with the inputs provided");
    }

    const SiteReport report = build_report(site, inputs, uplinks, downlinks, skipped);
    write_text_file(out_path(out_dir, "report.json"), report.json_text);
    write_text_file(out_path(out_dir, "report.txt"), report.summary_text);
    std::fputs(report.summary_text.c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"satellite-ground quantum link background and QBER estimation"};
    app.require_subcommand(1);

    ConvertArgs convert_args;
    auto* convert = app.add_subcommand("convert", "unit conversions");
    convert->add_option("--e-atm", convert_args.e_atm_elevation_deg,
                        "print atmospheric transmission at this elevation (deg)");
    convert->add_option("--extinction-coeff", convert_args.extinction_coeff,
                        "zenith extinction exponent")->capture_default_str();
    auto* opt_radiance = convert->add_option("--radiance", convert_args.radiance_nw_cm2_sr,
                                             "radiance to convert (nW/cm2/sr)");
    auto* opt_rate = convert->add_option("--rate", convert_args.rate_hz, "photon rate to convert (Hz)");
    auto* opt_band = convert->add_option("--band", convert_args.band_text, "band as center_nm:fwhm_nm");
    auto* opt_area = convert->add_option("--area", convert_args.area_m2, "emitting area (m2)");
    auto* opt_solid = convert->add_option("--solid-angle", convert_args.solid_angle_sr,
                                          "detector solid angle (sr)");
    auto* opt_fov = convert->add_option("--fov", convert_args.fov_half_angle_rad,
                                        "probe acceptance half-angle (rad)");
    auto* opt_radius = convert->add_option("--radius", convert_args.r_detector_m,
                                           "probe aperture radius (m)");
    convert->add_option("--transmission", convert_args.transmission,
                        "atmospheric transmission fraction")->capture_default_str();
    convert->add_option("--uncertainty", convert_args.uncertainty,
                        "relative uncertainty of the input value")->capture_default_str();
    opt_radiance->needs(opt_band)->needs(opt_area)->needs(opt_solid);
    opt_rate->needs(opt_band)->needs(opt_fov)->needs(opt_radius);

    std::string config_path, viirs_path, survey_path, roof_path, out_dir;
    std::string grid_text = "10:90:1";

    auto* uplink = app.add_subcommand("uplink", "uplink background prediction");
    uplink->add_option("--config", config_path, "site config file")->required();
    uplink->add_option("--viirs", viirs_path, "nighttime-radiance pixel CSV")->required();
    uplink->add_option("--roof", roof_path, "roof-level ground survey CSV");
    uplink->add_option("--out", out_dir, "output directory")->required();
    uplink->add_option("--grid", grid_text, "elevation grid LO:HI:STEP")->capture_default_str();

    auto* downlink = app.add_subcommand("downlink", "downlink survey processing and QBER");
    downlink->add_option("--config", config_path, "site config file")->required();
    downlink->add_option("--survey", survey_path, "sky-survey CSV")->required();
    downlink->add_option("--out", out_dir, "output directory")->required();

    auto* report = app.add_subcommand("report", "full site report");
    report->add_option("--config", config_path, "site config file")->required();
    report->add_option("--viirs", viirs_path, "nighttime-radiance pixel CSV");
    report->add_option("--survey", survey_path, "sky-survey CSV");
    report->add_option("--roof", roof_path, "roof-level ground survey CSV");
    report->add_option("--out", out_dir, "output directory")->required();
    report->add_option("--grid", grid_text, "elevation grid LO:HI:STEP")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    try {
        if (convert->parsed()) return run_convert(convert_args);
        if (uplink->parsed()) return run_uplink(config_path, viirs_path, roof_path, out_dir, grid_text);
        if (downlink->parsed()) return run_downlink(config_path, survey_path, out_dir);
        if (report->parsed())
            return run_report(config_path, viirs_path, survey_path, roof_path, out_dir, grid_text);
    } catch (const qgslink::ConfigError& err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 2;
}
