// CLI contract test: exit statuses, convert output values, and output-file
// determinism. Invoked as: test_cli <path-to-qgslink> <fixtures-dir>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "[ok]" : "[FAILED]", what.c_str());
    if (!ok) ++g_failures;
}

struct RunResult {
    int exit_code = -1;
    std::string output;   // stdout + stderr
};

RunResult run(const std::string& command) {
    RunResult result;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (!pipe) return result;
    char buffer[4096];
    while (std::fgets(buffer, sizeof(buffer), pipe)) result.output += buffer;
    const int status = pclose(pipe);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

double first_token(const std::string& text) {
    std::istringstream in(text);
    double value = 0.0;
    in >> value;
    return value;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: test_cli <qgslink-binary> <fixtures-dir>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const std::string fixtures = argv[2];
    const auto tmp = std::filesystem::temp_directory_path() / "qgslink_cli_test";
    std::filesystem::remove_all(tmp);
    std::filesystem::create_directories(tmp);

    // conversions
    auto r = run(cli + " convert --e-atm 90");
    check(r.exit_code == 0, "convert --e-atm exits 0");
    check(std::abs(first_token(r.output) - 0.47863) < 1e-4, "transmission at zenith is 0.47863");
    r = run(cli + " convert --e-atm 30");
    check(std::abs(first_token(r.output) - 0.22909) < 1e-4, "transmission at 30 deg is 0.22909");

    r = run(cli + " convert --radiance 53.5 --band 780:10 --area 31409.64435683514"
                  " --solid-angle 1.622723478093901e-13 --transmission 0.4786300923226383");
    check(r.exit_code == 0, "convert --radiance exits 0");
    check(std::abs(first_token(r.output) / 5124826.784093445 - 1.0) < 1e-9,
          "radiance converts to the library rate");

    r = run(cli + " convert --rate 1000 --band 780:10 --fov 0.22181447049679442"
                  " --radius 52.5e-6");
    check(r.exit_code == 0, "convert --rate exits 0");
    check(std::abs(first_token(r.output) / 0.019027600650474357 - 1.0) < 1e-9,
          "rate converts to the library radiance");

    // usage errors: exit 2 and the message names the missing flag
    r = run(cli + " convert");
    check(r.exit_code == 2, "convert with no mode exits 2");
    r = run(cli + " convert --radiance 53.5");
    check(r.exit_code == 2, "convert --radiance without --band exits 2");
    check(r.output.find("--band") != std::string::npos, "usage error names --band");
    r = run(cli + " downlink --config " + fixtures + "/calgary.cfg");
    check(r.exit_code == 2, "downlink without --survey exits 2");
    r = run(cli + " report --config " + fixtures + "/no_such.cfg --out " + (tmp / "x").string());
    check(r.exit_code == 2, "missing config file exits 2");
    r = run(cli + " frobnicate");
    check(r.exit_code == 2, "unknown subcommand exits 2");

    // computation errors: exit 1
    const auto empty_survey = tmp / "empty_survey.csv";
    {
        std::ofstream out(empty_survey);
        out << "site_id,timestamp_utc,azimuth_deg,elevation_deg,band_center_nm,band_fwhm_nm,"
               "raw_counts,integration_s,detector_efficiency,optics_efficiency,dark_rate_hz,"
               "moon_label,fov_half_angle_deg\n";
    }
    r = run(cli + " downlink --config " + fixtures + "/calgary.cfg --survey " +
            empty_survey.string() + " --out " + (tmp / "dl_empty").string());
    check(r.exit_code == 1, "empty survey exits 1");

    r = run(cli + " downlink --config " + fixtures + "/calgary.cfg --survey " + fixtures +
            "/survey_uw.csv --out " + (tmp / "dl_wrong").string());
    check(r.exit_code == 1, "survey for a different site exits 1");

    // uplink and downlink happy paths
    r = run(cli + " uplink --config " + fixtures + "/waterloo.cfg --viirs " + fixtures +
            "/viirs_pixels.csv --roof " + fixtures + "/roof_uw.csv --out " + (tmp / "up").string());
    check(r.exit_code == 0, "uplink exits 0");
    {
        const std::string series = slurp(tmp / "up" / "uplink_uplink_wcp_780.csv");
        std::size_t rows = 0;
        for (char c : series) rows += c == '\n';
        check(rows == 82, "uplink series has 81 grid rows plus a header");
        check(std::filesystem::exists(tmp / "up" / "qber_uplink_uplink_wcp_780.csv"),
              "uplink writes the qber curve export");
    }

    r = run(cli + " downlink --config " + fixtures + "/calgary.cfg --survey " + fixtures +
            "/survey_uc.csv --out " + (tmp / "dl").string());
    check(r.exit_code == 0, "downlink exits 0");
    check(std::filesystem::exists(tmp / "dl" / "sky_map_downlink_850_full.csv"),
          "downlink writes the sky map export");
    check(std::filesystem::exists(tmp / "dl" / "elevation_profile_downlink_850_new.csv"),
          "downlink writes the elevation profile");
    check(std::filesystem::exists(tmp / "dl" / "qber_downlink_downlink_850_full.csv"),
          "downlink writes the qber curve");

    // duplicated survey rows leave the aggregated outputs unchanged
    {
        const std::string original = slurp(fixtures + "/survey_uc.csv");
        std::istringstream in(original);
        std::string header, line;
        std::getline(in, header);
        std::ostringstream doubled;
        doubled << header << "\n";
        std::ostringstream body;
        body << in.rdbuf();
        doubled << body.str() << body.str();
        const auto dup_path = tmp / "survey_uc_doubled.csv";
        std::ofstream out(dup_path);
        out << doubled.str();
        out.close();
        r = run(cli + " downlink --config " + fixtures + "/calgary.cfg --survey " +
                dup_path.string() + " --out " + (tmp / "dl_dup").string());
        check(r.exit_code == 0, "duplicated survey processes cleanly");
        check(slurp(tmp / "dl_dup" / "elevation_profile_downlink_850_full.csv") ==
                  slurp(tmp / "dl" / "elevation_profile_downlink_850_full.csv"),
              "duplicated survey leaves the profile means unchanged");
    }

    // report: partial inputs are a warning, not an error
    r = run(cli + " report --config " + fixtures + "/waterloo.cfg --viirs " + fixtures +
            "/viirs_pixels.csv --out " + (tmp / "rep_partial").string());
    check(r.exit_code == 0, "report with only viirs input exits 0");
    check(r.output.find("not assessed") != std::string::npos,
          "report marks the downlink scenario as not assessed");

    // report determinism: byte-identical across runs
    const std::string report_cmd = cli + " report --config " + fixtures + "/waterloo.cfg" +
                                   " --viirs " + fixtures + "/viirs_pixels.csv" + " --survey " +
                                   fixtures + "/survey_uw.csv" + " --roof " + fixtures +
                                   "/roof_uw.csv";
    r = run(report_cmd + " --out " + (tmp / "rep1").string());
    check(r.exit_code == 0, "full report exits 0");
    r = run(report_cmd + " --out " + (tmp / "rep2").string());
    check(r.exit_code == 0, "second report run exits 0");
    check(slurp(tmp / "rep1" / "report.json") == slurp(tmp / "rep2" / "report.json"),
          "report.json is byte-identical across runs");
    check(slurp(tmp / "rep1" / "report.txt") == slurp(tmp / "rep2" / "report.txt"),
          "report.txt is byte-identical across runs");
    check(!slurp(tmp / "rep1" / "report.json").empty(), "report.json is non-empty");

    if (g_failures == 0) {
        std::printf("all cli contract checks passed\n");
        return 0;
    }
    std::printf("%d cli contract check(s) failed\n", g_failures);
    return 1;
}
