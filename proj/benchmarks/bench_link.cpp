#include <benchmark/benchmark.h>

#include "qgslink/linkgeom.hpp"
#include "qgslink/qber.hpp"
#include "qgslink/skysurvey.hpp"
#include "qgslink/units.hpp"

#include <random>
#include <vector>

using namespace qgslink;

namespace {

LossModel make_loss() {
    std::vector<LossModel::TablePoint> points;
    for (int e = 10; e <= 90; ++e) {
        points.push_back({static_cast<double>(e), 46.0 + 3.2 * (90.0 - e) / 80.0});
    }
    return LossModel::from_table(std::move(points));
}

std::vector<SkySample> make_samples(std::size_t n) {
    std::mt19937 rng(42);
    std::uniform_int_distribution<std::uint64_t> counts(9000, 30000);
    std::vector<SkySample> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& s = samples[i];
        s.site_id = "bench";
        s.azimuth_deg = static_cast<double>((i * 45) % 360);
        s.elevation_deg = 30.0 + static_cast<double>(i % 4) * 15.0;
        s.raw_counts = counts(rng);
        s.integration_s = 30.0;
        s.fov_half_angle_deg = 0.008;
    }
    return samples;
}

} // namespace

static void BM_UplinkBackgroundRate(benchmark::State& state) {
    const FiberProbe probe = FiberProbe::from_numerical_aperture(52.5e-6, 0.22);
    const PhotonRate roof(42000.0, 0.03);
    double elevation = 10.0;
    for (auto _ : state) {
        const LinkGeometry geom(elevation, slant_distance(550e3, elevation), 2.9e-5, 0.125);
        benchmark::DoNotOptimize(uplink_background_rate(roof, probe, geom));
        elevation = elevation >= 90.0 ? 10.0 : elevation + 1.0;
    }
}
BENCHMARK(BM_UplinkBackgroundRate);

static void BM_QberCurve(benchmark::State& state) {
    const SourceSpec source(SourceKind::kWeakCoherentPulse, SpectralBand(780, 10), 4e8);
    const LossModel loss = make_loss();
    std::vector<double> grid;
    for (int e = 10; e <= 90; ++e) grid.push_back(e);
    const auto background = [](double elevation) {
        return PhotonRate(2000.0 * atmospheric_transmission(elevation), 0.4);
    };
    for (auto _ : state) {
        benchmark::DoNotOptimize(qber_curve(source, loss, background, grid, 1e-9));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_QberCurve);

static void BM_AggregateByElevation(benchmark::State& state) {
    const auto samples = make_samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(aggregate_by_elevation(samples));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AggregateByElevation)->Range(32, 2048);

BENCHMARK_MAIN();
