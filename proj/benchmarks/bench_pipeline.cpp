#include <benchmark/benchmark.h>

#include <vector>

#include "qdfit/fitting.hpp"
#include "qdfit/quasi.hpp"
#include "qdfit/synth.hpp"

namespace {

qdfit::HistogramDistribution bench_histogram() {
  qdfit::SynthSpec spec;
  spec.n_nodes = 5000;
  spec.law = qdfit::GaussianMixtureLaw{{4.0, 7.5}, {0.8, 0.5}, {0.7, 0.3}};
  spec.zero_fraction = 0.05;
  spec.seed = 12;
  const auto field = qdfit::generate_field(spec, "bench");
  return qdfit::build_histogram(qdfit::field_magnitudes(field), 350);
}

void BM_BasisRow(benchmark::State& state) {
  const qdfit::BasisConfig config{5, 0.608};
  std::vector<double> row(11);
  double t = 0.0;
  for (auto _ : state) {
    t += 1.0 / 4096.0;
    if (t > 1.0) t -= 1.0;
    qdfit::basis_row_into(config, t, row);
    benchmark::DoNotOptimize(row.data());
  }
}
BENCHMARK(BM_BasisRow);

void BM_CurveSample(benchmark::State& state) {
  qdfit::PiecewiseBezierCurve curve = qdfit::kinked_density_curve(0.608, 350);
  for (auto _ : state) {
    auto samples = qdfit::curve_sample(curve, 5600);
    benchmark::DoNotOptimize(samples.data());
  }
}
BENCHMARK(BM_CurveSample);

void BM_FixedOmegaFit(benchmark::State& state) {
  const auto hist = bench_histogram();
  for (auto _ : state) {
    auto fit = qdfit::fit_curve(hist, 0.608);
    benchmark::DoNotOptimize(fit.mse);
  }
}
BENCHMARK(BM_FixedOmegaFit);

void BM_OmegaGridSearch(benchmark::State& state) {
  const auto hist = bench_histogram();
  for (auto _ : state) {
    auto selection = qdfit::select_omega(hist, {0.05, 0.95, 0.002});
    benchmark::DoNotOptimize(selection.omega);
  }
}
BENCHMARK(BM_OmegaGridSearch)->Unit(benchmark::kMillisecond);

void BM_EvaluateCase(benchmark::State& state) {
  qdfit::SynthSpec spec;
  spec.n_nodes = 5000;
  spec.law = qdfit::GaussianMixtureLaw{{4.0, 7.5}, {0.8, 0.5}, {0.7, 0.3}};
  spec.zero_fraction = 0.05;
  spec.seed = 12;
  const auto field = qdfit::generate_field(spec, "bench");
  for (auto _ : state) {
    auto report = qdfit::evaluate_case(field, qdfit::PipelineConfig{});
    benchmark::DoNotOptimize(report.variance_index);
  }
}
BENCHMARK(BM_EvaluateCase)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
