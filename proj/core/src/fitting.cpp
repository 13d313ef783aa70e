#include "qdfit/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "qdfit/errors.hpp"
#include "qdfit/parallel.hpp"

namespace qdfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FittedCurve fit_with_parameters(const HistogramDistribution& hist,
                                std::span<const Point2> points,
                                const ParameterSequence& ts, double omega,
                                int degree, int sample_n) {
  if (sample_n < 0) {
    throw NumericError("sample count must be nonnegative (0 = default)");
  }
  BasisConfig config{degree, omega};
  validate(config);

  DesignMatrix phi = assemble_design_matrix(ts, config);
  LeastSquaresResult ls = solve_least_squares(phi, points);

  FittedCurve fit;
  fit.curve.config = config;
  fit.curve.controls = std::move(ls.controls);
  fit.ts = ts;
  fit.condition_flag = ls.rank_deficient;

  const int n = sample_n > 0 ? sample_n : default_sample_count(hist.k_bins);
  std::vector<Point2> samples = curve_sample(fit.curve, n);

  const double reversal_tol = 1e-9 * hist.k_bins;
  for (std::size_t j = 0; j + 1 < samples.size(); ++j) {
    if (samples[j + 1].x < samples[j].x - reversal_tol) {
      fit.monotone_warning = true;
      break;
    }
  }

  fit.signal = resample_to_signal(samples, hist.k_bins);
  fit.mse = mse(fit.signal, hist);
  return fit;
}

}  // namespace

ParameterSequence chord_length_parameterize(std::span<const Point2> points) {
  if (points.size() < 2) {
    throw NumericError("chord-length parameterization needs at least 2 points");
  }
  ParameterSequence seq;
  seq.ts.resize(points.size());
  seq.ts[0] = 0.0;
  double cumulative = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    cumulative += distance(points[i - 1], points[i]);
    seq.ts[i] = cumulative;
  }
  if (cumulative <= 0.0) {
    throw NumericError("all points coincident: zero total chord length");
  }
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    seq.ts[i] /= cumulative;
  }
  seq.ts.back() = 1.0;
  return seq;
}

DesignMatrix assemble_design_matrix(const ParameterSequence& ts,
                                    const BasisConfig& config) {
  validate(config);
  const int rows = static_cast<int>(ts.ts.size());
  const int cols = config.basis_count();
  if (rows < cols) {
    throw NumericError("under-determined system: " + std::to_string(rows) +
                       " parameters for " + std::to_string(cols) + " bases");
  }
  DesignMatrix phi;
  phi.rows = rows;
  phi.cols = cols;
  phi.values.resize(static_cast<std::size_t>(rows) * cols);
  for (int k = 0; k < rows; ++k) {
    basis_row_into(config, ts.ts[static_cast<std::size_t>(k)],
                   std::span<double>(
                       phi.values.data() + static_cast<std::size_t>(k) * cols,
                       static_cast<std::size_t>(cols)));
  }
  return phi;
}

LeastSquaresResult solve_least_squares(const DesignMatrix& phi,
                                       std::span<const Point2> points) {
  if (static_cast<int>(points.size()) != phi.rows) {
    throw NumericError("dimension mismatch: " + std::to_string(points.size()) +
                       " points for " + std::to_string(phi.rows) +
                       " matrix rows");
  }

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      mapped(phi.values.data(), phi.rows, phi.cols);
  Eigen::MatrixXd a = mapped;
  Eigen::MatrixXd b(phi.rows, 2);
  for (int k = 0; k < phi.rows; ++k) {
    b(k, 0) = points[static_cast<std::size_t>(k)].x;
    b(k, 1) = points[static_cast<std::size_t>(k)].y;
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  Eigen::MatrixXd x = cod.solve(b);

  LeastSquaresResult result;
  result.rank_deficient = cod.rank() < phi.cols;
  result.controls.points.resize(static_cast<std::size_t>(phi.cols));
  for (int i = 0; i < phi.cols; ++i) {
    result.controls.points[static_cast<std::size_t>(i)] = {x(i, 0), x(i, 1)};
  }
  return result;
}

SampledSignal resample_to_signal(std::span<const Point2> samples, int k_bins) {
  if (samples.empty()) throw NumericError("no curve samples to resample");
  if (k_bins < 1) throw NumericError("k_bins must be positive");

  bool nondecreasing = true;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (!std::isfinite(samples[j].x) || !std::isfinite(samples[j].y)) {
      throw NumericError("non-finite curve sample");
    }
    if (j + 1 < samples.size() && samples[j + 1].x < samples[j].x) {
      nondecreasing = false;
    }
  }

  SampledSignal signal;
  signal.values.resize(static_cast<std::size_t>(k_bins));
  signal.source_n = static_cast<int>(samples.size()) - 1;

  // Walk the samples in (x, parameter index) order; for each threshold k the
  // last sample passed is the max-x one, ties resolved to the later index.
  auto merge = [&](auto&& x_of, auto&& y_of, std::size_t n) {
    std::size_t pos = 0;
    std::ptrdiff_t best = -1;
    for (int k = 1; k <= k_bins; ++k) {
      while (pos < n && x_of(pos) < static_cast<double>(k)) {
        best = static_cast<std::ptrdiff_t>(pos);
        ++pos;
      }
      if (best < 0) {
        if (k == 1) {
          signal.values[0] = samples[0].y;
          continue;
        }
        throw NumericError("curve x-range does not reach bin " +
                           std::to_string(k));
      }
      signal.values[static_cast<std::size_t>(k - 1)] =
          y_of(static_cast<std::size_t>(best));
    }
  };

  if (nondecreasing) {
    merge([&](std::size_t j) { return samples[j].x; },
          [&](std::size_t j) { return samples[j].y; }, samples.size());
  } else {
    std::vector<std::pair<double, std::size_t>> order(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
      order[j] = {samples[j].x, j};
    }
    std::sort(order.begin(), order.end());
    merge([&](std::size_t j) { return order[j].first; },
          [&](std::size_t j) { return samples[order[j].second].y; },
          order.size());
  }
  return signal;
}

double mse(const SampledSignal& signal, const HistogramDistribution& hist) {
  if (signal.values.size() != hist.probs.size()) {
    throw NumericError("signal/histogram length mismatch: " +
                       std::to_string(signal.values.size()) + " vs " +
                       std::to_string(hist.probs.size()));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < signal.values.size(); ++k) {
    const double d = signal.values[k] - hist.probs[k];
    sum += d * d;
  }
  return sum / static_cast<double>(signal.values.size());
}

FittedCurve fit_curve(const HistogramDistribution& hist, double omega,
                      int degree, int sample_n) {
  std::vector<Point2> points = histogram_points(hist);
  ParameterSequence ts = chord_length_parameterize(points);
  return fit_with_parameters(hist, points, ts, omega, degree, sample_n);
}

std::vector<double> grid_values(const OmegaGrid& grid) {
  if (!(grid.lo > 0.0 && grid.lo < grid.hi && grid.hi < 1.0) ||
      !(grid.step > 0.0)) {
    throw NumericError("empty omega grid: need 0 < lo < hi < 1 and step > 0");
  }
  std::vector<double> values;
  const long long count =
      static_cast<long long>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9));
  values.reserve(static_cast<std::size_t>(count) + 1);
  for (long long j = 0; j <= count; ++j) {
    values.push_back(grid.lo + static_cast<double>(j) * grid.step);
  }
  return values;
}

OmegaSelection select_omega(const HistogramDistribution& hist,
                            const OmegaGrid& grid, int degree, int sample_n,
                            int threads) {
  const std::vector<double> omegas = grid_values(grid);
  std::vector<Point2> points = histogram_points(hist);
  ParameterSequence ts = chord_length_parameterize(points);

  std::vector<double> scores(omegas.size(), kInf);
  parallel_for(static_cast<int>(omegas.size()), threads, [&](int j) {
    try {
      FittedCurve fit = fit_with_parameters(
          hist, points, ts, omegas[static_cast<std::size_t>(j)], degree,
          sample_n);
      if (!fit.condition_flag && std::isfinite(fit.mse)) {
        scores[static_cast<std::size_t>(j)] = fit.mse;
      }
    } catch (const NumericError&) {
      // penalized grid point, keep the scan total
    }
  });

  std::size_t best = 0;
  for (std::size_t j = 1; j < scores.size(); ++j) {
    if (scores[j] < scores[best]) best = j;
  }
  if (scores[best] == kInf) {
    throw NumericError("no usable fit on the omega grid");
  }

  OmegaSelection selection;
  selection.omega = omegas[best];
  selection.fit =
      fit_with_parameters(hist, points, ts, omegas[best], degree, sample_n);
  return selection;
}

}  // namespace qdfit
