#pragma once

#include <span>
#include <vector>

#include "qdfit/bezier.hpp"
#include "qdfit/histogram.hpp"
#include "qdfit/types.hpp"

namespace qdfit {

struct ParameterSequence {
  std::vector<double> ts;
};

// Row-major K x (2d+1) matrix of basis values at the data parameters.
struct DesignMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  double at(int r, int c) const {
    return values[static_cast<std::size_t>(r) * cols + c];
  }
};

// Fitted curve resampled onto the bin indices ("standard discrete signal").
struct SampledSignal {
  std::vector<double> values;
  int source_n = 0;  // curve sample density the signal came from
};

struct FittedCurve {
  PiecewiseBezierCurve curve;
  ParameterSequence ts;
  SampledSignal signal;
  double mse = 0.0;
  bool condition_flag = false;    // design matrix was rank-deficient
  bool monotone_warning = false;  // sampled x reversed direction
};

/// Cumulative chord-length parameters: t_k proportional to accumulated
/// Euclidean distance, t_0 = 0, t_{K-1} = 1. Throws NumericError when all
/// points coincide.
ParameterSequence chord_length_parameterize(std::span<const Point2> points);

/// phi[k][i] = N_i(t_k). Throws NumericError when K < 2d+1.
DesignMatrix assemble_design_matrix(const ParameterSequence& ts,
                                    const BasisConfig& config);

struct LeastSquaresResult {
  ControlPolygon controls;
  bool rank_deficient = false;
};

/// Minimum-residual solution of phi * C = points, solved per coordinate.
/// Rank-deficient systems get the minimum-norm solution and a flag.
LeastSquaresResult solve_least_squares(const DesignMatrix& phi,
                                       std::span<const Point2> points);

/// For each k = 1..k_bins selects the sample with the largest x strictly
/// below k (ties to the last such sample in parameter order) and takes its y.
/// No sample below 1 falls back to the first sample's y for k = 1; any later
/// uncovered k is a NumericError. No interpolation.
SampledSignal resample_to_signal(std::span<const Point2> samples, int k_bins);

/// Mean squared deviation between the signal and the histogram probs.
double mse(const SampledSignal& signal, const HistogramDistribution& hist);

/// Chord-parameterize the histogram points, solve the least squares system
/// at the given segmentation point, resample and score. sample_n == 0 uses
/// default_sample_count(k_bins).
FittedCurve fit_curve(const HistogramDistribution& hist, double omega,
                      int degree = 5, int sample_n = 0);

struct OmegaGrid {
  double lo = 0.05;
  double hi = 0.95;
  double step = 0.002;
};

/// The grid points lo, lo+step, ... up to hi.
std::vector<double> grid_values(const OmegaGrid& grid);

struct OmegaSelection {
  double omega = 0.0;
  FittedCurve fit;
};

/// Scans the grid and returns the MSE minimizer, ties broken toward the
/// smaller omega. Rank-deficient or failed fits are penalized to +inf so the
/// scan stays total; if every grid point is penalized a NumericError is
/// raised. Deterministic for any thread count.
OmegaSelection select_omega(const HistogramDistribution& hist,
                            const OmegaGrid& grid, int degree = 5,
                            int sample_n = 0, int threads = 1);

}  // namespace qdfit
