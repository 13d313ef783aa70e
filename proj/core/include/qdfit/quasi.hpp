#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qdfit/fitting.hpp"

namespace qdfit {

// Fitted signal scaled by gamma = 1 / enclosed area so it reads as a
// probability density over the bin-index domain (unit spacing).
struct QuasiDistribution {
  double gamma = 0.0;
  std::vector<double> density;
  double v_min = 0.0;  // physical position of the first bin edge
  double xi = 1.0;     // physical bin width
  double negative_mass = 0.0;  // |sum of negative values| clipped before scaling
};

/// Trapezoid-rule integral of the signal over the index domain (dx = 1).
double curve_area(const SampledSignal& signal);

/// Clips negative values to zero (recording the clipped mass), then scales by
/// the reciprocal of the clipped area. Throws NumericError when the clipped
/// signal encloses no area.
QuasiDistribution normalize(const SampledSignal& signal, double v_min = 0.0,
                            double xi = 1.0);

/// Mean bin index under masses w_k = p_k / sum(p).
double distribution_mean(const QuasiDistribution& qd);

/// Second central moment over bin indices: sum w_k (x_k - mu)^2, x_k = k.
double distribution_variance(const QuasiDistribution& qd);

/// Plain population variance of the signal's y values (diagnostic; the
/// ranking uses distribution_variance).
double signal_value_variance(const SampledSignal& signal);

struct PipelineConfig {
  int k_bins = kDefaultBins;
  int degree = 5;
  std::optional<double> fixed_omega;  // empty -> grid search
  OmegaGrid grid;
  int sample_n = 0;  // 0 -> default_sample_count(k_bins)
  ZeroPolicy zero_policy = ZeroPolicy::include;
  int threads = 1;
};

struct FitReport {
  std::string case_id;
  std::size_t n_total = 0;
  double zero_fraction = 0.0;
  double omega = 0.0;
  double mse = 0.0;
  double gamma = 0.0;
  double negative_mass = 0.0;
  double mean_index = 0.0;
  double variance_index = 0.0;
  double mean_physical = 0.0;
  double variance_physical = 0.0;
  double value_variance = 0.0;
  bool rank_deficient = false;
  bool non_monotone = false;
  PipelineConfig config;
  HistogramDistribution histogram;
  SampledSignal signal;
  std::vector<Point2> controls;
  std::vector<double> density;

  std::vector<std::string> warnings() const;
};

/// Full pipeline for one design case: magnitudes -> histogram -> fit (fixed
/// omega or grid search) -> quasi-distribution -> variance. Errors are
/// rethrown with the case id prepended.
FitReport evaluate_case(const DisplacementField& field,
                        const PipelineConfig& config);

struct RankedCases {
  std::vector<FitReport> reports;  // ascending variance_index
};

/// Sorts ascending by index-domain variance, ties by case_id. The first
/// entry is the recommended design. Throws NumericError on empty input.
RankedCases rank_cases(std::vector<FitReport> reports);

}  // namespace qdfit
