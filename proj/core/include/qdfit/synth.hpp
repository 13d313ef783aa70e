#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qdfit/bezier.hpp"
#include "qdfit/histogram.hpp"
#include "qdfit/ingest.hpp"

namespace qdfit {

// SplitMix64. state += 0x9E3779B97F4A7C15; z = state;
// z = (z ^ z>>30) * 0xBF58476D1CE4E5B9; z = (z ^ z>>27) * 0x94D049BB133111EB;
// return z ^ z>>31. The draw sequence is part of the reproducibility
// contract: uniform01 consumes one raw draw (top 53 bits / 2^53), gaussian
// consumes exactly two uniforms (Box-Muller, cosine branch, no caching).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform01();  // [0, 1)
  double uniform(double lo, double hi);
  double gaussian(double mean, double sigma);

 private:
  std::uint64_t state_;
};

struct UniformLaw {
  double lo = 0.0;
  double hi = 1.0;
};

// Truncated at zero by redraw; each rejected draw consumes its two uniforms.
struct GaussianMixtureLaw {
  std::vector<double> means;
  std::vector<double> sigmas;
  std::vector<double> weights;  // sum to 1
};

struct LogNormalLaw {
  double mu = 0.0;
  double sigma = 1.0;
};

using MagnitudeLaw = std::variant<UniformLaw, GaussianMixtureLaw, LogNormalLaw>;

/// Parses "uniform:lo,hi", "lognormal:mu,sigma" or
/// "gmix:mean,sigma,weight[;mean,sigma,weight...]".
MagnitudeLaw parse_law(const std::string& text);
std::string to_string(const MagnitudeLaw& law);

struct SynthSpec {
  std::size_t n_nodes = 2;
  MagnitudeLaw law;
  double zero_fraction = 0.0;  // in [0, 1)
  std::uint64_t seed = 0;
};

void validate(const SynthSpec& spec);

/// Deterministic synthetic field: the first floor(zero_fraction * n) nodes
/// are exact zeros (they consume no draws); every other node draws one
/// magnitude m from the law, then one raw draw whose low three bits flip the
/// component signs. Components are (c, c, m - 2c) with c = m/3, so the
/// 1-norm recovers m exactly.
DisplacementField generate_field(const SynthSpec& spec,
                                 std::string case_id = "synthetic");

/// Histogram whose probs are the curve's resampled signal, clipped at zero
/// and normalized to sum 1. Fitting it back should recover the curve's
/// segmentation point. Bin metadata is synthetic (v_min 0, xi 1).
HistogramDistribution generate_from_curve(const PiecewiseBezierCurve& curve,
                                          int k_bins);

/// Ground-truth curve for segmentation-point recovery: x(t) affine from 1 to
/// k_bins, y piecewise linear with a slope break at the junction (rising to a
/// peak at C_d, then falling at a different rate).
PiecewiseBezierCurve kinked_density_curve(double omega, int k_bins,
                                          int degree = 5);

}  // namespace qdfit
