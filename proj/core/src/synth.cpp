#include "qdfit/synth.hpp"

#include <cmath>
#include <numbers>

#include "qdfit/errors.hpp"
#include "qdfit/fitting.hpp"
#include "text_util.hpp"

namespace qdfit {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double SplitMix64::gaussian(double mean, double sigma) {
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

double draw_magnitude(const MagnitudeLaw& law, SplitMix64& rng) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformLaw>) {
          return rng.uniform(l.lo, l.hi);
        } else if constexpr (std::is_same_v<T, LogNormalLaw>) {
          return std::exp(rng.gaussian(l.mu, l.sigma));
        } else {
          for (int attempt = 0; attempt < 1000; ++attempt) {
            const double pick = rng.uniform01();
            double cumulative = 0.0;
            std::size_t component = l.weights.size() - 1;
            for (std::size_t c = 0; c < l.weights.size(); ++c) {
              cumulative += l.weights[c];
              if (pick < cumulative) {
                component = c;
                break;
              }
            }
            const double m = rng.gaussian(l.means[component], l.sigmas[component]);
            if (m >= 0.0) return m;
          }
          throw NumericError(
              "gaussian mixture rejected 1000 draws; mass is almost entirely "
              "negative");
        }
      },
      law);
}

void validate_law(const MagnitudeLaw& law) {
  std::visit(
      [](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformLaw>) {
          if (!(l.lo >= 0.0) || !(l.hi > l.lo)) {
            throw NumericError("uniform law needs 0 <= lo < hi");
          }
        } else if constexpr (std::is_same_v<T, LogNormalLaw>) {
          if (!(l.sigma > 0.0)) throw NumericError("lognormal sigma must be > 0");
        } else {
          if (l.means.empty() || l.means.size() != l.sigmas.size() ||
              l.means.size() != l.weights.size()) {
            throw NumericError("gaussian mixture needs parallel mean/sigma/weight lists");
          }
          double total = 0.0;
          for (std::size_t c = 0; c < l.means.size(); ++c) {
            if (!(l.sigmas[c] > 0.0)) {
              throw NumericError("gaussian mixture sigmas must be > 0");
            }
            if (!(l.weights[c] >= 0.0)) {
              throw NumericError("gaussian mixture weights must be >= 0");
            }
            total += l.weights[c];
          }
          if (std::abs(total - 1.0) > 1e-12) {
            throw NumericError("gaussian mixture weights must sum to 1");
          }
        }
      },
      law);
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.n_nodes < 2) throw NumericError("n_nodes must be at least 2");
  if (!(spec.zero_fraction >= 0.0 && spec.zero_fraction < 1.0)) {
    throw NumericError("zero_fraction must be in [0, 1)");
  }
  validate_law(spec.law);
}

DisplacementField generate_field(const SynthSpec& spec, std::string case_id) {
  validate(spec);

  DisplacementField field;
  field.case_id = std::move(case_id);
  field.nodes.reserve(spec.n_nodes);

  const std::size_t zero_nodes = static_cast<std::size_t>(
      std::floor(spec.zero_fraction * static_cast<double>(spec.n_nodes)));
  SplitMix64 rng(spec.seed);

  for (std::size_t i = 0; i < spec.n_nodes; ++i) {
    NodeDisplacement node;
    node.node_id = static_cast<std::int64_t>(i + 1);
    if (i >= zero_nodes) {
      const double m = draw_magnitude(spec.law, rng);
      const std::uint64_t signs = rng.next();
      // (c, c, m - 2c) sums back to m exactly under the 1-norm
      const double c = m / 3.0;
      node.ux = (signs & 1) ? -c : c;
      node.uy = (signs & 2) ? -c : c;
      node.uz = (signs & 4) ? -(m - 2.0 * c) : (m - 2.0 * c);
    }
    field.nodes.push_back(node);
  }
  return field;
}

HistogramDistribution generate_from_curve(const PiecewiseBezierCurve& curve,
                                          int k_bins) {
  if (k_bins < 2) throw NumericError("k_bins must be at least 2");
  std::vector<Point2> samples =
      curve_sample(curve, default_sample_count(k_bins));
  SampledSignal signal = resample_to_signal(samples, k_bins);

  double total = 0.0;
  for (double& v : signal.values) {
    if (v < 0.0) v = 0.0;
    total += v;
  }
  if (!(total > 0.0)) {
    throw NumericError("degenerate curve: no positive mass after clipping");
  }

  HistogramDistribution hist;
  hist.k_bins = k_bins;
  hist.v_min = 0.0;
  hist.v_max = static_cast<double>(k_bins);
  hist.xi = 1.0;
  hist.n_total = 0;
  hist.zero_fraction = 0.0;
  hist.zero_policy = ZeroPolicy::include;
  hist.probs.resize(signal.values.size());
  for (std::size_t k = 0; k < signal.values.size(); ++k) {
    hist.probs[k] = signal.values[k] / total;
  }
  return hist;
}

PiecewiseBezierCurve kinked_density_curve(double omega, int k_bins,
                                          int degree) {
  BasisConfig config{degree, omega};
  validate(config);
  if (k_bins < 2) throw NumericError("k_bins must be at least 2");

  const double x0 = 1.0;
  const double x_end = static_cast<double>(k_bins);
  const double x_mid = x0 + (x_end - x0) * omega;
  const double amplitude = 2.0 / k_bins;

  PiecewiseBezierCurve curve;
  curve.config = config;
  curve.controls.points.resize(static_cast<std::size_t>(config.basis_count()));
  for (int i = 0; i <= degree; ++i) {
    const double f = static_cast<double>(i) / degree;
    // rising edge: x affine toward the junction, y climbing to the peak
    curve.controls.points[static_cast<std::size_t>(i)] = {
        x0 + (x_mid - x0) * f, amplitude * (0.2 + 0.8 * f)};
  }
  for (int j = 1; j <= degree; ++j) {
    const double f = static_cast<double>(j) / degree;
    // falling edge at a different rate, so the junction is a real kink
    curve.controls.points[static_cast<std::size_t>(degree + j)] = {
        x_mid + (x_end - x_mid) * f, amplitude * (1.0 - 0.9 * f)};
  }
  return curve;
}

MagnitudeLaw parse_law(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : text.substr(colon + 1);

  auto nums = [&](std::string_view s) {
    std::vector<double> out;
    for (std::string_view part : detail::split(s, ',')) {
      auto v = detail::parse_double(part);
      if (!v) throw ParseError("bad number '" + std::string(part) +
                               "' in law '" + text + "'");
      out.push_back(*v);
    }
    return out;
  };

  if (kind == "uniform") {
    auto v = nums(args);
    if (v.size() != 2) throw ParseError("uniform law needs 'uniform:lo,hi'");
    return UniformLaw{v[0], v[1]};
  }
  if (kind == "lognormal") {
    auto v = nums(args);
    if (v.size() != 2) {
      throw ParseError("lognormal law needs 'lognormal:mu,sigma'");
    }
    return LogNormalLaw{v[0], v[1]};
  }
  if (kind == "gmix") {
    GaussianMixtureLaw law;
    for (std::string_view comp : detail::split(args, ';')) {
      auto v = nums(comp);
      if (v.size() != 3) {
        throw ParseError("gmix law needs 'gmix:mean,sigma,weight[;...]'");
      }
      law.means.push_back(v[0]);
      law.sigmas.push_back(v[1]);
      law.weights.push_back(v[2]);
    }
    return law;
  }
  throw ParseError("unknown law '" + text +
                   "' (uniform|gmix|lognormal expected)");
}

std::string to_string(const MagnitudeLaw& law) {
  return std::visit(
      [](const auto& l) -> std::string {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformLaw>) {
          return "uniform:" + detail::format_double(l.lo) + "," +
                 detail::format_double(l.hi);
        } else if constexpr (std::is_same_v<T, LogNormalLaw>) {
          return "lognormal:" + detail::format_double(l.mu) + "," +
                 detail::format_double(l.sigma);
        } else {
          std::string out = "gmix:";
          for (std::size_t c = 0; c < l.means.size(); ++c) {
            if (c) out += ';';
            out += detail::format_double(l.means[c]) + "," +
                   detail::format_double(l.sigmas[c]) + "," +
                   detail::format_double(l.weights[c]);
          }
          return out;
        }
      },
      law);
}

}  // namespace qdfit
