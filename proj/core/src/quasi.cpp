#include "qdfit/quasi.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qdfit/errors.hpp"

namespace qdfit {

double curve_area(const SampledSignal& signal) {
  if (signal.values.size() < 2) {
    throw NumericError("signal too short for area integration");
  }
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < signal.values.size(); ++k) {
    area += 0.5 * (signal.values[k] + signal.values[k + 1]);
  }
  return area;
}

QuasiDistribution normalize(const SampledSignal& signal, double v_min,
                            double xi) {
  QuasiDistribution qd;
  qd.v_min = v_min;
  qd.xi = xi;

  SampledSignal clipped = signal;
  for (double& v : clipped.values) {
    if (v < 0.0) {
      qd.negative_mass += -v;
      v = 0.0;
    }
  }

  const double area = curve_area(clipped);
  if (!(area > 0.0)) {
    throw NumericError("fit collapsed: curve encloses no positive area");
  }
  qd.gamma = 1.0 / area;
  qd.density.resize(clipped.values.size());
  for (std::size_t k = 0; k < clipped.values.size(); ++k) {
    qd.density[k] = qd.gamma * clipped.values[k];
  }
  return qd;
}

double distribution_mean(const QuasiDistribution& qd) {
  double mass = 0.0;
  double first = 0.0;
  for (std::size_t k = 0; k < qd.density.size(); ++k) {
    mass += qd.density[k];
    first += qd.density[k] * static_cast<double>(k + 1);
  }
  if (!(mass > 0.0)) throw NumericError("quasi-distribution has no mass");
  return first / mass;
}

double distribution_variance(const QuasiDistribution& qd) {
  const double mu = distribution_mean(qd);
  double mass = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < qd.density.size(); ++k) {
    const double d = static_cast<double>(k + 1) - mu;
    mass += qd.density[k];
    second += qd.density[k] * d * d;
  }
  return second / mass;
}

double signal_value_variance(const SampledSignal& signal) {
  if (signal.values.empty()) return 0.0;
  const double n = static_cast<double>(signal.values.size());
  double mean = 0.0;
  for (double v : signal.values) mean += v;
  mean /= n;
  double sum = 0.0;
  for (double v : signal.values) sum += (v - mean) * (v - mean);
  return sum / n;
}

std::vector<std::string> FitReport::warnings() const {
  std::vector<std::string> out;
  if (rank_deficient) out.push_back("rank_deficient");
  if (non_monotone) out.push_back("non_monotone");
  return out;
}

FitReport evaluate_case(const DisplacementField& field,
                        const PipelineConfig& config) {
  auto annotate = [&](const char* what) {
    return "case '" + field.case_id + "': " + what;
  };
  try {
    if (field.nodes.size() < 2) {
      throw NumericError("field has fewer than 2 nodes");
    }

    const DeformationMagnitudes mags = field_magnitudes(field);
    HistogramDistribution hist =
        build_histogram(mags, config.k_bins, config.zero_policy);

    FittedCurve fit;
    double omega = 0.0;
    if (config.fixed_omega) {
      omega = *config.fixed_omega;
      fit = fit_curve(hist, omega, config.degree, config.sample_n);
    } else {
      OmegaSelection selection = select_omega(
          hist, config.grid, config.degree, config.sample_n, config.threads);
      omega = selection.omega;
      fit = std::move(selection.fit);
    }

    const QuasiDistribution qd = normalize(fit.signal, hist.v_min, hist.xi);

    FitReport report;
    report.case_id = field.case_id;
    report.n_total = hist.n_total;
    report.zero_fraction = hist.zero_fraction;
    report.omega = omega;
    report.mse = fit.mse;
    report.gamma = qd.gamma;
    report.negative_mass = qd.negative_mass;
    report.mean_index = distribution_mean(qd);
    report.variance_index = distribution_variance(qd);
    report.mean_physical = hist.v_min + (report.mean_index - 0.5) * hist.xi;
    report.variance_physical = report.variance_index * hist.xi * hist.xi;
    report.value_variance = signal_value_variance(fit.signal);
    report.rank_deficient = fit.condition_flag;
    report.non_monotone = fit.monotone_warning;
    report.config = config;
    report.histogram = std::move(hist);
    report.signal = std::move(fit.signal);
    report.controls = std::move(fit.curve.controls.points);
    report.density = qd.density;
    return report;
  } catch (const NumericError& e) {
    throw NumericError(annotate(e.what()));
  } catch (const ParseError& e) {
    throw ParseError(annotate(e.what()));
  }
}

RankedCases rank_cases(std::vector<FitReport> reports) {
  if (reports.empty()) throw NumericError("no cases to rank");
  std::stable_sort(reports.begin(), reports.end(),
                   [](const FitReport& a, const FitReport& b) {
                     if (a.variance_index != b.variance_index) {
                       return a.variance_index < b.variance_index;
                     }
                     return a.case_id < b.case_id;
                   });
  return RankedCases{std::move(reports)};
}

}  // namespace qdfit
