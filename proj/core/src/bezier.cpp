#include "qdfit/bezier.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qdfit/errors.hpp"

namespace qdfit {

namespace {

// out[i] = C(d,i) u^i (1-u)^(d-i) for i = 0..d, by incremental products.
void bernstein_all(int d, double u, double* out) {
  out[0] = 1.0;
  for (int i = 1; i <= d; ++i) {
    out[i] = out[i - 1] * u * (d - i + 1) / i;
  }
  const double v = 1.0 - u;
  double w = 1.0;
  for (int i = d; i >= 0; --i) {
    out[i] *= w;
    w *= v;
  }
}

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw NumericError("parameter t outside [0,1]: " + std::to_string(t));
  }
}

}  // namespace

void validate(const BasisConfig& config) {
  if (config.degree < 1 || config.degree > 25) {
    throw NumericError("basis degree must be in [1, 25], got " +
                       std::to_string(config.degree));
  }
  if (!(config.omega > 0.0 && config.omega < 1.0)) {
    throw NumericError("segmentation point must be in (0, 1), got " +
                       std::to_string(config.omega));
  }
}

void basis_row_into(const BasisConfig& config, double t,
                    std::span<double> row) {
  check_t(t);
  const int d = config.degree;
  const double omega = config.omega;
  if (t < omega) {
    bernstein_all(d, t / omega, row.data());
    for (int i = d + 1; i <= 2 * d; ++i) row[static_cast<std::size_t>(i)] = 0.0;
  } else {
    for (int i = 0; i < d; ++i) row[static_cast<std::size_t>(i)] = 0.0;
    bernstein_all(d, (t - omega) / (1.0 - omega), row.data() + d);
  }
}

std::vector<double> basis_row(const BasisConfig& config, double t) {
  validate(config);
  std::vector<double> row(static_cast<std::size_t>(config.basis_count()));
  basis_row_into(config, t, row);
  return row;
}

double basis_eval(const BasisConfig& config, int i, double t) {
  validate(config);
  if (i < 0 || i > 2 * config.degree) {
    throw std::out_of_range("basis index " + std::to_string(i) +
                            " out of range for degree " +
                            std::to_string(config.degree));
  }
  std::vector<double> row(static_cast<std::size_t>(config.basis_count()));
  basis_row_into(config, t, row);
  return row[static_cast<std::size_t>(i)];
}

Point2 curve_eval(const PiecewiseBezierCurve& curve, double t) {
  validate(curve.config);
  const std::size_t count =
      static_cast<std::size_t>(curve.config.basis_count());
  if (curve.controls.points.size() != count) {
    throw NumericError("control polygon size " +
                       std::to_string(curve.controls.points.size()) +
                       " does not match basis count " + std::to_string(count));
  }
  std::vector<double> row(count);
  basis_row_into(curve.config, t, row);
  Point2 p;
  for (std::size_t i = 0; i < count; ++i) {
    p.x += row[i] * curve.controls.points[i].x;
    p.y += row[i] * curve.controls.points[i].y;
  }
  return p;
}

std::vector<Point2> curve_sample(const PiecewiseBezierCurve& curve, int n) {
  validate(curve.config);
  if (n < 1) throw NumericError("sample count must be at least 1");
  const std::size_t count =
      static_cast<std::size_t>(curve.config.basis_count());
  if (curve.controls.points.size() != count) {
    throw NumericError("control polygon size does not match basis count");
  }

  std::vector<Point2> samples;
  samples.reserve(static_cast<std::size_t>(n) + 1);
  std::vector<double> row(count);
  for (int k = 0; k <= n; ++k) {
    basis_row_into(curve.config, static_cast<double>(k) / n, row);
    Point2 p;
    for (std::size_t i = 0; i < count; ++i) {
      p.x += row[i] * curve.controls.points[i].x;
      p.y += row[i] * curve.controls.points[i].y;
    }
    samples.push_back(p);
  }
  return samples;
}

int default_sample_count(int k_bins) { return 16 * k_bins; }

}  // namespace qdfit
