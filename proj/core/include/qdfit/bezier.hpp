#pragma once

#include <span>
#include <vector>

#include "qdfit/types.hpp"

namespace qdfit {

// Two degree-d Bezier segments joined C0 at parameter omega, sharing the
// middle basis function, so a curve has 2d+1 bases and control points.
//
// With u = t/omega and s = (t-omega)/(1-omega):
//   i in [0, d-1]   : Bernstein_{i,d}(u) on [0, omega), 0 on [omega, 1]
//   i == d          : u^d on [0, omega), (1-s)^d on [omega, 1]
//   i in [d+1, 2d]  : 0 on [0, omega), Bernstein_{i-d,d}(s) on [omega, 1]
//
// t == omega is evaluated on the right branch; both branches give the same
// value there, the choice just pins the bit pattern.
struct BasisConfig {
  int degree = 5;
  double omega = 0.5;

  int basis_count() const { return 2 * degree + 1; }
};

/// Throws NumericError unless 1 <= degree <= 25 and 0 < omega < 1.
void validate(const BasisConfig& config);

struct ControlPolygon {
  std::vector<Point2> points;  // exactly basis_count() entries
};

struct PiecewiseBezierCurve {
  BasisConfig config;
  ControlPolygon controls;
};

/// N_i(t). Throws std::out_of_range for a bad index and NumericError for
/// t outside [0,1].
double basis_eval(const BasisConfig& config, int i, double t);

/// All basis values at t; sums to 1.
std::vector<double> basis_row(const BasisConfig& config, double t);

/// Same as basis_row into a caller-owned buffer of size basis_count().
void basis_row_into(const BasisConfig& config, double t, std::span<double> row);

/// B(t) = sum_i N_i(t) C_i.
Point2 curve_eval(const PiecewiseBezierCurve& curve, double t);

/// n+1 points at t = k/n, k = 0..n.
std::vector<Point2> curve_sample(const PiecewiseBezierCurve& curve, int n);

/// Sample density used when discretizing a fitted curve back onto k bins.
int default_sample_count(int k_bins);

}  // namespace qdfit
