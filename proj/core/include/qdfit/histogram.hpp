#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdfit/ingest.hpp"
#include "qdfit/types.hpp"

namespace qdfit {

inline constexpr int kDefaultBins = 350;

// Zero-deformation nodes (fixed supports) can pile up in bin 1 and dominate
// the fit; `exclude` drops them from the binned range. The zero fraction is
// reported from the full field either way.
enum class ZeroPolicy { include, exclude };

std::string to_string(ZeroPolicy policy);
ZeroPolicy zero_policy_from_string(const std::string& text);

struct HistogramDistribution {
  int k_bins = 0;
  double v_min = 0.0;
  double v_max = 0.0;
  double xi = 0.0;  // bin width (v_max - v_min) / k_bins
  std::vector<double> probs;
  std::size_t n_total = 0;
  double zero_fraction = 0.0;
  ZeroPolicy zero_policy = ZeroPolicy::include;
};

/// Equal-width binning over [v_min, v_max]. Bin k (1-based) covers
/// [v_min+(k-1)*xi, v_min+k*xi), except the last bin which is closed so the
/// maximum is counted. probs sum to 1 over the counted magnitudes.
/// Throws NumericError on a degenerate range or an empty set after the policy.
HistogramDistribution build_histogram(const DeformationMagnitudes& mags,
                                      int k_bins = kDefaultBins,
                                      ZeroPolicy policy = ZeroPolicy::include);

/// The histogram as planar points (k, probs[k-1]) for k = 1..K.
std::vector<Point2> histogram_points(const HistogramDistribution& hist);

/// CSV with header `bin_index,bin_lo,bin_hi,prob`, preceded by a
/// `# case_id=<id>` comment line.
void write_histogram_csv(const HistogramDistribution& hist,
                         const std::string& case_id, std::ostream& out);

/// Reads the CSV back. n_total, zero_fraction and zero_policy are not part of
/// the format and come back defaulted. A `# case_id=` marker, when present,
/// is returned through `case_id`.
HistogramDistribution read_histogram_csv(std::istream& in,
                                         std::string* case_id = nullptr);

}  // namespace qdfit
