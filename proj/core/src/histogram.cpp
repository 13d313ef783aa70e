#include "qdfit/histogram.hpp"

#include <istream>
#include <ostream>

#include "qdfit/errors.hpp"
#include "text_util.hpp"

namespace qdfit {

std::string to_string(ZeroPolicy policy) {
  return policy == ZeroPolicy::include ? "include" : "exclude";
}

ZeroPolicy zero_policy_from_string(const std::string& text) {
  if (text == "include") return ZeroPolicy::include;
  if (text == "exclude") return ZeroPolicy::exclude;
  throw ParseError("unknown zero policy '" + text + "' (include|exclude)");
}

HistogramDistribution build_histogram(const DeformationMagnitudes& mags,
                                      int k_bins, ZeroPolicy policy) {
  if (k_bins < 2) throw NumericError("k_bins must be at least 2");
  const std::size_t n_total = mags.values.size();
  if (n_total == 0) throw NumericError("empty magnitude set");

  HistogramDistribution hist;
  hist.k_bins = k_bins;
  hist.n_total = n_total;
  hist.zero_fraction = static_cast<double>(mags.zero_count) / n_total;
  hist.zero_policy = policy;

  double v_min = mags.v_min;
  double v_max = mags.v_max;
  std::size_t counted = n_total;
  if (policy == ZeroPolicy::exclude) {
    counted = n_total - mags.zero_count;
    if (counted == 0) {
      throw NumericError("no nonzero magnitudes left after zero exclusion");
    }
    v_min = v_max;
    for (double v : mags.values) {
      if (v != 0.0 && v < v_min) v_min = v;
    }
  }
  if (!(v_max > v_min)) {
    throw NumericError("degenerate magnitude range: v_min == v_max");
  }

  hist.v_min = v_min;
  hist.v_max = v_max;
  hist.xi = (v_max - v_min) / k_bins;

  std::vector<std::size_t> counts(static_cast<std::size_t>(k_bins), 0);
  for (double v : mags.values) {
    if (policy == ZeroPolicy::exclude && v == 0.0) continue;
    int idx = static_cast<int>((v - v_min) / hist.xi);
    if (idx >= k_bins) idx = k_bins - 1;  // the last bin is closed
    if (idx < 0) idx = 0;
    ++counts[static_cast<std::size_t>(idx)];
  }

  hist.probs.resize(static_cast<std::size_t>(k_bins));
  for (int k = 0; k < k_bins; ++k) {
    hist.probs[static_cast<std::size_t>(k)] =
        static_cast<double>(counts[static_cast<std::size_t>(k)]) / counted;
  }
  return hist;
}

std::vector<Point2> histogram_points(const HistogramDistribution& hist) {
  std::vector<Point2> points;
  points.reserve(hist.probs.size());
  for (std::size_t k = 0; k < hist.probs.size(); ++k) {
    points.push_back({static_cast<double>(k + 1), hist.probs[k]});
  }
  return points;
}

void write_histogram_csv(const HistogramDistribution& hist,
                         const std::string& case_id, std::ostream& out) {
  out << "# case_id=" << case_id << '\n';
  out << "bin_index,bin_lo,bin_hi,prob\n";
  for (int k = 0; k < hist.k_bins; ++k) {
    double lo = hist.v_min + k * hist.xi;
    double hi = (k + 1 == hist.k_bins) ? hist.v_max : hist.v_min + (k + 1) * hist.xi;
    out << (k + 1) << ',' << detail::format_double(lo) << ','
        << detail::format_double(hi) << ','
        << detail::format_double(hist.probs[static_cast<std::size_t>(k)])
        << '\n';
  }
}

HistogramDistribution read_histogram_csv(std::istream& in,
                                         std::string* case_id) {
  HistogramDistribution hist;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  double last_hi = 0.0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      constexpr std::string_view marker = "# case_id=";
      if (case_id && view.substr(0, marker.size()) == marker) {
        *case_id = std::string(view.substr(marker.size()));
      }
      continue;
    }
    if (!header_seen) {
      if (view != "bin_index,bin_lo,bin_hi,prob") {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected histogram header");
      }
      header_seen = true;
      continue;
    }
    auto fields = detail::split(view, ',');
    if (fields.size() != 4) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 4 fields");
    }
    auto idx = detail::parse_int(fields[0]);
    auto lo = detail::parse_double(fields[1]);
    auto hi = detail::parse_double(fields[2]);
    auto prob = detail::parse_double(fields[3]);
    if (!idx || !lo || !hi || !prob) {
      throw ParseError("line " + std::to_string(line_no) + ": bad value");
    }
    if (*idx != static_cast<long long>(hist.probs.size()) + 1) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": bin_index out of sequence");
    }
    if (hist.probs.empty()) hist.v_min = *lo;
    last_hi = *hi;
    hist.probs.push_back(*prob);
  }

  if (!header_seen || hist.probs.size() < 2) {
    throw ParseError("histogram CSV needs a header and at least 2 bins");
  }
  hist.k_bins = static_cast<int>(hist.probs.size());
  hist.v_max = last_hi;
  hist.xi = (hist.v_max - hist.v_min) / hist.k_bins;
  return hist;
}

}  // namespace qdfit
