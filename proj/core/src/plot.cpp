#include "qdfit/plot.hpp"

#include <algorithm>
#include <ostream>

#include "qdfit/errors.hpp"
#include "text_util.hpp"

namespace qdfit {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 780.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 450.0;

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void check_same_case(const FitReport& report,
                     const HistogramDistribution& hist) {
  if (report.signal.values.size() != hist.probs.size()) {
    throw NumericError("report and histogram disagree on bin count");
  }
}

}  // namespace

void write_plot_svg(const FitReport& report, const HistogramDistribution& hist,
                    std::ostream& out) {
  check_same_case(report, hist);

  const int k_bins = static_cast<int>(hist.probs.size());
  double y_max = 0.0;
  for (double v : hist.probs) y_max = std::max(y_max, v);
  for (double v : report.density) y_max = std::max(y_max, v);
  if (!(y_max > 0.0)) y_max = 1.0;
  y_max *= 1.05;

  auto px = [&](double k) {
    return kLeft + (k - 1.0) / (k_bins - 1.0) * (kRight - kLeft);
  };
  auto py = [&](double v) {
    return kBottom - v / y_max * (kBottom - kTop);
  };
  auto fmt = [](double v) { return detail::format_fixed(v, 2); };

  auto polyline = [&](const std::vector<double>& values, const char* cls,
                      const char* color) {
    out << "  <polyline class=\"" << cls << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k) out << ' ';
      out << fmt(px(static_cast<double>(k + 1))) << ',' << fmt(py(values[k]));
    }
    out << "\"/>\n";
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "  <title>" << xml_escape(report.case_id) << "</title>\n";

  // axes
  out << "  <line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kBottom)
      << "\" x2=\"" << fmt(kRight) << "\" y2=\"" << fmt(kBottom)
      << "\" stroke=\"#333333\"/>\n";
  out << "  <line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop)
      << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(kBottom)
      << "\" stroke=\"#333333\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double k = 1.0 + (k_bins - 1.0) * i / 4.0;
    const double x = px(k);
    out << "  <line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kBottom)
        << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(kBottom + 6.0)
        << "\" stroke=\"#333333\"/>\n";
    out << "  <text x=\"" << fmt(x) << "\" y=\"" << fmt(kBottom + 22.0)
        << "\" font-size=\"12\" text-anchor=\"middle\">"
        << static_cast<int>(k + 0.5) << "</text>\n";

    const double v = y_max * i / 4.0;
    const double y = py(v);
    out << "  <line x1=\"" << fmt(kLeft - 6.0) << "\" y1=\"" << fmt(y)
        << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#333333\"/>\n";
    out << "  <text x=\"" << fmt(kLeft - 10.0) << "\" y=\"" << fmt(y + 4.0)
        << "\" font-size=\"12\" text-anchor=\"end\">"
        << detail::format_fixed(v, 4) << "</text>\n";
  }

  polyline(hist.probs, "histogram", "#c0392b");
  polyline(report.density, "quasi", "#2980b9");

  out << "  <text x=\"" << fmt(kRight - 10.0) << "\" y=\"" << fmt(kTop + 16.0)
      << "\" font-size=\"14\" text-anchor=\"end\">zero = "
      << detail::format_fixed(report.zero_fraction, 4) << "</text>\n";
  out << "</svg>\n";
}

void write_plot_csv(const FitReport& report, const HistogramDistribution& hist,
                    std::ostream& out) {
  check_same_case(report, hist);
  out << "k,prob,fit\n";
  for (std::size_t k = 0; k < hist.probs.size(); ++k) {
    out << (k + 1) << ',' << detail::format_double(hist.probs[k]) << ','
        << detail::format_double(report.signal.values[k]) << '\n';
  }
}

}  // namespace qdfit
