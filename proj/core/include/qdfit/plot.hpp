#pragma once

#include <iosfwd>

#include "qdfit/quasi.hpp"

namespace qdfit {

/// SVG overlay of the histogram trace and the quasi-distribution curve:
/// exactly two polyline elements, axis ticks, and a text annotation with the
/// zero fraction formatted to 4 decimals.
void write_plot_svg(const FitReport& report, const HistogramDistribution& hist,
                    std::ostream& out);

/// Companion data file, columns `k,prob,fit` (fit = the resampled signal).
void write_plot_csv(const FitReport& report, const HistogramDistribution& hist,
                    std::ostream& out);

}  // namespace qdfit
