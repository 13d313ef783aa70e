#pragma once

#include <iosfwd>
#include <string>

#include "qdfit/quasi.hpp"

namespace qdfit {

/// Self-contained report with a stable key order; embeds the histogram, the
/// resampled fit signal, the control points and the quasi density.
std::string report_to_json(const FitReport& report);

/// Inverse of report_to_json. Throws ParseError on malformed input.
FitReport report_from_json(const std::string& text);

std::string report_summary_header();
std::string report_summary_row(const FitReport& report);

/// Header plus one summary row per case, ascending variance.
void write_ranking_csv(const RankedCases& ranked, std::ostream& out);

}  // namespace qdfit
