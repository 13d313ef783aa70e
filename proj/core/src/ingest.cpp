#include "qdfit/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "qdfit/errors.hpp"
#include "text_util.hpp"

namespace qdfit {

namespace {

constexpr std::string_view kHeader = "node_id,ux,uy,uz";

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

double displacement_norm(const NodeDisplacement& v) {
  return std::abs(v.ux) + std::abs(v.uy) + std::abs(v.uz);
}

DisplacementField parse_displacement_csv(std::istream& in,
                                         std::string case_id) {
  DisplacementField field;
  field.case_id = std::move(case_id);

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::unordered_set<std::int64_t> seen_ids;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;

    if (!header_seen) {
      if (view != kHeader) {
        fail_line(line_no, "expected header '" + std::string(kHeader) +
                               "', got '" + std::string(view) + "'");
      }
      header_seen = true;
      continue;
    }

    auto fields = detail::split(view, ',');
    if (fields.size() != 4) {
      fail_line(line_no, "expected 4 comma-separated fields, got " +
                             std::to_string(fields.size()));
    }

    auto id = detail::parse_int(fields[0]);
    if (!id || *id < 1) {
      fail_line(line_no, "bad node_id '" + std::string(fields[0]) + "'");
    }
    if (!seen_ids.insert(*id).second) {
      fail_line(line_no, "duplicate node_id " + std::to_string(*id));
    }

    NodeDisplacement node;
    node.node_id = *id;
    double* comps[3] = {&node.ux, &node.uy, &node.uz};
    const char* names[3] = {"ux", "uy", "uz"};
    for (int c = 0; c < 3; ++c) {
      auto value = detail::parse_double(fields[c + 1]);
      if (!value) {
        fail_line(line_no, std::string("bad ") + names[c] + " value '" +
                               std::string(fields[c + 1]) + "'");
      }
      if (!std::isfinite(*value)) {
        fail_line(line_no, std::string("non-finite ") + names[c] + " component");
      }
      *comps[c] = *value;
    }
    field.nodes.push_back(node);
  }

  if (!header_seen) throw ParseError("empty input: missing header row");
  if (field.nodes.size() < 2) {
    throw ParseError("expected at least 2 data rows, got " +
                     std::to_string(field.nodes.size()));
  }
  return field;
}

void write_displacement_csv(const DisplacementField& field, std::ostream& out) {
  out << kHeader << '\n';
  for (const NodeDisplacement& node : field.nodes) {
    out << node.node_id << ',' << detail::format_double(node.ux) << ','
        << detail::format_double(node.uy) << ','
        << detail::format_double(node.uz) << '\n';
  }
}

DisplacementField read_displacement_file(const std::string& path,
                                         std::string case_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file: " + path);
  if (case_id.empty()) {
    case_id = std::filesystem::path(path).stem().string();
  }
  try {
    return parse_displacement_csv(in, std::move(case_id));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

DeformationMagnitudes field_magnitudes(const DisplacementField& field) {
  DeformationMagnitudes mags;
  mags.values.reserve(field.nodes.size());
  for (const NodeDisplacement& node : field.nodes) {
    double v = displacement_norm(node);
    mags.values.push_back(v);
    if (v == 0.0) ++mags.zero_count;
  }
  if (!mags.values.empty()) {
    auto [lo, hi] = std::minmax_element(mags.values.begin(), mags.values.end());
    mags.v_min = *lo;
    mags.v_max = *hi;
  }
  return mags;
}

}  // namespace qdfit
