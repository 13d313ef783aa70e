#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qdfit {

struct NodeDisplacement {
  std::int64_t node_id = 0;
  double ux = 0.0;
  double uy = 0.0;
  double uz = 0.0;
};

struct DisplacementField {
  std::string case_id;
  std::vector<NodeDisplacement> nodes;

  std::size_t n_total() const { return nodes.size(); }
};

struct DeformationMagnitudes {
  std::vector<double> values;  // 1-norm per node, same order as the field
  double v_min = 0.0;
  double v_max = 0.0;
  std::size_t zero_count = 0;
};

/// 1-norm of the displacement vector: |ux| + |uy| + |uz|.
double displacement_norm(const NodeDisplacement& v);

/// Parses the `node_id,ux,uy,uz` CSV format. `#`-prefixed comment lines and
/// blank lines are skipped; LF and CRLF both accepted. Throws ParseError with
/// the offending line number on malformed rows, duplicate node ids,
/// non-finite components, or fewer than 2 data rows.
DisplacementField parse_displacement_csv(std::istream& in, std::string case_id);

/// Full-precision output; parse_displacement_csv(write_displacement_csv(f))
/// reproduces every value exactly.
void write_displacement_csv(const DisplacementField& field, std::ostream& out);

/// Opens `path` and parses it. case_id defaults to the filename stem.
DisplacementField read_displacement_file(const std::string& path,
                                         std::string case_id = "");

DeformationMagnitudes field_magnitudes(const DisplacementField& field);

}  // namespace qdfit
