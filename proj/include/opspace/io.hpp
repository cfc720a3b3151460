#pragma once

// JSON and CSV encodings for matrices, estimates and reports.
//
//   ComplexMatrix: {"rows": r, "cols": c, "re": [...], "im": [...]}   (row-major)
//   BlockMatrix:   {"n": n, "q": q, "m": m, "m'": m', "blocks": [{"i": i, "j": j, "re": [...], "im": [...]}]}
//                  block indices are 1-based; absent blocks are zero.

#include "opspace/crplab.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace opspace {

using Json = nlohmann::ordered_json;

Json to_json(const ComplexMatrix& x);
ComplexMatrix complex_matrix_from_json(const Json& j);

Json to_json(const BlockMatrix& x);
BlockMatrix block_matrix_from_json(const Json& j);

/// Numbers for finite p, the string "inf" otherwise.
Json to_json(const PExponent& p);
PExponent exponent_from_json(const Json& j);

Json to_json(const NormEstimate& est, bool include_witness = true);
Json to_json(const LemmaOutcome& outcome);
Json to_json(const S1ContractionReport& report);
Json to_json(const CrpReport& report);
Json to_json(const SandwichProbe& probe);
Json to_json(const CmpCampaign& campaign);

/// Header "n,p,row_lower,col_upper,ratio_lower,target" and one line per n.
std::string to_csv(const CrpReport& report);

/// Shortest round-trip decimal form; "inf" for infinity.
std::string format_number(double value);

/// Reads a file holding either a ComplexMatrix or a BlockMatrix document.
std::variant<ComplexMatrix, BlockMatrix> read_matrix_file(const std::string& path);

/// Thrown for malformed input documents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opspace
