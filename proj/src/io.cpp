#include "opspace/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace opspace {

namespace {

Json real_parts(const ComplexMatrix& x) {
  Json re = Json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) re.push_back(x(i, j).real());
  }
  return re;
}

Json imag_parts(const ComplexMatrix& x) {
  Json im = Json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) im.push_back(x(i, j).imag());
  }
  return im;
}

Eigen::Index positive_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 1) {
    throw FormatError(fmt::format("field '{}' must be a positive integer", key));
  }
  return static_cast<Eigen::Index>(j.at(key).get<long long>());
}

// Fills an r x c matrix from row-major "re" (required) and "im" (optional) arrays.
ComplexMatrix entries_from(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.contains("re") || !j.at("re").is_array()) throw FormatError("field 're' must be an array");
  const auto& re = j.at("re");
  const bool has_im = j.contains("im");
  if (has_im && !j.at("im").is_array()) throw FormatError("field 'im' must be an array");
  const auto expected = static_cast<std::size_t>(rows * cols);
  if (re.size() != expected || (has_im && j.at("im").size() != expected)) {
    throw FormatError(fmt::format("expected {} entries for a {}x{} matrix", expected, rows, cols));
  }
  ComplexMatrix x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(i * cols + c);
      if (!re[k].is_number() || (has_im && !j.at("im")[k].is_number())) {
        throw FormatError("matrix entries must be numbers");
      }
      const double r = re[k].get<double>();
      const double im = has_im ? j.at("im")[k].get<double>() : 0.0;
      if (!std::isfinite(r) || !std::isfinite(im)) throw FormatError("matrix entries must be finite");
      x(i, c) = Complex{r, im};
    }
  }
  return x;
}

Json optional_number(std::optional<double> value) {
  if (!value || !std::isfinite(*value)) return nullptr;
  return *value;
}

}  // namespace

Json to_json(const ComplexMatrix& x) {
  Json j;
  j["rows"] = x.rows();
  j["cols"] = x.cols();
  j["re"] = real_parts(x);
  j["im"] = imag_parts(x);
  return j;
}

ComplexMatrix complex_matrix_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("a matrix must be a JSON object");
  return entries_from(j, positive_int(j, "rows"), positive_int(j, "cols"));
}

Json to_json(const BlockMatrix& x) {
  Json j;
  j["n"] = x.outer_rows();
  j["q"] = x.outer_cols();
  j["m"] = x.inner_rows();
  j["m'"] = x.inner_cols();
  Json blocks = Json::array();
  for (Eigen::Index i = 0; i < x.outer_rows(); ++i) {
    for (Eigen::Index k = 0; k < x.outer_cols(); ++k) {
      Json b;
      b["i"] = i + 1;
      b["j"] = k + 1;
      b["re"] = real_parts(x.block(i, k));
      b["im"] = imag_parts(x.block(i, k));
      blocks.push_back(std::move(b));
    }
  }
  j["blocks"] = std::move(blocks);
  return j;
}

BlockMatrix block_matrix_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("a block matrix must be a JSON object");
  const auto n = positive_int(j, "n");
  const auto q = positive_int(j, "q");
  const auto m = positive_int(j, "m");
  const auto mp = j.contains("m'") ? positive_int(j, "m'") : positive_int(j, "m_prime");
  BlockMatrix x(n, q, m, mp);
  if (!j.contains("blocks") || !j.at("blocks").is_array()) throw FormatError("field 'blocks' must be an array");
  for (const auto& b : j.at("blocks")) {
    const auto i = positive_int(b, "i");
    const auto k = positive_int(b, "j");
    if (i > n || k > q) throw FormatError(fmt::format("block ({}, {}) outside {}x{}", i, k, n, q));
    x.set_block(i - 1, k - 1, entries_from(b, m, mp));
  }
  return x;
}

Json to_json(const PExponent& p) {
  if (p.is_infinite()) return "inf";
  return p.value();
}

PExponent exponent_from_json(const Json& j) {
  if (j.is_string()) return PExponent::parse(j.get<std::string>());
  if (j.is_number()) return PExponent::finite(j.get<double>());
  throw FormatError("an exponent must be a number or \"inf\"");
}

Json to_json(const NormEstimate& est, bool include_witness) {
  Json j;
  j["lower"] = est.lower;
  j["upper"] = optional_number(est.upper);
  Json methods = Json::array();
  for (auto m : est.methods) methods.push_back(to_string(m));
  j["method"] = std::move(methods);
  if (include_witness && est.witness) {
    Json w;
    w["a"] = to_json(est.witness->a);
    w["b"] = to_json(est.witness->b);
    if (est.witness->y) w["y"] = to_json(*est.witness->y);
    j["witness"] = std::move(w);
  }
  j["p"] = to_json(est.p);
  j["n"] = est.n;
  j["m"] = est.m;
  j["restarts"] = est.restarts;
  j["seed"] = est.seed;
  return j;
}

Json to_json(const LemmaOutcome& outcome) {
  Json j;
  j["lemma"] = outcome.lemma;
  j["n"] = outcome.n;
  j["p"] = outcome.p ? to_json(*outcome.p) : Json(nullptr);
  j["expected"] = outcome.expected;
  j["observed"] = outcome.observed;
  j["tolerance"] = outcome.tolerance;
  j["one_sided"] = outcome.upper_bound_only;
  j["pass"] = outcome.pass;
  return j;
}

Json to_json(const S1ContractionReport& report) {
  Json j;
  j["lemma"] = "s1-contraction";
  j["n"] = report.n;
  j["trials"] = report.trials;
  j["max_lhs"] = report.max_lhs;
  j["bound"] = 1.0;
  j["pass"] = report.pass;
  return j;
}

Json to_json(const CrpReport& report) {
  Json j;
  j["p"] = to_json(report.p);
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r;
    r["n"] = row.n;
    r["row_norm"] = to_json(row.row_norm, false);
    r["col_norm"] = to_json(row.col_norm, false);
    r["ratio_lower"] = row.ratio_lower;
    r["certified"] = row.certified;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["fitted_exponent"] = report.fitted_exponent;
  j["target_exponent"] = report.target_exponent;
  return j;
}

Json to_json(const SandwichProbe& probe) {
  Json j;
  j["p"] = to_json(probe.p);
  j["n"] = probe.n;
  j["lower"] = probe.lower;
  j["upper"] = probe.upper;
  j["optimizer_best"] = probe.optimizer_best;
  j["within"] = probe.within;
  return j;
}

Json to_json(const CmpCampaign& campaign) {
  Json j;
  j["samples"] = campaign.samples;
  j["failures"] = campaign.failures;
  j["worst_margin"] = campaign.worst_margin;
  j["pass"] = campaign.failures == 0;
  return j;
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

std::string to_csv(const CrpReport& report) {
  std::string out = "n,p,row_lower,col_upper,ratio_lower,target\n";
  const std::string p = report.p.to_string();
  for (const auto& row : report.rows) {
    const double target = std::pow(static_cast<double>(row.n), report.target_exponent);
    out += fmt::format("{},{},{},{},{},{}\n", row.n, p, format_number(row.row_norm.lower),
                       format_number(row.col_norm.upper.value_or(std::nan(""))),
                       format_number(row.ratio_lower), format_number(target));
  }
  return out;
}

std::variant<ComplexMatrix, BlockMatrix> read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(fmt::format("cannot open '{}'", path));
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
  try {
    if (j.contains("blocks")) return block_matrix_from_json(j);
    return complex_matrix_from_json(j);
  } catch (const Json::exception& e) {
    throw FormatError(fmt::format("'{}': {}", path, e.what()));
  }
}

}  // namespace opspace
