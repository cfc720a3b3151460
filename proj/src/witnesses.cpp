#include "opspace/witnesses.hpp"

#include <cmath>

#include <fmt/format.h>

namespace opspace {

ComplexMatrix matrix_unit(Eigen::Index i, Eigen::Index j, Eigen::Index m) {
  if (m < 1 || i < 1 || j < 1 || i > m || j > m) {
    throw std::out_of_range(fmt::format("matrix unit E_({},{}) outside {}x{}", i, j, m, m));
  }
  ComplexMatrix e = ComplexMatrix::Zero(m, m);
  e(i - 1, j - 1) = 1.0;
  return e;
}

BlockMatrix make_A(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("make_A requires n >= 1");
  BlockMatrix x(n, n, n, n);
  for (Eigen::Index j = 1; j <= n; ++j) x.set_block(0, j - 1, matrix_unit(1, j, n));
  return x;
}

BlockMatrix make_B(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("make_B requires n >= 1");
  BlockMatrix x(n, n, n, n);
  for (Eigen::Index j = 1; j <= n; ++j) x.set_block(0, j - 1, matrix_unit(j, 1, n));
  return x;
}

CompressionPair compression_witness(Eigen::Index n, const PExponent& p) {
  if (n < 1) throw std::invalid_argument("compression_witness requires n >= 1");
  if (p.is_infinite()) throw std::invalid_argument("compression_witness is defined for finite p only");
  const double scale = std::pow(static_cast<double>(n), -1.0 / (2.0 * p.value()));
  return {matrix_unit(1, 1, n), scale * ComplexMatrix::Identity(n, n)};
}

CbTransposeWitness cb_transpose_witness(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("cb_transpose_witness requires n >= 1");
  BlockMatrix v(n, n, n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(n, 1);
    e(i, 0) = 1.0;
    v.set_block(0, i, std::move(e));
  }
  const double before = operator_norm(flatten(v));
  const double after = operator_norm(flatten(entry_transpose(v)));
  return {std::move(v), after / before};
}

WitnessName parse_witness_name(std::string_view text) {
  if (text == "A") return WitnessName::kA;
  if (text == "B") return WitnessName::kB;
  if (text == "cbt" || text == "cb-transpose") return WitnessName::kCbTranspose;
  throw std::invalid_argument(fmt::format("unknown witness family '{}' (expected A, B or cbt)", text));
}

std::string to_string(WitnessName name) {
  switch (name) {
    case WitnessName::kA: return "A";
    case WitnessName::kB: return "B";
    case WitnessName::kCbTranspose: return "cb-transpose";
  }
  return "?";
}

WitnessFamily make_family(WitnessName name, Eigen::Index n) {
  switch (name) {
    case WitnessName::kA: return {name, n, make_A(n)};
    case WitnessName::kB: return {name, n, make_B(n)};
    case WitnessName::kCbTranspose: return {name, n, cb_transpose_witness(n).v};
  }
  throw std::logic_error("unhandled witness family");
}

}  // namespace opspace
