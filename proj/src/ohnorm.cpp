#include "opspace/ohnorm.hpp"

#include <cmath>
#include <vector>

namespace opspace {

GramArrangement gram_arrangement(const BlockMatrix& input) {
  const BlockMatrix x = pad_to_square(input);
  const auto n = x.outer_rows();
  ComplexMatrix gram(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index l = 0; l < n; ++l) {
          gram(i * n + k, j * n + l) = hs_inner(x.block(i, j), x.block(k, l));
        }
      }
    }
  }
  return {n, std::move(gram)};
}

double oh_matrix_norm(const BlockMatrix& x) {
  return std::sqrt(operator_norm(gram_arrangement(x).gram));
}

double oh_column_norm(std::span<const ComplexMatrix> entries) {
  if (entries.empty()) throw std::invalid_argument("oh_column_norm of an empty sequence");
  const auto rows = entries.front().rows();
  const auto cols = entries.front().cols();
  double sum = 0.0;
  for (const auto& ai : entries) {
    if (ai.rows() != rows || ai.cols() != cols) {
      throw std::invalid_argument("oh_column_norm entries must share one shape");
    }
    for (const auto& aj : entries) sum += std::norm(hs_inner(ai, aj));
  }
  return std::pow(sum, 0.25);
}

CmpCheck cmp_check_oh(const BlockMatrix& input, double tol) {
  const BlockMatrix x = pad_to_square(input);
  const auto n = x.outer_rows();
  std::vector<ComplexMatrix> stacked;
  stacked.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) stacked.push_back(x.block(i, j));
  }
  const double matrix_norm = oh_matrix_norm(x);
  const double column_norm = oh_column_norm(stacked);
  return {matrix_norm, column_norm, matrix_norm <= column_norm + tol};
}

}  // namespace opspace
