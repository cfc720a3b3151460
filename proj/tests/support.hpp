#pragma once

#include "opspace/matcore.hpp"
#include "opspace/opmatrix.hpp"
#include "opspace/random.hpp"

#include <Eigen/QR>

namespace opspace::testing {

inline std::mt19937_64 stream(std::uint64_t index) { return seeded_stream(20261018, index, 0x7e57); }

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t index) {
  auto gen = stream(index);
  return gaussian_matrix(rows, cols, gen);
}

inline ComplexMatrix random_unitary(Eigen::Index n, std::uint64_t index) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, n, index));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

inline BlockMatrix random_blocks(Eigen::Index n, Eigen::Index q, Eigen::Index m, Eigen::Index mp,
                                 std::uint64_t index) {
  auto gen = stream(index);
  BlockMatrix x(n, q, m, mp);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) x.set_block(i, j, gaussian_matrix(m, mp, gen));
  }
  return x;
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix d = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                        static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double v : values) d(k, k) = v, ++k;
  return d;
}

inline double max_abs_diff(const BlockMatrix& a, const BlockMatrix& b) { return a.max_abs_diff(b); }

inline PExponent P(double p) { return PExponent::finite(p); }
inline const PExponent kInf = PExponent::infinity();

}  // namespace opspace::testing
