#pragma once

// Elements of M_{n,q}(E) where E sits inside the m x m' matrices.

#include "opspace/matcore.hpp"

#include <span>
#include <vector>

namespace opspace {

/// An n x q matrix whose entries ("blocks") are m x m' complex matrices.
/// Indices are 0-based. Columns are the case q = 1, rows the case n = 1.
class BlockMatrix {
 public:
  /// All-zero block matrix.
  BlockMatrix(Eigen::Index n, Eigen::Index q, Eigen::Index m, Eigen::Index m_prime);

  /// Column [x_1; ...; x_n] (q = 1). All entries must share one shape.
  static BlockMatrix column(std::span<const ComplexMatrix> entries);
  /// Row [x_1 ... x_n] (n = 1).
  static BlockMatrix row(std::span<const ComplexMatrix> entries);

  Eigen::Index outer_rows() const { return n_; }
  Eigen::Index outer_cols() const { return q_; }
  Eigen::Index inner_rows() const { return m_; }
  Eigen::Index inner_cols() const { return m_prime_; }
  bool is_square() const { return n_ == q_; }

  const ComplexMatrix& block(Eigen::Index i, Eigen::Index j) const;
  /// Replaces block (i, j); the shape must match the inner shape.
  void set_block(Eigen::Index i, Eigen::Index j, ComplexMatrix value);

  BlockMatrix& operator*=(Complex c);
  BlockMatrix& operator+=(const BlockMatrix& other);
  friend BlockMatrix operator*(Complex c, BlockMatrix x) { return x *= c; }
  friend BlockMatrix operator+(BlockMatrix x, const BlockMatrix& y) { return x += y; }

  /// Largest entrywise modulus of the difference; shapes must agree.
  double max_abs_diff(const BlockMatrix& other) const;

 private:
  Eigen::Index index(Eigen::Index i, Eigen::Index j) const;

  Eigen::Index n_;
  Eigen::Index q_;
  Eigen::Index m_;
  Eigen::Index m_prime_;
  std::vector<ComplexMatrix> blocks_;  // row-major over (i, j)
};

/// The (n m) x (q m') matrix with entry (i m + r, j m' + s) = x_ij(r, s).
ComplexMatrix flatten(const BlockMatrix& x);

/// Inverse of flatten for the given block shape.
BlockMatrix unflatten(const ComplexMatrix& flat, Eigen::Index m, Eigen::Index m_prime);

/// t(x) = [x_ji]: swaps outer indices, leaves blocks untouched.
BlockMatrix block_transpose(const BlockMatrix& x);

/// [x_ij^T]: transposes every block in place, outer positions unchanged.
/// This is the amplification id_{M_N} (x) t of the transpose map on entries.
BlockMatrix entry_transpose(const BlockMatrix& x);

/// Entrywise complex conjugate.
BlockMatrix conjugate(const BlockMatrix& x);

/// Scalar factors (a, b) of a two-sided compression a x b.
struct CompressionPair {
  ComplexMatrix a;
  ComplexMatrix b;
};

/// a x b with scalar a (n x n) and b (q x q):
/// block (i, j) = sum_{k,l} a(i,k) x_kl b(l,j).
BlockMatrix compress(const ComplexMatrix& a, const BlockMatrix& x, const ComplexMatrix& b);

/// Embeds x into the max(n, q) square case by appending zero blocks.
BlockMatrix pad_to_square(const BlockMatrix& x);

}  // namespace opspace
