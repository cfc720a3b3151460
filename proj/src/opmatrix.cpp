#include "opspace/opmatrix.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace opspace {

BlockMatrix::BlockMatrix(Eigen::Index n, Eigen::Index q, Eigen::Index m, Eigen::Index m_prime)
    : n_(n), q_(q), m_(m), m_prime_(m_prime) {
  if (n < 1 || q < 1 || m < 1 || m_prime < 1) {
    throw std::invalid_argument(
        fmt::format("BlockMatrix dimensions must be positive, got n={} q={} m={} m'={}", n, q, m,
                    m_prime));
  }
  blocks_.assign(static_cast<std::size_t>(n * q), ComplexMatrix::Zero(m, m_prime));
}

namespace {

BlockMatrix from_line(std::span<const ComplexMatrix> entries, bool as_column) {
  if (entries.empty()) throw std::invalid_argument("cannot build a column or row from no entries");
  const auto len = static_cast<Eigen::Index>(entries.size());
  const auto m = entries.front().rows();
  const auto mp = entries.front().cols();
  BlockMatrix out(as_column ? len : 1, as_column ? 1 : len, m, mp);
  for (Eigen::Index k = 0; k < len; ++k) {
    if (as_column) {
      out.set_block(k, 0, entries[static_cast<std::size_t>(k)]);
    } else {
      out.set_block(0, k, entries[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

}  // namespace

BlockMatrix BlockMatrix::column(std::span<const ComplexMatrix> entries) {
  return from_line(entries, true);
}

BlockMatrix BlockMatrix::row(std::span<const ComplexMatrix> entries) {
  return from_line(entries, false);
}

Eigen::Index BlockMatrix::index(Eigen::Index i, Eigen::Index j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= q_) {
    throw std::out_of_range(fmt::format("block ({}, {}) outside {}x{}", i, j, n_, q_));
  }
  return i * q_ + j;
}

const ComplexMatrix& BlockMatrix::block(Eigen::Index i, Eigen::Index j) const {
  return blocks_[static_cast<std::size_t>(index(i, j))];
}

void BlockMatrix::set_block(Eigen::Index i, Eigen::Index j, ComplexMatrix value) {
  if (value.rows() != m_ || value.cols() != m_prime_) {
    throw std::invalid_argument(fmt::format("block shape {}x{} does not match inner shape {}x{}",
                                            value.rows(), value.cols(), m_, m_prime_));
  }
  require_finite(value, "block");
  blocks_[static_cast<std::size_t>(index(i, j))] = std::move(value);
}

BlockMatrix& BlockMatrix::operator*=(Complex c) {
  for (auto& b : blocks_) b *= c;
  return *this;
}

BlockMatrix& BlockMatrix::operator+=(const BlockMatrix& other) {
  if (other.n_ != n_ || other.q_ != q_ || other.m_ != m_ || other.m_prime_ != m_prime_) {
    throw std::invalid_argument("BlockMatrix addition requires identical shapes");
  }
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

double BlockMatrix::max_abs_diff(const BlockMatrix& other) const {
  if (other.n_ != n_ || other.q_ != q_ || other.m_ != m_ || other.m_prime_ != m_prime_) {
    throw std::invalid_argument("BlockMatrix comparison requires identical shapes");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    worst = std::max(worst, (blocks_[k] - other.blocks_[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

ComplexMatrix flatten(const BlockMatrix& x) {
  const auto m = x.inner_rows();
  const auto mp = x.inner_cols();
  ComplexMatrix out(x.outer_rows() * m, x.outer_cols() * mp);
  for (Eigen::Index i = 0; i < x.outer_rows(); ++i) {
    for (Eigen::Index j = 0; j < x.outer_cols(); ++j) {
      out.block(i * m, j * mp, m, mp) = x.block(i, j);
    }
  }
  return out;
}

BlockMatrix unflatten(const ComplexMatrix& flat, Eigen::Index m, Eigen::Index m_prime) {
  if (m < 1 || m_prime < 1 || flat.rows() % m != 0 || flat.cols() % m_prime != 0) {
    throw std::invalid_argument(fmt::format("cannot split {}x{} into {}x{} blocks", flat.rows(),
                                            flat.cols(), m, m_prime));
  }
  BlockMatrix out(flat.rows() / m, flat.cols() / m_prime, m, m_prime);
  for (Eigen::Index i = 0; i < out.outer_rows(); ++i) {
    for (Eigen::Index j = 0; j < out.outer_cols(); ++j) {
      out.set_block(i, j, flat.block(i * m, j * m_prime, m, m_prime));
    }
  }
  return out;
}

BlockMatrix block_transpose(const BlockMatrix& x) {
  BlockMatrix out(x.outer_cols(), x.outer_rows(), x.inner_rows(), x.inner_cols());
  for (Eigen::Index i = 0; i < x.outer_rows(); ++i) {
    for (Eigen::Index j = 0; j < x.outer_cols(); ++j) out.set_block(j, i, x.block(i, j));
  }
  return out;
}

BlockMatrix entry_transpose(const BlockMatrix& x) {
  BlockMatrix out(x.outer_rows(), x.outer_cols(), x.inner_cols(), x.inner_rows());
  for (Eigen::Index i = 0; i < x.outer_rows(); ++i) {
    for (Eigen::Index j = 0; j < x.outer_cols(); ++j) out.set_block(i, j, x.block(i, j).transpose());
  }
  return out;
}

BlockMatrix conjugate(const BlockMatrix& x) {
  BlockMatrix out(x.outer_rows(), x.outer_cols(), x.inner_rows(), x.inner_cols());
  for (Eigen::Index i = 0; i < x.outer_rows(); ++i) {
    for (Eigen::Index j = 0; j < x.outer_cols(); ++j) out.set_block(i, j, x.block(i, j).conjugate());
  }
  return out;
}

BlockMatrix compress(const ComplexMatrix& a, const BlockMatrix& x, const ComplexMatrix& b) {
  const auto n = x.outer_rows();
  const auto q = x.outer_cols();
  if (a.rows() != n || a.cols() != n || b.rows() != q || b.cols() != q) {
    throw std::invalid_argument(fmt::format(
        "compress: a is {}x{}, b is {}x{}, but x has outer shape {}x{}", a.rows(), a.cols(),
        b.rows(), b.cols(), n, q));
  }
  require_finite(a, "compress left factor");
  require_finite(b, "compress right factor");

  // First x b, then a (x b): two passes of n*q*q and n*n*q block updates.
  std::vector<ComplexMatrix> xb(static_cast<std::size_t>(n * q));
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < q; ++j) {
      ComplexMatrix acc = ComplexMatrix::Zero(x.inner_rows(), x.inner_cols());
      for (Eigen::Index l = 0; l < q; ++l) {
        if (b(l, j) != Complex{}) acc += b(l, j) * x.block(k, l);
      }
      xb[static_cast<std::size_t>(k * q + j)] = std::move(acc);
    }
  }
  BlockMatrix out(n, q, x.inner_rows(), x.inner_cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) {
      ComplexMatrix acc = ComplexMatrix::Zero(x.inner_rows(), x.inner_cols());
      for (Eigen::Index k = 0; k < n; ++k) {
        if (a(i, k) != Complex{}) acc += a(i, k) * xb[static_cast<std::size_t>(k * q + j)];
      }
      out.set_block(i, j, std::move(acc));
    }
  }
  return out;
}

BlockMatrix pad_to_square(const BlockMatrix& x) {
  if (x.is_square()) return x;
  const auto side = std::max(x.outer_rows(), x.outer_cols());
  BlockMatrix out(side, side, x.inner_rows(), x.inner_cols());
  for (Eigen::Index i = 0; i < x.outer_rows(); ++i) {
    for (Eigen::Index j = 0; j < x.outer_cols(); ++j) out.set_block(i, j, x.block(i, j));
  }
  return out;
}

}  // namespace opspace
