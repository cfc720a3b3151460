#include "opspace/matcore.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace opspace {

PExponent PExponent::finite(double p) {
  if (!std::isfinite(p)) {
    if (p > 0 && std::isinf(p)) return infinity();
    throw std::invalid_argument("Schatten exponent must be a number");
  }
  if (p < 1.0) {
    throw std::invalid_argument(fmt::format("Schatten exponent must be >= 1, got {}", p));
  }
  return PExponent{p};
}

PExponent PExponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "oo") return infinity();
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument(fmt::format("cannot parse exponent '{}'", text));
  }
  return finite(value);
}

double PExponent::value() const {
  if (infinite_) throw std::logic_error("PExponent::value called on p = inf");
  return p_;
}

PExponent PExponent::conjugate() const {
  if (infinite_) return PExponent{1.0};
  if (p_ == 1.0) return infinity();
  return PExponent{p_ / (p_ - 1.0)};
}

double PExponent::theta() const {
  if (infinite_) return 0.0;
  if (p_ >= 2.0) return 2.0 / p_;
  // 2/p' = 2(1 - 1/p)
  return 2.0 * (1.0 - 1.0 / p_);
}

PExponent PExponent::doubled() const {
  if (infinite_) return infinity();
  return PExponent{2.0 * p_};
}

std::string PExponent::to_string() const {
  if (infinite_) return "inf";
  return fmt::format("{}", p_);
}

void require_finite(const ComplexMatrix& x, std::string_view what) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Complex z = x(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::invalid_argument(fmt::format("{} has a non-finite entry at ({}, {})", what, i, j));
      }
    }
  }
}

Svd svd(const ComplexMatrix& x) {
  require_finite(x, "svd input");
  if (x.size() == 0) return {ComplexMatrix(x.rows(), 0), RealVector(0), ComplexMatrix(x.cols(), 0)};
  Eigen::JacobiSVD<ComplexMatrix> solver(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

RealVector svd_values(const ComplexMatrix& x) {
  require_finite(x, "svd input");
  if (x.size() == 0) return RealVector(0);
  Eigen::JacobiSVD<ComplexMatrix> solver(x);
  return solver.singularValues();
}

double schatten_norm(const RealVector& singular_values, const PExponent& p) {
  if (singular_values.size() == 0) return 0.0;
  const double top = singular_values.maxCoeff();
  if (p.is_infinite() || top == 0.0) return top;
  const double q = p.value();
  // Scale by the largest value so sigma^p cannot overflow or underflow to 0.
  double sum = 0.0;
  for (double s : singular_values) sum += std::pow(s / top, q);
  return top * std::pow(sum, 1.0 / q);
}

double schatten_norm(const ComplexMatrix& x, const PExponent& p) {
  if (!p.is_infinite() && p.value() == 2.0) {
    require_finite(x, "schatten_norm input");
    return x.norm();
  }
  return schatten_norm(svd_values(x), p);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Complex trace_pairing(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.cols() != v.rows() || u.rows() != v.cols()) {
    throw std::invalid_argument(fmt::format("trace_pairing: shapes {}x{} and {}x{} are not dual",
                                            u.rows(), u.cols(), v.rows(), v.cols()));
  }
  // tr(uv) = sum_{i,k} u(i,k) v(k,i)
  return (u.array() * v.transpose().array()).sum();
}

Complex hs_inner(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw std::invalid_argument(fmt::format("hs_inner: shapes {}x{} and {}x{} differ", u.rows(),
                                            u.cols(), v.rows(), v.cols()));
  }
  return (u.array() * v.array().conjugate()).sum();
}

}  // namespace opspace
