#pragma once

// Dense complex matrix substrate: SVD, Schatten norms, Kronecker products
// and the two trace pairings used throughout the library.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace opspace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Raised when a computation meets NaN/Inf or another numerical breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Schatten exponent p in [1, inf]. Infinity is a distinct state rather
/// than a large double so that sums of sigma^p never overflow.
class PExponent {
 public:
  static PExponent finite(double p);
  static PExponent infinity() { return PExponent{}; }
  /// Accepts a decimal number or "inf"/"infinity".
  static PExponent parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  /// Finite value; throws std::logic_error for p = inf.
  double value() const;
  /// 1/p, which is 0 for p = inf.
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / p_; }

  /// p' with 1/p + 1/p' = 1 (1 <-> inf).
  PExponent conjugate() const;

  /// Interpolation parameter between the endpoint pair bracketing p:
  /// for p >= 2, theta = 2/p solves 1/p = theta/2 + (1 - theta)/inf;
  /// for p <= 2, theta = 2/p' solves 1/p = (1 - theta)/1 + theta/2.
  double theta() const;

  /// 2p, used for the S_{2p} balls of the vector-valued norm.
  PExponent doubled() const;

  std::string to_string() const;

  friend bool operator==(const PExponent& a, const PExponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
  }

 private:
  PExponent() = default;
  explicit PExponent(double p) : p_(p), infinite_(false) {}

  double p_ = 0.0;
  bool infinite_ = true;
};

struct Svd {
  ComplexMatrix u;       // rows x k
  RealVector sigma;      // k, descending
  ComplexMatrix v;       // cols x k
};

/// Throws std::invalid_argument if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& x, std::string_view what = "matrix");

/// Thin SVD x = u * diag(sigma) * v^*, sigma descending.
Svd svd(const ComplexMatrix& x);

/// min(rows, cols) singular values, descending.
RealVector svd_values(const ComplexMatrix& x);

double schatten_norm(const RealVector& singular_values, const PExponent& p);
double schatten_norm(const ComplexMatrix& x, const PExponent& p);

inline double operator_norm(const ComplexMatrix& x) {
  return schatten_norm(x, PExponent::infinity());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// <u, v> = tr(u v), the bilinear pairing between S_p and S_p'.
Complex trace_pairing(const ComplexMatrix& u, const ComplexMatrix& v);

/// <u, v> = tr(u v^*), the Hilbert-Schmidt inner product.
Complex hs_inner(const ComplexMatrix& u, const ComplexMatrix& v);

}  // namespace opspace
