#pragma once

// Estimation of the vector-valued norm
//
//   ||x||_{M_n(S_p^m)} = sup { ||a x b||_{S_p(C^n (x) C^m)} : ||a||_{2p} <= 1, ||b||_{2p} <= 1 }.
//
// The supremum maximizes a convex function over a product of convex bodies,
// so local ascent only ever yields lower bounds. Every estimate therefore
// carries a certified lower bound (the objective re-evaluated at a stored
// feasible witness) and, separately, an upper bound from closed forms that
// hold for every x.

#include "opspace/opmatrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace opspace {

enum class Method {
  kExactSvd,
  kExactOh,
  kWitness,
  kOptimizer,
  kDualPairing,
  kInterpolation,
  kCbBound,
};

std::string to_string(Method method);

enum class StepRule {
  kPower,     // maximize the linearization over the S_{2p} ball (monotone for convex objectives)
  kGradient,  // gradient step, renormalize to the S_{2p} sphere, backtrack until the objective rises
};

std::string to_string(StepRule rule);
StepRule parse_step_rule(std::string_view text);

struct OptimizerConfig {
  int restarts = 64;
  int max_iters = 500;
  StepRule step_rule = StepRule::kPower;
  double tol = 1e-10;
  std::uint64_t seed = 42;
  int threads = 0;  // 0 = OPSPACE_THREADS or hardware

  /// Throws std::invalid_argument on restarts < 1, max_iters < 1 or tol <= 0.
  void validate() const;
};

struct NormWitness {
  ComplexMatrix a;
  ComplexMatrix b;
  std::optional<BlockMatrix> y;  // only for the dual pairing estimator
};

struct NormEstimate {
  double lower = 0.0;
  std::optional<double> upper;  // empty when no upper bound is known
  std::vector<Method> methods;  // sorted, unique
  std::optional<NormWitness> witness;
  PExponent p = PExponent::infinity();
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  int restarts = 0;
  std::uint64_t seed = 0;

  bool has(Method method) const;
  void add(Method method);
};

/// Extra information a caller may know about x.
struct NormHints {
  /// Starting points for additional ascent runs (run after the random ones).
  std::vector<CompressionPair> warm_starts;
  /// A certified upper bound for ||x||_{M_n(S_1)}; used directly at p = 1 and
  /// as the S_1 endpoint of the interpolation bound for 1 < p < 2.
  std::optional<double> s1_upper;
};

/// Derivative of ||.||_p at m: with m = U S V^*, U diag(s_i^{p-1}) V^* / ||m||_p^{p-1},
/// so that d||m||_p = Re tr(G^* dm). For p = 1 returns the subgradient U_r V_r^*
/// over the nonzero singular values; for p = inf returns u_1 v_1^*.
/// Throws std::invalid_argument for the zero matrix.
ComplexMatrix schatten_gradient(const ComplexMatrix& m, const PExponent& p);

/// g(a, b) = ||flatten(compress(a, x, b))||_p. x must be square (or padded).
double compression_objective(const BlockMatrix& x, const PExponent& p, const ComplexMatrix& a,
                             const ComplexMatrix& b);

struct AscentResult {
  double value = 0.0;   // certified: recomputed through compress + flatten
  ComplexMatrix a;
  ComplexMatrix b;
  int completed_runs = 0;
};

/// Multi-start alternating ascent for g over the unit spheres of S_{2p}^n,
/// run generically for any p in [1, inf]. Run r draws its start from a
/// stream derived from (cfg.seed, r), so the result is independent of thread
/// scheduling and non-decreasing in cfg.restarts.
AscentResult compression_ascent(const BlockMatrix& x, const PExponent& p, const OptimizerConfig& cfg,
                                const std::vector<CompressionPair>& warm_starts = {});

/// Estimate of ||x||_{M_n(S_p)}. p = inf and p = 2 are exact (operator norm of
/// the flattening, OH norm); otherwise lower comes from compression_ascent and
/// upper from the smallest available closed-form bound.
NormEstimate mn_schatten_norm(const BlockMatrix& x, const PExponent& p, const OptimizerConfig& cfg,
                              const NormHints& hints = {});

/// sum_{i,j,k,l} a_jk <x_ij, y_kl> b_li with the trace pairing <u, v> = tr(uv).
Complex dual_pairing_objective(const BlockMatrix& x, const ComplexMatrix& a, const ComplexMatrix& b,
                               const BlockMatrix& y);

/// Lower bound for ||x||_{M_n(S_1)} through the dual formula
/// sup |dual_pairing_objective| over ||a||_2, ||b||_2 <= 1 and
/// ||flatten(y)||_op <= 1, by alternating exact best responses.
NormEstimate m1_norm_dual(const BlockMatrix& x, const OptimizerConfig& cfg);

/// Complex interpolation bound. For p > 2: N_inf^{1-theta} N_2^theta with
/// theta = 2/p, both endpoints exact. For p < 2: N_1^{1-theta} N_2^theta with
/// theta = 2/p' and N_1 a certified upper bound supplied by the caller.
/// Throws std::invalid_argument when p < 2 and s1_upper is missing.
double interpolation_upper(const BlockMatrix& x, const PExponent& p,
                           std::optional<double> s1_upper = std::nullopt);

/// Bounds valid for every x: ||x||_{M_n(S_p)} <= ||flatten(x)||_p (since
/// ||a||_inf <= ||a||_{2p}) and <= sum_ij ||x_ij||_p (triangle inequality).
double elementary_upper(const BlockMatrix& x, const PExponent& p);

}  // namespace opspace
