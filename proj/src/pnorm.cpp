#include "opspace/pnorm.hpp"

#include "opspace/ohnorm.hpp"
#include "opspace/parallel.hpp"
#include "opspace/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace opspace {

std::string to_string(Method method) {
  switch (method) {
    case Method::kExactSvd: return "exact-svd";
    case Method::kExactOh: return "exact-oh";
    case Method::kWitness: return "witness";
    case Method::kOptimizer: return "optimizer";
    case Method::kDualPairing: return "dual-pairing";
    case Method::kInterpolation: return "interpolation";
    case Method::kCbBound: return "cb-bound";
  }
  return "?";
}

std::string to_string(StepRule rule) {
  return rule == StepRule::kPower ? "power" : "gradient";
}

StepRule parse_step_rule(std::string_view text) {
  if (text == "power") return StepRule::kPower;
  if (text == "gradient") return StepRule::kGradient;
  throw std::invalid_argument(fmt::format("unknown step rule '{}' (expected power or gradient)", text));
}

void OptimizerConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("optimizer restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("optimizer max_iters must be >= 1");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("optimizer tol must be > 0");
  if (threads < 0) throw std::invalid_argument("optimizer threads must be >= 0");
}

bool NormEstimate::has(Method method) const {
  return std::find(methods.begin(), methods.end(), method) != methods.end();
}

void NormEstimate::add(Method method) {
  if (has(method)) return;
  methods.push_back(method);
  std::sort(methods.begin(), methods.end());
}

ComplexMatrix schatten_gradient(const ComplexMatrix& m, const PExponent& p) {
  const Svd f = svd(m);
  if (f.sigma.size() == 0 || f.sigma(0) == 0.0) {
    throw std::invalid_argument("schatten_gradient is undefined at the zero matrix");
  }
  const double top = f.sigma(0);
  const auto k = f.sigma.size();
  RealVector weights = RealVector::Zero(k);
  if (p.is_infinite()) {
    weights(0) = 1.0;
  } else if (p.value() == 1.0) {
    const double cutoff = top * 1e-13 * static_cast<double>(std::max(m.rows(), m.cols()));
    for (Eigen::Index i = 0; i < k; ++i) weights(i) = f.sigma(i) > cutoff ? 1.0 : 0.0;
  } else {
    const double q = p.value();
    const double norm = schatten_norm(f.sigma, p);
    for (Eigen::Index i = 0; i < k; ++i) weights(i) = std::pow(f.sigma(i) / norm, q - 1.0);
  }
  return f.u * weights.asDiagonal() * f.v.adjoint();
}

double compression_objective(const BlockMatrix& x, const PExponent& p, const ComplexMatrix& a,
                             const ComplexMatrix& b) {
  return schatten_norm(flatten(compress(a, x, b)), p);
}

namespace {

// Maximizer of Re tr(g^* z) over the unit ball of S_r: the gradient of the
// dual norm ||.||_{r'} at g.
ComplexMatrix dual_extremizer(const ComplexMatrix& g, const PExponent& r) {
  return schatten_gradient(g, r.conjugate());
}

// n x n matrix of traces of the block x block sub-matrices of z.
ComplexMatrix partial_trace(const ComplexMatrix& z, Eigen::Index n, Eigen::Index block) {
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = z.block(i * block, j * block, block, block).trace();
  }
  return out;
}

void require_all_finite(const ComplexMatrix& z) {
  if (!z.allFinite()) throw NumericalError("non-finite intermediate value");
}

ComplexMatrix to_sphere(const ComplexMatrix& z, const PExponent& r) {
  const double norm = schatten_norm(z, r);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("cannot normalize a degenerate point");
  return z / norm;
}

// Single ascent run of g(a, b) = ||(a (x) I_m) X (b (x) I_m')||_p with X the flattening.
class CompressionAscent {
 public:
  CompressionAscent(const BlockMatrix& x, const PExponent& p, const OptimizerConfig& cfg)
      : flat_(flatten(x)),
        n_(x.outer_rows()),
        m_(x.inner_rows()),
        m_prime_(x.inner_cols()),
        p_(p),
        ball_(p.doubled()),
        cfg_(cfg),
        id_m_(ComplexMatrix::Identity(m_, m_)),
        id_m_prime_(ComplexMatrix::Identity(m_prime_, m_prime_)) {}

  CompressionPair run(CompressionPair start) const {
    ComplexMatrix a = to_sphere(start.a, ball_);
    ComplexMatrix b = to_sphere(start.b, ball_);
    double value = objective(a, b);
    double step_a = 1.0;
    double step_b = 1.0;
    for (int iter = 0; iter < cfg_.max_iters; ++iter) {
      const double before = value;
      value = update_a(a, b, value, step_a);
      value = update_b(a, b, value, step_b);
      if (!std::isfinite(value)) throw NumericalError("objective became non-finite");
      if (value - before <= cfg_.tol * std::max(1.0, before)) break;
    }
    return {std::move(a), std::move(b)};
  }

 private:
  double objective(const ComplexMatrix& a, const ComplexMatrix& b) const {
    return schatten_norm(ComplexMatrix(left(a) * flat_ * right(b)), p_);
  }

  ComplexMatrix left(const ComplexMatrix& a) const { return kron(a, id_m_); }
  ComplexMatrix right(const ComplexMatrix& b) const { return kron(b, id_m_prime_); }

  double update_a(ComplexMatrix& a, const ComplexMatrix& b, double value, double& step) const {
    const ComplexMatrix y = flat_ * right(b);
    const ComplexMatrix m = left(a) * y;
    if (m.norm() == 0.0) return value;
    const ComplexMatrix grad = partial_trace(schatten_gradient(m, p_) * y.adjoint(), n_, m_);
    require_all_finite(grad);
    return take_step(a, grad, value, step, [&](const ComplexMatrix& cand) { return objective(cand, b); });
  }

  double update_b(const ComplexMatrix& a, ComplexMatrix& b, double value, double& step) const {
    const ComplexMatrix w = left(a) * flat_;
    const ComplexMatrix m = w * right(b);
    if (m.norm() == 0.0) return value;
    const ComplexMatrix grad = partial_trace(w.adjoint() * schatten_gradient(m, p_), n_, m_prime_);
    require_all_finite(grad);
    return take_step(b, grad, value, step, [&](const ComplexMatrix& cand) { return objective(a, cand); });
  }

  template <typename Objective>
  double take_step(ComplexMatrix& point, const ComplexMatrix& grad, double value, double& step,
                   Objective&& eval) const {
    if (grad.norm() == 0.0) return value;
    if (cfg_.step_rule == StepRule::kPower) {
      // g is convex in each factor, so maximizing its linearization over the
      // ball never decreases it.
      ComplexMatrix cand = dual_extremizer(grad, ball_);
      const double cand_value = eval(cand);
      if (cand_value >= value) {
        point = std::move(cand);
        return cand_value;
      }
      return value;
    }
    // Tangent part of the gradient: remove the component along the normal of
    // the S_{2p} sphere, so that renormalizing keeps a first-order increase.
    const ComplexMatrix normal = schatten_gradient(point, ball_);
    const ComplexMatrix tangent = grad - ((normal.adjoint() * grad).trace().real() / normal.squaredNorm()) * normal;
    if (tangent.norm() <= 1e-14 * grad.norm()) return value;
    const ComplexMatrix direction = tangent * (point.norm() / tangent.norm());
    for (int halvings = 0; halvings < 40; ++halvings, step *= 0.5) {
      ComplexMatrix cand = to_sphere(point + step * direction, ball_);
      const double cand_value = eval(cand);
      if (cand_value > value) {
        point = std::move(cand);
        step = std::min(step * 2.0, 1e3);
        return cand_value;
      }
    }
    step = 1.0;
    return value;
  }

  ComplexMatrix flat_;
  Eigen::Index n_;
  Eigen::Index m_;
  Eigen::Index m_prime_;
  PExponent p_;
  PExponent ball_;
  OptimizerConfig cfg_;
  ComplexMatrix id_m_;
  ComplexMatrix id_m_prime_;
};

struct RunOutcome {
  bool ok = false;
  double value = 0.0;
  CompressionPair point;
};

}  // namespace

AscentResult compression_ascent(const BlockMatrix& input, const PExponent& p, const OptimizerConfig& cfg,
                                const std::vector<CompressionPair>& warm_starts) {
  cfg.validate();
  const BlockMatrix x = pad_to_square(input);
  const auto n = x.outer_rows();
  const PExponent ball = p.doubled();
  const CompressionAscent ascent(x, p, cfg);

  const auto random_runs = static_cast<std::size_t>(cfg.restarts);
  const std::size_t total = random_runs + warm_starts.size();
  std::vector<RunOutcome> outcomes(total);

  parallel_for(total, resolve_thread_count(cfg.threads), [&](std::size_t r) {
    CompressionPair start;
    if (r < random_runs) {
      auto gen = seeded_stream(cfg.seed, r);
      start.a = gaussian_matrix(n, n, gen);
      start.b = gaussian_matrix(n, n, gen);
    } else {
      const auto& warm = warm_starts[r - random_runs];
      if (warm.a.rows() != n || warm.a.cols() != n || warm.b.rows() != n || warm.b.cols() != n) {
        throw std::invalid_argument("warm start shape does not match the outer dimension");
      }
      start = warm;
    }
    try {
      CompressionPair end = ascent.run(std::move(start));
      // Land exactly on the unit sphere, then certify through compress.
      end.a = to_sphere(end.a, ball);
      end.b = to_sphere(end.b, ball);
      const double value = compression_objective(x, p, end.a, end.b);
      if (!std::isfinite(value)) throw NumericalError("certified value is non-finite");
      outcomes[r] = {true, value, std::move(end)};
    } catch (const NumericalError&) {
      outcomes[r].ok = false;
    }
  });

  AscentResult best;
  bool found = false;
  for (auto& outcome : outcomes) {
    if (!outcome.ok) continue;
    ++best.completed_runs;
    if (!found || outcome.value > best.value) {
      found = true;
      best.value = outcome.value;
      best.a = std::move(outcome.point.a);
      best.b = std::move(outcome.point.b);
    }
  }
  if (!found) throw NumericalError("every ascent run failed");
  return best;
}

double elementary_upper(const BlockMatrix& input, const PExponent& p) {
  const BlockMatrix x = pad_to_square(input);
  double entry_sum = 0.0;
  for (Eigen::Index i = 0; i < x.outer_rows(); ++i) {
    for (Eigen::Index j = 0; j < x.outer_cols(); ++j) entry_sum += schatten_norm(x.block(i, j), p);
  }
  return std::min(schatten_norm(flatten(x), p), entry_sum);
}

double interpolation_upper(const BlockMatrix& input, const PExponent& p, std::optional<double> s1_upper) {
  const BlockMatrix x = pad_to_square(input);
  const double theta = p.theta();
  const double n2 = oh_matrix_norm(x);
  if (p.is_infinite() || p.value() >= 2.0) {
    const double n_inf = operator_norm(flatten(x));
    return std::pow(n_inf, 1.0 - theta) * std::pow(n2, theta);
  }
  if (!s1_upper) {
    throw std::invalid_argument("interpolation_upper for p < 2 needs a certified S_1 endpoint bound");
  }
  if (!(*s1_upper >= 0.0)) throw std::invalid_argument("S_1 endpoint bound must be non-negative");
  return std::pow(*s1_upper, 1.0 - theta) * std::pow(n2, theta);
}

NormEstimate mn_schatten_norm(const BlockMatrix& input, const PExponent& p, const OptimizerConfig& cfg,
                              const NormHints& hints) {
  const BlockMatrix x = pad_to_square(input);
  NormEstimate est;
  est.p = p;
  est.n = x.outer_rows();
  est.m = x.inner_rows();
  est.restarts = cfg.restarts;
  est.seed = cfg.seed;

  if (p.is_infinite()) {
    // The supremum over the S_inf balls is attained at a = b = I.
    const double value = operator_norm(flatten(x));
    est.lower = value;
    est.upper = value;
    est.add(Method::kExactSvd);
    const ComplexMatrix id = ComplexMatrix::Identity(est.n, est.n);
    est.witness = NormWitness{id, id, std::nullopt};
    return est;
  }
  if (p.value() == 2.0) {
    const double value = oh_matrix_norm(x);
    est.lower = value;
    est.upper = value;
    est.add(Method::kExactOh);
    return est;
  }

  const AscentResult ascent = compression_ascent(x, p, cfg, hints.warm_starts);
  est.lower = ascent.value;
  est.add(Method::kOptimizer);
  if (!hints.warm_starts.empty()) est.add(Method::kWitness);
  est.witness = NormWitness{ascent.a, ascent.b, std::nullopt};

  double upper = elementary_upper(x, p);
  Method upper_method = Method::kCbBound;
  auto offer = [&](double candidate, Method method) {
    if (candidate < upper) {
      upper = candidate;
      upper_method = method;
    }
  };
  if (p.value() > 2.0) {
    offer(interpolation_upper(x, p), Method::kInterpolation);
  } else {
    offer(interpolation_upper(x, p, elementary_upper(x, PExponent::finite(1.0))), Method::kInterpolation);
    if (hints.s1_upper) {
      if (p.value() == 1.0) {
        offer(*hints.s1_upper, Method::kDualPairing);
      } else {
        offer(interpolation_upper(x, p, hints.s1_upper), Method::kInterpolation);
      }
    }
  }
  if (est.lower > upper) {
    // Rounding can push a tight witness a few ulps past an analytic bound.
    if (est.lower - upper > 1e-9 * std::max(1.0, upper)) {
      throw NumericalError(fmt::format("certified lower bound {} exceeds upper bound {}", est.lower, upper));
    }
    upper = est.lower;
  }
  est.upper = upper;
  est.add(upper_method);
  return est;
}

Complex dual_pairing_objective(const BlockMatrix& input, const ComplexMatrix& a, const ComplexMatrix& b,
                               const BlockMatrix& y) {
  const BlockMatrix x = pad_to_square(input);
  const auto n = x.outer_rows();
  if (y.outer_rows() != n || y.outer_cols() != n || y.inner_rows() != x.inner_cols() ||
      y.inner_cols() != x.inner_rows()) {
    throw std::invalid_argument("dual pairing: y must be n x n with blocks dual to those of x");
  }
  if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n) {
    throw std::invalid_argument("dual pairing: a and b must be n x n");
  }
  Complex sum{};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
          sum += a(j, k) * trace_pairing(x.block(i, j), y.block(k, l)) * b(l, i);
        }
      }
    }
  }
  return sum;
}

namespace {

// Alternating exact best responses for |sum a_jk tr(x_ij y_kl) b_li|.
class DualAscent {
 public:
  DualAscent(const BlockMatrix& x, const OptimizerConfig& cfg)
      : x_(x), n_(x.outer_rows()), m_(x.inner_rows()), m_prime_(x.inner_cols()), cfg_(cfg) {}

  NormWitness run(ComplexMatrix a, ComplexMatrix b) const {
    a /= a.norm();
    b /= b.norm();
    BlockMatrix y(n_, n_, m_prime_, m_);
    double value = -1.0;
    for (int iter = 0; iter < cfg_.max_iters; ++iter) {
      const double before = value;
      y = best_y(a, b);
      const std::vector<Complex> pairing = pairing_table(y);
      a = best_a(pairing, b);
      double current = 0.0;
      b = best_b(pairing, a, current);
      value = current;
      if (!std::isfinite(value)) throw NumericalError("dual objective became non-finite");
      if (before >= 0.0 && value - before <= cfg_.tol * std::max(1.0, before)) break;
    }
    return {std::move(a), std::move(b), std::move(y)};
  }

 private:
  std::size_t at(Eigen::Index i, Eigen::Index j, Eigen::Index k, Eigen::Index l) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }

  // R with block (l, k) = sum_{i,j} a_jk b_li x_ij, so the objective is
  // tr(flatten(R) flatten(y)); the maximizing contraction is V U^*.
  BlockMatrix best_y(const ComplexMatrix& a, const ComplexMatrix& b) const {
    BlockMatrix r(n_, n_, m_, m_prime_);
    for (Eigen::Index l = 0; l < n_; ++l) {
      for (Eigen::Index k = 0; k < n_; ++k) {
        ComplexMatrix acc = ComplexMatrix::Zero(m_, m_prime_);
        for (Eigen::Index i = 0; i < n_; ++i) {
          for (Eigen::Index j = 0; j < n_; ++j) acc += (a(j, k) * b(l, i)) * x_.block(i, j);
        }
        r.set_block(l, k, std::move(acc));
      }
    }
    const Svd f = svd(flatten(r));
    const ComplexMatrix contraction = f.v * f.u.adjoint();
    require_all_finite(contraction);
    return unflatten(contraction, m_prime_, m_);
  }

  std::vector<Complex> pairing_table(const BlockMatrix& y) const {
    std::vector<Complex> table(static_cast<std::size_t>(n_ * n_ * n_ * n_));
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = 0; j < n_; ++j) {
        for (Eigen::Index k = 0; k < n_; ++k) {
          for (Eigen::Index l = 0; l < n_; ++l) {
            table[at(i, j, k, l)] = trace_pairing(x_.block(i, j), y.block(k, l));
          }
        }
      }
    }
    return table;
  }

  ComplexMatrix best_a(const std::vector<Complex>& table, const ComplexMatrix& b) const {
    ComplexMatrix c = ComplexMatrix::Zero(n_, n_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      for (Eigen::Index k = 0; k < n_; ++k) {
        for (Eigen::Index i = 0; i < n_; ++i) {
          for (Eigen::Index l = 0; l < n_; ++l) c(j, k) += table[at(i, j, k, l)] * b(l, i);
        }
      }
    }
    return normalized_conjugate(c, nullptr);
  }

  ComplexMatrix best_b(const std::vector<Complex>& table, const ComplexMatrix& a, double& value) const {
    ComplexMatrix d = ComplexMatrix::Zero(n_, n_);
    for (Eigen::Index l = 0; l < n_; ++l) {
      for (Eigen::Index i = 0; i < n_; ++i) {
        for (Eigen::Index j = 0; j < n_; ++j) {
          for (Eigen::Index k = 0; k < n_; ++k) d(l, i) += a(j, k) * table[at(i, j, k, l)];
        }
      }
    }
    return normalized_conjugate(d, &value);
  }

  // argmax |sum z_ij c_ij| over ||z||_2 <= 1 is conj(c) / ||c||_2, with value ||c||_2.
  ComplexMatrix normalized_conjugate(const ComplexMatrix& c, double* value) const {
    const double norm = c.norm();
    if (value) *value = norm;
    if (norm == 0.0) {
      ComplexMatrix fallback = ComplexMatrix::Zero(n_, n_);
      fallback(0, 0) = 1.0;
      return fallback;
    }
    return c.conjugate() / norm;
  }

  const BlockMatrix& x_;
  Eigen::Index n_;
  Eigen::Index m_;
  Eigen::Index m_prime_;
  OptimizerConfig cfg_;
};

}  // namespace

NormEstimate m1_norm_dual(const BlockMatrix& input, const OptimizerConfig& cfg) {
  cfg.validate();
  const BlockMatrix x = pad_to_square(input);
  const auto n = x.outer_rows();
  const DualAscent ascent(x, cfg);

  const auto total = static_cast<std::size_t>(cfg.restarts);
  std::vector<std::optional<std::pair<double, NormWitness>>> outcomes(total);
  parallel_for(total, resolve_thread_count(cfg.threads), [&](std::size_t r) {
    auto gen = seeded_stream(cfg.seed, r);
    ComplexMatrix a = gaussian_matrix(n, n, gen);
    ComplexMatrix b = gaussian_matrix(n, n, gen);
    try {
      NormWitness w = ascent.run(std::move(a), std::move(b));
      // Project onto the feasible set exactly, then certify through the
      // explicit quadruple sum.
      w.a /= std::max(1.0, w.a.norm());
      w.b /= std::max(1.0, w.b.norm());
      const double y_norm = operator_norm(flatten(*w.y));
      if (y_norm > 1.0) *w.y *= Complex{1.0 / y_norm};
      const double value = std::abs(dual_pairing_objective(x, w.a, w.b, *w.y));
      if (!std::isfinite(value)) throw NumericalError("certified dual value is non-finite");
      outcomes[r].emplace(value, std::move(w));
    } catch (const NumericalError&) {
      outcomes[r].reset();
    }
  });

  NormEstimate est;
  est.p = PExponent::finite(1.0);
  est.n = n;
  est.m = x.inner_rows();
  est.restarts = cfg.restarts;
  est.seed = cfg.seed;
  bool found = false;
  for (auto& outcome : outcomes) {
    if (!outcome) continue;
    if (!found || outcome->first > est.lower) {
      found = true;
      est.lower = outcome->first;
      est.witness = std::move(outcome->second);
    }
  }
  if (!found) throw NumericalError("every dual ascent run failed");
  est.add(Method::kDualPairing);
  est.add(Method::kOptimizer);
  const double upper = elementary_upper(x, PExponent::finite(1.0));
  if (est.lower - upper > 1e-9 * std::max(1.0, upper)) {
    throw NumericalError(fmt::format("certified dual value {} exceeds upper bound {}", est.lower, upper));
  }
  est.upper = std::max(est.lower, upper);
  est.add(Method::kCbBound);
  return est;
}

}  // namespace opspace
