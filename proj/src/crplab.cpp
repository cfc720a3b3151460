#include "opspace/crplab.hpp"

#include "opspace/ohnorm.hpp"
#include "opspace/parallel.hpp"
#include "opspace/random.hpp"
#include "opspace/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace opspace {

namespace {

// ||t(B_n)||_{M_n(S_1)} = ||A_n||_{M_n(S_1)}, which the S_1 contraction
// inequality caps at 1.
constexpr double kTransposedBS1Bound = 1.0;

BlockMatrix gaussian_blocks(Eigen::Index n, Eigen::Index q, Eigen::Index m, Eigen::Index mp,
                            std::mt19937_64& gen) {
  BlockMatrix x(n, q, m, mp);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) x.set_block(i, j, gaussian_matrix(m, mp, gen));
  }
  return x;
}

double npow(Eigen::Index n, double exponent) { return std::pow(static_cast<double>(n), exponent); }

}  // namespace

LemmaOutcome make_outcome(std::string lemma, Eigen::Index n, std::optional<PExponent> p, double expected,
                          double observed, double tolerance, bool upper_bound_only) {
  LemmaOutcome out{std::move(lemma), n, p, expected, observed, tolerance, upper_bound_only, false};
  out.pass = upper_bound_only ? observed <= expected + tolerance
                              : std::abs(observed - expected) <= tolerance;
  return out;
}

BlockMatrix random_block_matrix(Eigen::Index n, Eigen::Index q, Eigen::Index m, Eigen::Index m_prime,
                                std::uint64_t seed, std::uint64_t index) {
  auto gen = seeded_stream(seed, index, 0xb10c);
  return gaussian_blocks(n, q, m, m_prime, gen);
}

std::pair<LemmaOutcome, LemmaOutcome> verify_block_norms(Eigen::Index n, const PExponent& p, double tol) {
  const double a_norm = schatten_norm(flatten(make_A(n)), p);
  const double b_norm = schatten_norm(flatten(make_B(n)), p);
  const double b_expected = p.is_infinite() ? 1.0 : npow(n, 1.0 / p.value());
  return {make_outcome("block-norm-A", n, p, std::sqrt(static_cast<double>(n)), a_norm, tol),
          make_outcome("block-norm-B", n, p, b_expected, b_norm, tol)};
}

LemmaOutcome verify_oh_transpose(Eigen::Index n, double tol) {
  const double observed = oh_matrix_norm(block_transpose(make_A(n)));
  return make_outcome("oh-transpose", n, PExponent::finite(2.0), npow(n, 0.25), observed, tol);
}

double s1_contraction_lhs(const ComplexMatrix& a, const BlockMatrix& y) {
  const auto n = y.outer_rows();
  if (y.outer_cols() != n || a.rows() > y.inner_rows() || a.cols() != n) {
    throw std::invalid_argument("s1_contraction_lhs: shapes of a and y are incompatible");
  }
  double sum = 0.0;
  for (Eigen::Index l = 0; l < n; ++l) {
    Complex inner{};
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      for (Eigen::Index k = 0; k < n; ++k) inner += a(j, k) * y.block(k, l)(j, 0);
    }
    sum += std::norm(inner);
  }
  return sum;
}

namespace {

// sup over ||a||_2 <= 1 of the contraction LHS: the squared operator norm of
// the map a -> (sum_{j,k} a_jk y^{kl}_{j1})_l.
double s1_contraction_sup(const BlockMatrix& y) {
  const auto n = y.outer_rows();
  const auto rows = y.inner_rows();
  ComplexMatrix map(n, rows * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index j = 0; j < rows; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) map(l, j * n + k) = y.block(k, l)(j, 0);
    }
  }
  const double s = operator_norm(map);
  return s * s;
}

}  // namespace

S1ContractionReport verify_s1_contraction(Eigen::Index n, int trials, std::uint64_t seed,
                                          const std::vector<BlockMatrix>& extra) {
  if (n < 1 || trials < 1) throw std::invalid_argument("verify_s1_contraction needs n >= 1 and trials >= 1");
  S1ContractionReport report{n, trials, 0.0, false};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    auto gen = seeded_stream(seed, static_cast<std::uint64_t>(t), 0x51);
    BlockMatrix y = gaussian_blocks(n, n, n, n, gen);
    y *= Complex{1.0 / operator_norm(flatten(y))};
    // Half of the samples sit on the boundary ||y|| = 1, the rest inside.
    if (unit(gen) < 0.5) y *= Complex{unit(gen)};
    ComplexMatrix a = gaussian_matrix(n, n, gen);
    a /= a.norm();
    if (unit(gen) < 0.5) a *= unit(gen);
    report.max_lhs = std::max({report.max_lhs, s1_contraction_lhs(a, y), s1_contraction_sup(y)});
  }
  for (const auto& y : extra) {
    const double y_norm = operator_norm(flatten(y));
    if (y_norm > 1.0 + 1e-12) {
      throw std::invalid_argument(fmt::format("extra y is not a contraction (norm {})", y_norm));
    }
    report.max_lhs = std::max(report.max_lhs, s1_contraction_sup(y));
  }
  report.pass = report.max_lhs <= 1.0 + 1e-9;
  return report;
}

LemmaOutcome verify_cb_transpose(Eigen::Index n, double tol) {
  const auto witness = cb_transpose_witness(n);
  return make_outcome("cb-transpose", n, std::nullopt, std::sqrt(static_cast<double>(n)), witness.ratio, tol);
}

double crp_target_exponent(const PExponent& p) {
  if (p.is_infinite()) return 0.5;
  return std::abs(p.value() - 2.0) / (2.0 * p.value());
}

std::pair<double, double> sandwich_exponents(const PExponent& p) {
  if (p.is_infinite()) return {0.5, 1.0};
  const double d = std::abs(p.value() - 2.0);
  return {d / (2.0 * p.value()), d / p.value()};
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("slope fit needs matching x and y lengths");
  const auto count = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("slope fit needs positive values");
    mean_x += std::log(xs[i]);
    mean_y += std::log(ys[i]);
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(ys[i]) - mean_y);
  }
  if (xs.size() < 2 || sxx <= 0.0) throw std::invalid_argument("slope fit needs at least two distinct x values");
  return sxy / sxx;
}

namespace {

// a = b = n^{-1/(2p)} I, a feasible point for any x; a cheap certified lower bound.
double scalar_witness_value(const BlockMatrix& x, const PExponent& p) {
  const auto n = x.outer_rows();
  const double scale = p.is_infinite() ? 1.0 : npow(n, -1.0 / (2.0 * p.value()));
  const ComplexMatrix s = scale * ComplexMatrix::Identity(n, n);
  return compression_objective(x, p, s, s);
}

NormEstimate base_estimate(const BlockMatrix& x, const PExponent& p) {
  NormEstimate est;
  est.p = p;
  est.n = x.outer_rows();
  est.m = x.inner_rows();
  return est;
}

// Same rule as mn_schatten_norm: rounding-level excess of lower over upper is
// clamped, anything larger means the bounds are inconsistent.
bool reconcile(NormEstimate& est) {
  if (!est.upper) return true;
  if (est.lower <= *est.upper) return true;
  if (est.lower - *est.upper > 1e-9 * std::max(1.0, *est.upper)) return false;
  est.upper = est.lower;
  return true;
}

CrpRow crp_row(const PExponent& p, Eigen::Index n) {
  const bool above_two = p.is_infinite() || p.value() > 2.0;
  const BlockMatrix row = above_two ? make_A(n) : make_B(n);
  const BlockMatrix col = pad_to_square(block_transpose(row));

  CrpRow out;
  out.n = n;
  out.row_norm = base_estimate(row, p);
  if (p.is_infinite()) {
    const double exact = operator_norm(flatten(row));
    out.row_norm.lower = exact;
    out.row_norm.upper = exact;
    out.row_norm.add(Method::kExactSvd);
  } else {
    const CompressionPair w = compression_witness(n, p);
    out.row_norm.lower = compression_objective(row, p, w.a, w.b);
    out.row_norm.witness = NormWitness{w.a, w.b, std::nullopt};
    out.row_norm.add(Method::kWitness);
    if (above_two) {
      out.row_norm.upper = std::min(interpolation_upper(row, p), elementary_upper(row, p));
      out.row_norm.add(Method::kInterpolation);
    } else {
      out.row_norm.upper = elementary_upper(row, p);
      out.row_norm.add(Method::kCbBound);
    }
  }

  out.col_norm = base_estimate(col, p);
  out.col_norm.lower = scalar_witness_value(col, p);
  out.col_norm.add(Method::kWitness);
  out.col_norm.upper = above_two ? interpolation_upper(col, p) : interpolation_upper(col, p, kTransposedBS1Bound);
  out.col_norm.add(Method::kInterpolation);

  out.certified = reconcile(out.row_norm) && reconcile(out.col_norm);
  out.ratio_lower = out.row_norm.lower / *out.col_norm.upper;
  return out;
}

}  // namespace

CrpReport crp_ratio_campaign(const PExponent& p, const std::vector<Eigen::Index>& ns,
                             const OptimizerConfig& cfg) {
  if (!p.is_infinite() && p.value() == 2.0) {
    throw std::invalid_argument("crp_ratio_campaign: there is no column-row gap to measure at p = 2");
  }
  if (ns.empty()) throw std::invalid_argument("crp_ratio_campaign: empty n range");
  for (auto n : ns) {
    if (n < 1) throw std::invalid_argument("crp_ratio_campaign: n must be >= 1");
  }
  cfg.validate();

  CrpReport report;
  report.p = p;
  report.target_exponent = crp_target_exponent(p);
  report.rows.resize(ns.size());
  parallel_for(ns.size(), resolve_thread_count(cfg.threads),
               [&](std::size_t i) { report.rows[i] = crp_row(p, ns[i]); });

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : report.rows) {
    xs.push_back(static_cast<double>(row.n));
    ys.push_back(row.ratio_lower);
  }
  report.fitted_exponent = fit_loglog_slope(xs, ys);
  return report;
}

namespace {

struct ColumnCandidate {
  BlockMatrix column;
  NormHints row_hints;                // for the transposed row t(c)
  std::optional<double> col_upper;    // analytic bound for ||c||, if known
};

BlockMatrix as_first_column(const BlockMatrix& c) {
  const auto n = c.outer_rows();
  BlockMatrix out(n, n, c.inner_rows(), c.inner_cols());
  for (Eigen::Index i = 0; i < n; ++i) out.set_block(i, 0, c.block(i, 0));
  return out;
}

double certified_ratio(const ColumnCandidate& c, const PExponent& p, const OptimizerConfig& cfg) {
  const BlockMatrix row = block_transpose(c.column);
  const double numerator = mn_schatten_norm(row, p, cfg, c.row_hints).lower;
  double denominator = *mn_schatten_norm(c.column, p, cfg).upper;
  if (c.col_upper) denominator = std::min(denominator, *c.col_upper);
  return numerator / denominator;
}

}  // namespace

SandwichProbe sandwich_probe(const PExponent& p, Eigen::Index n, const OptimizerConfig& cfg, int candidates,
                             int refinements) {
  if (!p.is_infinite() && p.value() == 2.0) {
    throw std::invalid_argument("sandwich_probe: the estimate is trivial at p = 2");
  }
  if (n < 1 || candidates < 0 || refinements < 0) throw std::invalid_argument("sandwich_probe: bad sizes");
  cfg.validate();

  SandwichProbe probe;
  probe.p = p;
  probe.n = n;
  const auto [lo, hi] = sandwich_exponents(p);
  probe.lower = npow(n, lo);
  probe.upper = npow(n, hi);

  const bool above_two = p.is_infinite() || p.value() > 2.0;
  ColumnCandidate extremal{block_transpose(above_two ? make_A(n) : make_B(n)), {}, std::nullopt};
  if (!p.is_infinite()) extremal.row_hints.warm_starts.push_back(compression_witness(n, p));
  const BlockMatrix padded = pad_to_square(extremal.column);
  extremal.col_upper = above_two ? interpolation_upper(padded, p)
                                 : interpolation_upper(padded, p, kTransposedBS1Bound);

  double best = certified_ratio(extremal, p, cfg);
  BlockMatrix best_column = extremal.column;

  for (int c = 0; c < candidates; ++c) {
    ColumnCandidate cand{as_first_column(random_block_matrix(n, 1, n, n, cfg.seed, static_cast<std::uint64_t>(c))), {},
                         std::nullopt};
    const double ratio = certified_ratio(cand, p, cfg);
    if (ratio > best) {
      best = ratio;
      best_column = cand.column;
    }
  }
  for (int r = 0; r < refinements; ++r) {
    BlockMatrix step =
        as_first_column(random_block_matrix(n, 1, n, n, cfg.seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(r)));
    double scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, best_column.block(i, 0).norm());
    step *= Complex{0.25 * scale / std::max(1.0, operator_norm(flatten(step)))};
    ColumnCandidate cand{best_column + step, {}, std::nullopt};
    const double ratio = certified_ratio(cand, p, cfg);
    if (ratio > best) {
      best = ratio;
      best_column = cand.column;
    }
  }

  probe.optimizer_best = best;
  probe.within = probe.lower - 1e-6 <= best && best <= probe.upper + 1e-6;
  return probe;
}

CmpCampaign cmp_campaign(Eigen::Index n, Eigen::Index m, int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw std::invalid_argument("cmp_campaign needs samples >= 1");
  CmpCampaign out;
  out.samples = samples;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const auto check = cmp_check_oh(random_block_matrix(n, n, m, m, seed, static_cast<std::uint64_t>(s)), tol);
    out.worst_margin = std::max(out.worst_margin, check.matrix_norm - check.column_norm);
    if (!check.ok) ++out.failures;
  }
  return out;
}

}  // namespace opspace
