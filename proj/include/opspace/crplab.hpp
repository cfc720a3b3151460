#pragma once

// Verification campaigns for the column-row estimates on Schatten classes.

#include "opspace/pnorm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace opspace {

/// One checked claim. Two-sided claims pass iff |observed - expected| <= tolerance;
/// one-sided ones (upper_bound_only) pass iff observed <= expected + tolerance.
struct LemmaOutcome {
  std::string lemma;
  Eigen::Index n = 0;
  std::optional<PExponent> p;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool upper_bound_only = false;
  bool pass = false;
};

LemmaOutcome make_outcome(std::string lemma, Eigen::Index n, std::optional<PExponent> p, double expected,
                          double observed, double tolerance, bool upper_bound_only = false);

/// ||flatten(A_n)||_p = sqrt(n) and ||flatten(B_n)||_p = n^{1/p} (1 at p = inf).
std::pair<LemmaOutcome, LemmaOutcome> verify_block_norms(Eigen::Index n, const PExponent& p,
                                                         double tol = 1e-9);

/// ||t(A_n)||_{M_n(S_2)} = n^{1/4}.
LemmaOutcome verify_oh_transpose(Eigen::Index n, double tol = 1e-9);

/// sum_l |sum_{j,k} a_jk y^{kl}_{j1}|^2, where y_kl = [y^{kl}_{ij}] is block (k, l).
double s1_contraction_lhs(const ComplexMatrix& a, const BlockMatrix& y);

struct S1ContractionReport {
  Eigen::Index n = 0;
  int trials = 0;
  double max_lhs = 0.0;
  bool pass = false;
};

/// Samples contractions y in M_n(S_inf^n) and a in the unit ball of S_2^n
/// and checks the S_1 contraction inequality LHS <= 1. Each y is also paired
/// with the a maximizing the LHS for that y. `extra` contractions (for
/// instance the maximizer found by m1_norm_dual) are checked the same way.
S1ContractionReport verify_s1_contraction(Eigen::Index n, int trials, std::uint64_t seed,
                                          const std::vector<BlockMatrix>& extra = {});

/// ||[t(v_ij)]|| / ||[v_ij]|| = sqrt(n) for the column-to-row witness.
LemmaOutcome verify_cb_transpose(Eigen::Index n, double tol = 1e-9);

struct CrpRow {
  Eigen::Index n = 0;
  NormEstimate row_norm;   // the row A_n (p > 2) or B_n (p < 2): certified lower bound
  NormEstimate col_norm;   // its transpose, a column: certified upper bound
  double ratio_lower = 0.0;
  bool certified = false;
};

struct CrpReport {
  PExponent p = PExponent::infinity();
  std::vector<CrpRow> rows;
  double fitted_exponent = 0.0;
  double target_exponent = 0.0;  // |p - 2| / (2p)
};

/// |p - 2| / (2p), with the limit 1/2 at p = inf.
double crp_target_exponent(const PExponent& p);

/// Ordinary least-squares slope of log(y) against log(x). Needs at least two
/// distinct x values.
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Certified growth of ||row|| / ||t(row)|| over n for p != 2: the numerator
/// is the compression witness value (exact operator norm at p = inf), the
/// denominator the interpolation upper bound of the transpose. Throws on p = 2
/// and on ranges that cannot support a slope fit.
CrpReport crp_ratio_campaign(const PExponent& p, const std::vector<Eigen::Index>& ns,
                             const OptimizerConfig& cfg);

struct SandwichProbe {
  PExponent p = PExponent::infinity();
  Eigen::Index n = 0;
  double lower = 0.0;           // n^{|p-2|/(2p)}
  double upper = 0.0;           // n^{|p-2|/p}
  double optimizer_best = 0.0;  // best certified ||t(c)|| / ||c|| over searched columns c
  bool within = false;
};

/// Exponents (|p-2|/(2p), |p-2|/p) of the two-sided estimate; (1/2, 1) at p = inf.
std::pair<double, double> sandwich_exponents(const PExponent& p);

/// Searches columns c in M_{n,1}(S_p^n) for a large certified ratio
/// lower(||t(c)||) / upper(||c||): the transposed extremal column, random
/// columns, and seeded perturbations of the best one found. Reports whether
/// the best ratio lies inside the sandwich; it cannot decide sharpness.
SandwichProbe sandwich_probe(const PExponent& p, Eigen::Index n, const OptimizerConfig& cfg,
                             int candidates = 8, int refinements = 8);

struct CmpCampaign {
  int samples = 0;
  int failures = 0;
  double worst_margin = 0.0;  // max of matrix_norm - column_norm
};

/// Random n x n block matrices over S_2^m checked against cmp_check_oh.
CmpCampaign cmp_campaign(Eigen::Index n, Eigen::Index m, int samples, std::uint64_t seed,
                         double tol = 1e-9);

/// Random block matrix with complex Gaussian entries, drawn from a stream
/// derived from (seed, index).
BlockMatrix random_block_matrix(Eigen::Index n, Eigen::Index q, Eigen::Index m, Eigen::Index m_prime,
                                std::uint64_t seed, std::uint64_t index);

}  // namespace opspace
