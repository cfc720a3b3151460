#include "support.hpp"

#include "opspace/crplab.hpp"
#include "opspace/witnesses.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace opspace {
namespace {

using testing::kInf;
using testing::P;

double npow(Eigen::Index n, double e) { return std::pow(static_cast<double>(n), e); }

OptimizerConfig quick() {
  OptimizerConfig cfg;
  cfg.restarts = 8;
  return cfg;
}

TEST(Outcome, TwoAndOneSided) {
  EXPECT_TRUE(make_outcome("x", 1, std::nullopt, 1.0, 1.0 + 1e-10, 1e-9).pass);
  EXPECT_FALSE(make_outcome("x", 1, std::nullopt, 1.0, 1.0 - 1e-8, 1e-9).pass);
  EXPECT_TRUE(make_outcome("x", 1, std::nullopt, 1.0, 0.5, 1e-9, true).pass);
  EXPECT_FALSE(make_outcome("x", 1, std::nullopt, 1.0, 1.0 + 1e-8, 1e-9, true).pass);
}

TEST(BlockNorms, Examples) {
  auto [a, b] = verify_block_norms(3, P(1));
  EXPECT_NEAR(a.expected, std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(b.expected, 3.0, 1e-15);
  EXPECT_TRUE(a.pass && b.pass);
  for (const auto& p : {P(1), P(2.5), kInf}) {
    auto [a1, b1] = verify_block_norms(1, p);
    EXPECT_EQ(a1.expected, 1.0);
    EXPECT_EQ(b1.expected, 1.0);
    EXPECT_TRUE(a1.pass && b1.pass);
  }
  auto [a5, b5] = verify_block_norms(5, P(2));
  EXPECT_NEAR(a5.expected, std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(b5.expected, std::sqrt(5.0), 1e-15);
  EXPECT_TRUE(a5.pass && b5.pass);
}

TEST(OhTranspose, Examples) {
  EXPECT_NEAR(verify_oh_transpose(1).observed, 1.0, 1e-12);
  EXPECT_NEAR(verify_oh_transpose(4).observed, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(verify_oh_transpose(16).observed, 2.0, 1e-9);
  EXPECT_TRUE(verify_oh_transpose(16).pass);
}

TEST(S1Contraction, Examples) {
  BlockMatrix y(1, 1, 1, 1);
  y.set_block(0, 0, matrix_unit(1, 1, 1));
  EXPECT_NEAR(s1_contraction_lhs(matrix_unit(1, 1, 1), y), 1.0, 1e-15);
  BlockMatrix y3 = testing::random_blocks(3, 3, 3, 3, 1);
  EXPECT_EQ(s1_contraction_lhs(ComplexMatrix::Zero(3, 3), y3), 0.0);
}

TEST(S1Contraction, RandomTrials) {
  const auto r = verify_s1_contraction(3, 1000, 42);
  EXPECT_LE(r.max_lhs, 1 + 1e-9);
  EXPECT_GT(r.max_lhs, 0.5);
  EXPECT_TRUE(r.pass);
}

TEST(S1Contraction, AdversarialDualMaximizer) {
  OptimizerConfig cfg = quick();
  for (Eigen::Index n = 2; n <= 3; ++n) {
    const auto est = m1_norm_dual(make_A(n), cfg);
    const auto r = verify_s1_contraction(n, 10, 1, {*est.witness->y});
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.max_lhs, 1 - 1e-4);
  }
}

TEST(S1Contraction, RejectsNonContraction) {
  BlockMatrix y(2, 2, 2, 2);
  y.set_block(0, 0, 2.0 * ComplexMatrix::Identity(2, 2));
  EXPECT_THROW(verify_s1_contraction(2, 1, 1, {y}), std::invalid_argument);
}

TEST(CbTranspose, Examples) {
  EXPECT_NEAR(verify_cb_transpose(1).observed, 1.0, 1e-12);
  EXPECT_NEAR(verify_cb_transpose(2).observed, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(verify_cb_transpose(9).observed, 3.0, 1e-9);
}

TEST(Exponents, TargetsAndSandwich) {
  EXPECT_DOUBLE_EQ(crp_target_exponent(P(4)), 0.25);
  EXPECT_DOUBLE_EQ(crp_target_exponent(P(1)), 0.5);
  EXPECT_DOUBLE_EQ(crp_target_exponent(kInf), 0.5);
  auto [lo, hi] = sandwich_exponents(kInf);
  EXPECT_DOUBLE_EQ(lo, 0.5);
  EXPECT_DOUBLE_EQ(hi, 1.0);
  auto [lo1000, hi1000] = sandwich_exponents(P(1e6));
  EXPECT_NEAR(lo1000, 0.5, 1e-5);
  EXPECT_NEAR(hi1000, 1.0, 1e-5);
}

TEST(Fit, ExactPowerLaw) {
  std::vector<double> xs{2, 3, 4, 5}, ys;
  for (double x : xs) ys.push_back(3.0 * std::pow(x, 0.7));
  EXPECT_NEAR(fit_loglog_slope(xs, ys), 0.7, 1e-12);
  EXPECT_THROW(fit_loglog_slope({2, 2}, {1, 2}), std::invalid_argument);
  EXPECT_THROW(fit_loglog_slope({2}, {1}), std::invalid_argument);
}

TEST(CrpCampaign, PFour) {
  const auto report = crp_ratio_campaign(P(4), {2, 3, 4}, quick());
  ASSERT_EQ(report.rows.size(), 3u);
  for (const auto& row : report.rows) {
    EXPECT_TRUE(row.certified);
    EXPECT_NEAR(row.ratio_lower, npow(row.n, 0.25), 1e-9);
  }
  EXPECT_NEAR(report.fitted_exponent, 0.25, 1e-9);
}

TEST(CrpCampaign, POne) {
  const auto report = crp_ratio_campaign(P(1), {2, 3, 4}, quick());
  for (const auto& row : report.rows) {
    EXPECT_TRUE(row.certified);
    EXPECT_NEAR(row.ratio_lower, npow(row.n, 0.5), 1e-9);
  }
  EXPECT_NEAR(report.fitted_exponent, 0.5, 1e-9);
}

TEST(CrpCampaign, RatioGrowsWithN) {
  for (const auto& p : {P(1.5), P(3), kInf}) {
    const auto report = crp_ratio_campaign(p, {2, 3, 4, 5}, quick());
    for (std::size_t k = 1; k < report.rows.size(); ++k) {
      EXPECT_GE(report.rows[k].ratio_lower, report.rows[k - 1].ratio_lower);
    }
  }
}

TEST(CrpCampaign, ConsistentWithOptimizer) {
  const auto report = crp_ratio_campaign(P(4), {2, 3}, quick());
  for (const auto& row : report.rows) {
    const auto row_est = mn_schatten_norm(make_A(row.n), P(4), quick());
    const auto col_est = mn_schatten_norm(pad_to_square(block_transpose(make_A(row.n))), P(4), quick());
    EXPECT_LE(row.row_norm.lower, *row_est.upper + 1e-9);
    EXPECT_GE(*row.col_norm.upper, col_est.lower - 1e-9);
  }
}

TEST(CrpCampaign, Errors) {
  EXPECT_THROW(crp_ratio_campaign(P(1), {1}, quick()), std::invalid_argument);
  EXPECT_THROW(crp_ratio_campaign(P(2), {2, 3}, quick()), std::invalid_argument);
  EXPECT_THROW(crp_ratio_campaign(P(4), {}, quick()), std::invalid_argument);
}

TEST(Sandwich, WithinAtSmallN) {
  OptimizerConfig cfg = quick();
  for (const auto& p : {P(4), P(1)}) {
    const auto probe = sandwich_probe(p, 2, cfg, 2, 2);
    EXPECT_TRUE(probe.within) << probe.optimizer_best;
    EXPECT_GE(probe.optimizer_best, probe.lower - 1e-6);
  }
  EXPECT_THROW(sandwich_probe(P(2), 2, cfg), std::invalid_argument);
}

TEST(Cmp, Campaign) {
  const auto c = cmp_campaign(3, 3, 100, 42);
  EXPECT_EQ(c.samples, 100);
  EXPECT_EQ(c.failures, 0);
  EXPECT_LE(c.worst_margin, 1e-9);
}

TEST(Campaigns, Reproducible) {
  const auto a = verify_s1_contraction(2, 50, 9);
  const auto b = verify_s1_contraction(2, 50, 9);
  EXPECT_EQ(a.max_lhs, b.max_lhs);
  EXPECT_EQ(cmp_campaign(2, 2, 20, 5).worst_margin, cmp_campaign(2, 2, 20, 5).worst_margin);
}

}  // namespace
}  // namespace opspace
