#include "support.hpp"

#include "opspace/pnorm.hpp"
#include "opspace/witnesses.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace opspace {
namespace {

using testing::kInf;
using testing::max_abs_diff;
using testing::P;

double npow(Eigen::Index n, double e) { return std::pow(static_cast<double>(n), e); }

TEST(MatrixUnit, Examples) {
  ComplexMatrix e11 = ComplexMatrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  ComplexMatrix e12 = ComplexMatrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  EXPECT_EQ(matrix_unit(1, 1, 2), e11);
  EXPECT_EQ(matrix_unit(1, 2, 2), e12);
  EXPECT_THROW(matrix_unit(0, 1, 2), std::out_of_range);
  EXPECT_THROW(matrix_unit(1, 3, 2), std::out_of_range);
}

TEST(Families, Layout) {
  EXPECT_EQ(max_abs_diff(make_A(1), make_B(1)), 0.0);
  EXPECT_EQ(make_A(1).block(0, 0), matrix_unit(1, 1, 1));
  for (Eigen::Index n = 1; n <= 5; ++n) {
    const BlockMatrix a = make_A(n), b = make_B(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
        EXPECT_EQ(a.block(i, j), i == 0 ? matrix_unit(1, j + 1, n) : zero);
        EXPECT_EQ(b.block(i, j), i == 0 ? matrix_unit(j + 1, 1, n) : zero);
      }
    }
  }
  EXPECT_THROW(make_A(0), std::invalid_argument);
}

TEST(Families, FullSpectra) {
  for (Eigen::Index n = 1; n <= 8; ++n) {
    const RealVector sa = svd_values(flatten(make_A(n)));
    EXPECT_NEAR(sa(0), std::sqrt(static_cast<double>(n)), 1e-12);
    for (Eigen::Index k = 1; k < sa.size(); ++k) EXPECT_NEAR(sa(k), 0.0, 1e-12);
    const RealVector sb = svd_values(flatten(make_B(n)));
    for (Eigen::Index k = 0; k < sb.size(); ++k) EXPECT_NEAR(sb(k), k < n ? 1.0 : 0.0, 1e-12);
  }
}

TEST(Families, BlockNorms) {
  for (Eigen::Index n = 1; n <= 6; ++n) {
    for (const auto& p : {P(1), P(1.5), P(2), P(3), P(4), kInf}) {
      EXPECT_NEAR(schatten_norm(flatten(make_A(n)), p), std::sqrt(static_cast<double>(n)), 1e-12);
      const double b = p.is_infinite() ? 1.0 : npow(n, 1.0 / p.value());
      EXPECT_NEAR(schatten_norm(flatten(make_B(n)), p), b, 1e-12);
    }
  }
}

TEST(CompressionWitness, FeasibleAndExact) {
  for (Eigen::Index n = 1; n <= 8; ++n) {
    for (double p : {1.0, 1.5, 3.0, 4.0}) {
      const auto w = compression_witness(n, P(p));
      EXPECT_EQ(w.a, matrix_unit(1, 1, n));
      EXPECT_NEAR(schatten_norm(w.b, P(2 * p)), 1.0, 1e-14);
      EXPECT_NEAR(schatten_norm(w.a, P(2 * p)), 1.0, 1e-14);
    }
  }
  EXPECT_THROW(compression_witness(3, kInf), std::invalid_argument);
}

TEST(CompressionWitness, ObjectiveValues) {
  for (Eigen::Index n = 2; n <= 8; ++n) {
    for (double p : {3.0, 4.0}) {
      const auto w = compression_witness(n, P(p));
      EXPECT_NEAR(compression_objective(make_A(n), P(p), w.a, w.b), npow(n, 0.5 - 1 / (2 * p)), 1e-12);
    }
    for (double p : {1.0, 1.5}) {
      const auto w = compression_witness(n, P(p));
      EXPECT_NEAR(compression_objective(make_B(n), P(p), w.a, w.b), npow(n, 1 / (2 * p)), 1e-12);
    }
  }
}

TEST(CbTransposeWitness, HandComputedN2) {
  const auto w = cb_transpose_witness(2);
  const ComplexMatrix flat = flatten(w.v);
  ASSERT_EQ(flat.rows(), 4);
  ASSERT_EQ(flat.cols(), 2);
  EXPECT_NEAR(operator_norm(flat), 1.0, 1e-14);
  EXPECT_NEAR(operator_norm(flatten(entry_transpose(w.v))), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(w.ratio, std::sqrt(2.0), 1e-12);
}

TEST(CbTransposeWitness, RatioIsRootN) {
  EXPECT_NEAR(cb_transpose_witness(1).ratio, 1.0, 1e-12);
  EXPECT_NEAR(cb_transpose_witness(8).ratio, std::sqrt(8.0), 1e-9);
  EXPECT_NEAR(cb_transpose_witness(9).ratio, 3.0, 1e-9);
}

TEST(WitnessNames, Parse) {
  EXPECT_EQ(parse_witness_name("A"), WitnessName::kA);
  EXPECT_EQ(parse_witness_name("B"), WitnessName::kB);
  EXPECT_EQ(parse_witness_name("cbt"), WitnessName::kCbTranspose);
  EXPECT_THROW(parse_witness_name("C"), std::invalid_argument);
  EXPECT_EQ(make_family(WitnessName::kB, 3).payload.max_abs_diff(make_B(3)), 0.0);
}

}  // namespace
}  // namespace opspace
