#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "hyperwave/band_matrix.hpp"

using namespace hyperwave;

TEST(BandMatrix, TripletsRoundTrip) {
  std::vector<Triplet> t{{0, 0, 1.0}, {2, 1, -3.5}, {1, 1, 2.0}};
  const auto m = BandMatrix::from_triplets(3, 2, t);
  EXPECT_EQ(m.rows(), 3);
  EXPECT_EQ(m.cols(), 2);
  EXPECT_EQ(m.nonzeros(), 3);
  EXPECT_DOUBLE_EQ(m.coeff(2, 1), -3.5);
  const auto back = m.triplets();
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[1].row, 1);
  EXPECT_EQ(back[2].row, 2);
}

TEST(BandMatrix, RejectsOutOfRangeAndDuplicates) {
  std::vector<Triplet> out{{3, 0, 1.0}};
  EXPECT_THROW(BandMatrix::from_triplets(3, 2, out), Error);
  std::vector<Triplet> dup{{0, 0, 1.0}, {0, 0, 2.0}};
  try {
    BandMatrix::from_triplets(2, 2, dup);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(BandMatrix, ApplyAndTranspose) {
  Eigen::MatrixXd d(2, 3);
  d << 1, 2, 0, 0, -1, 4;
  const auto m = BandMatrix::from_dense(d);
  std::vector<double> x{1, 1, 1};
  const auto y = m.apply(x);
  EXPECT_DOUBLE_EQ(y[0], 3.0);
  EXPECT_DOUBLE_EQ(y[1], 3.0);
  std::vector<double> z(3);
  std::vector<double> w{1, 2};
  m.apply_transpose(w, z);
  EXPECT_DOUBLE_EQ(z[0], 1.0);
  EXPECT_DOUBLE_EQ(z[1], 0.0);
  EXPECT_DOUBLE_EQ(z[2], 8.0);
  EXPECT_THROW(m.apply(w), Error);
}

TEST(BandMatrix, BandwidthAndSupport) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(6, 2);
  d(0, 0) = d(3, 0) = 1.0;
  d(4, 1) = 2.0;
  const auto m = BandMatrix::from_dense(d);
  EXPECT_EQ(m.bandwidth(), 4);
  EXPECT_EQ(m.column_support(1).first, 4);
  EXPECT_EQ(m.column_support(1).second, 4);
}

TEST(BandMatrix, BlockDiagAndHcat) {
  const auto a = BandMatrix::identity(2);
  Eigen::MatrixXd bd(1, 1);
  bd << 5;
  const auto b = BandMatrix::from_dense(bd);
  const auto diag = BandMatrix::block_diag(a, b).dense();
  EXPECT_EQ(diag.rows(), 3);
  EXPECT_DOUBLE_EQ(diag(2, 2), 5.0);
  EXPECT_DOUBLE_EQ(diag(0, 2), 0.0);
  const auto h = BandMatrix::hcat(a, a).dense();
  EXPECT_EQ(h.cols(), 4);
  EXPECT_DOUBLE_EQ(h(1, 3), 1.0);
  EXPECT_THROW(BandMatrix::hcat(a, b), Error);
}

TEST(BandMatrix, ProductMatchesDense) {
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  const auto p = (BandMatrix::from_dense(a) * BandMatrix::from_dense(b)).dense();
  EXPECT_TRUE(p.isApprox(a * b));
}

TEST(BandMatrix, WriteBlockFormat) {
  std::vector<Triplet> t{{1, 0, 0.5}};
  std::ostringstream os;
  write_block(os, 3, BandMatrix::from_triplets(2, 1, t));
  EXPECT_EQ(os.str(), "3 2 1\n1 0 0.5\n");
}
