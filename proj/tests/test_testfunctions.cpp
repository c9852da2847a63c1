#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "hyperwave/nterm.hpp"
#include "hyperwave/testfunctions.hpp"
#include "support/random.hpp"

using namespace hyperwave;

namespace {

const BasisSpec &haar() {
  static const BasisSpec b = make_haar_basis(0, 12);
  return b;
}

double midpoint(Eigen::Index k, int m) { return (static_cast<double>(k) + 0.5) / std::exp2(m); }

} // namespace

TEST(TestFunctions, SmoothMatchesClosedForm) {
  const auto a = sample_function(FunctionKind::smooth, {}, haar(), 2, 4);
  ASSERT_EQ(a.extent, 16);
  for (Eigen::Index i = 0; i < 16; ++i)
    for (Eigen::Index k = 0; k < 16; ++k) {
      const double want = std::sin(std::numbers::pi * midpoint(i, 4)) *
                          std::sin(std::numbers::pi * midpoint(k, 4));
      EXPECT_NEAR(a.data[static_cast<std::size_t>(i * 16 + k)], want, 1e-15);
    }
}

TEST(TestFunctions, TensorKinkIsRankOne) {
  SampleParams sp;
  sp.beta = 0.7;
  const auto a = sample_function(FunctionKind::tensor_kink, sp, haar(), 2, 5);
  const auto b = sample_function(FunctionKind::tensor_kink, sp, haar(), 1, 5);
  for (Eigen::Index i = 0; i < 32; ++i)
    for (Eigen::Index k = 0; k < 32; ++k)
      EXPECT_NEAR(a.data[static_cast<std::size_t>(i * 32 + k)],
                  b.data[static_cast<std::size_t>(i)] * b.data[static_cast<std::size_t>(k)], 1e-15);
}

TEST(TestFunctions, PointKinkIsRadial) {
  SampleParams sp;
  sp.beta = 1.0;
  sp.x0 = {0.5, 0.5, 0.5};
  const auto a = sample_function(FunctionKind::point_kink, sp, haar(), 3, 3);
  const double h = midpoint(0, 3) - 0.5;
  EXPECT_NEAR(a.data[0], std::sqrt(3.0) * std::abs(h), 1e-15);
  EXPECT_NEAR(a.data.back(), std::sqrt(3.0) * std::abs(h), 1e-15);
}

TEST(TestFunctions, RandomDecayIsDeterministic) {
  SampleParams sp;
  sp.seed = 42;
  sp.q = 0.5;
  const auto a = sample_function(FunctionKind::random_decay, sp, haar(), 2, 6);
  const auto b = sample_function(FunctionKind::random_decay, sp, haar(), 2, 6);
  ASSERT_EQ(a.data.size(), b.data.size());
  for (std::size_t i = 0; i < a.data.size(); ++i)
    EXPECT_EQ(a.data[i], b.data[i]);
  sp.seed = 43;
  const auto c = sample_function(FunctionKind::random_decay, sp, haar(), 2, 6);
  EXPECT_GT(fixtures::max_abs_diff(a, c), 0.0);
}

TEST(TestFunctions, RandomDecayRoundTripsToEnvelope) {
  SampleParams sp;
  sp.seed = 7;
  sp.q = 0.25;
  sp.r = 1.0;
  const int n = 2, m = 7;
  const auto a = sample_function(FunctionKind::random_decay, sp, haar(), n, m);
  const auto u = hyper_forward(haar(), samples_to_single_scale(a));
  const auto drawn = random_decay_coefficients(haar(), sp, n, m);
  EXPECT_LT(fixtures::max_abs_diff(u, drawn), 1e-12);
  for (const auto &[idx, v] : u.entries) {
    const double env = std::exp2(-(sp.q * idx.linf(n) + (sp.r + 0.5) * idx.l1(n)));
    EXPECT_GE(std::abs(v), 0.5 * env * (1 - 1e-9));
    EXPECT_LE(std::abs(v), env * (1 + 1e-9));
  }
}

TEST(TestFunctions, RandomDecayLevelSumsFollowEnvelope) {
  // per-level l2 mass on the L^inf scale divided by the envelope stays in
  // the xi band [1/2, 1] times sqrt(|Nabla_j|) * 2^{-|j|_1/2}
  SampleParams sp;
  sp.seed = 3;
  sp.q = 0.5;
  sp.r = 0.75;
  const int n = 2;
  const auto u = random_decay_coefficients(haar(), sp, n, 8);
  std::map<std::array<int, 3>, std::pair<double, double>> level;
  for (const auto &[idx, v] : u.entries) {
    auto &[sum, cnt] = level[idx.j];
    sum += v * v;
    cnt += 1.0;
  }
  for (const auto &[j, sc] : level) {
    const double l1 = j[0] + j[1], linf = std::max(j[0], j[1]);
    const double env = std::exp2(-(sp.q * linf + (sp.r + 0.5) * l1));
    const double rms = std::sqrt(sc.first / sc.second) / env;
    EXPECT_GE(rms, 0.5);
    EXPECT_LE(rms, 1.0);
  }
}

TEST(TestFunctions, RejectsBadInput) {
  EXPECT_THROW(
      {
        try {
          (void)parse_kind("wiggle");
        } catch (const Error &e) {
          EXPECT_EQ(e.code(), ErrorCode::UnknownKind);
          throw;
        }
      },
      Error);
  EXPECT_THROW((void)sample_function(FunctionKind::smooth, {}, haar(), 2, 13), Error);
  EXPECT_THROW((void)sample_function(FunctionKind::smooth, {}, haar(), 3, 9), Error);
  EXPECT_THROW((void)sample_function(FunctionKind::smooth, {}, haar(), 4, 2), Error);
}

TEST(TestFunctions, TensorKinkFavoursHyperbolicApproximation) {
  SampleParams sp;
  sp.beta = 0.5;
  const int n = 2, m = 10;
  const auto c = samples_to_single_scale(sample_function(FunctionKind::tensor_kink, sp, haar(), n, m));
  const auto u = hyper_forward(haar(), c);
  const auto v = iso_forward(haar(), c);
  const auto grid = doubling_grid(16, 4096);
  const double rh = fit_rate(error_curve(u, 0.0, grid), 16, 4096);
  const double ri = fit_rate(error_curve(v, 0.0, grid), 16, 4096);
  EXPECT_GT(rh, ri + 0.1);
}
