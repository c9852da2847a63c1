#include <gtest/gtest.h>

#include <cmath>

#include "hyperwave/seqnorms.hpp"
#include "support/random.hpp"

using namespace hyperwave;

namespace {

CoeffVector single_hyper(int j1, int j2, double value) {
  return CoeffVector{System::hyperbolic, 2, 2.0, "haar", 8, {{hyper_index({j1, j2}, {0, 0}), value}}};
}

CoeffVector single_iso(int m, double value) {
  return CoeffVector{System::isotropic, 2, 2.0, "haar", 8, {{iso_index(2, m, {1, 1}, {0, 0}), value}}};
}

const BasisSpec &haar() {
  static const BasisSpec b = make_haar_basis(0, 9);
  return b;
}

} // namespace

TEST(BesovIso, SingleCoefficient) {
  EXPECT_DOUBLE_EQ(besov_iso_norm(single_iso(2, 1.0), 1.0, 2.0, 2.0), 4.0);
}

TEST(BesovIso, ZeroAndPlainL2) {
  CoeffVector z{System::isotropic, 2, 2.0, "haar", 3, {}};
  EXPECT_EQ(besov_iso_norm(z, 1.0, 2.0, 2.0), 0.0);
  detail::Rng rng(1);
  const auto v = iso_forward(haar(), fixtures::random_array(rng, 2, 16));
  double sq = 0.0;
  for (const auto &e : v.entries)
    sq += e.second * e.second;
  EXPECT_NEAR(besov_iso_norm(v, 0.0, 2.0, 2.0), std::sqrt(sq), 1e-12);
}

TEST(BesovIso, WrongSystem) {
  try {
    besov_iso_norm(single_hyper(1, 1, 1.0), 0.0, 2.0, 2.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::WrongSystem);
  }
  EXPECT_THROW(besov_hybrid_norm(single_iso(1, 1.0), {}), Error);
}

TEST(BesovHybrid, ExponentsCancelForSingleCoefficient) {
  for (double s : {0.25, 0.5, 1.0, 2.0}) {
    const double tau = 1.0 / (s + 0.5);
    EXPECT_NEAR(besov_hybrid_norm(single_hyper(2, 3, 1.0), {1.0, s, tau, tau}), 8.0, 1e-12);
  }
}

TEST(BesovHybrid, InfinityModifications) {
  CoeffVector u{System::hyperbolic, 2, 2.0, "haar", 3,
                {{hyper_index({0, 0}, {0, 0}), 3.0}, {hyper_index({1, 0}, {0, 0}), -4.0},
                 {hyper_index({1, 0}, {0, 1}), 1.0}}};
  u.normalize();
  // p = inf: level (1,0) contributes max |u^(inf)| = 4 * 2^{1/2}
  const double level10 = 4.0 * std::sqrt(2.0);
  EXPECT_NEAR(besov_hybrid_norm(u, {0.0, 0.0, detail::kInf, detail::kInf}), level10, 1e-12);
  EXPECT_NEAR(besov_hybrid_norm(u, {0.0, 0.0, detail::kInf, 1.0}), 3.0 + level10, 1e-12);
  EXPECT_NEAR(besov_hybrid_norm(u, {1.0, 0.0, 2.0, detail::kInf}), 2.0 * std::sqrt(17.0), 1e-12);
}

TEST(BesovHybrid, PlainL2AndGkIdentity) {
  detail::Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto u = fixtures::random_sparse_hyper(haar(), rng, 2, 6, 40);
    double sq = 0.0;
    for (const auto &e : u.entries)
      sq += e.second * e.second;
    EXPECT_NEAR(besov_hybrid_norm(u, {0.0, 0.0, 2.0, 2.0}), std::sqrt(sq), 1e-12 * std::sqrt(sq));
    const double q = rng.uniform(-1, 1), s = rng.uniform(-1, 1);
    EXPECT_EQ(besov_hybrid_norm(u, {q, s, 2.0, 2.0}), gk_norm(u, q, s));
    EXPECT_EQ(besov_hybrid_norm(u, {q, 0.0, 2.0, 2.0}), sobolev_norm_hyper(u, q));
  }
}

TEST(Sobolev, SingleCoefficients) {
  EXPECT_DOUBLE_EQ(sobolev_norm_hyper(single_hyper(1, 3, 1.0), 1.0), 8.0);
  EXPECT_DOUBLE_EQ(sobolev_norm_iso(single_iso(2, 1.0), 1.0), 4.0);
  EXPECT_DOUBLE_EQ(sobolev_norm_hyper(single_hyper(1, 3, -2.0), 0.0), 2.0);
  EXPECT_DOUBLE_EQ(gk_norm(single_hyper(2, 2, 1.0), -1.0, 0.5), 1.0);
}

TEST(Sobolev, IsoIdentity) {
  detail::Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto v = iso_forward(haar(), fixtures::random_array(rng, 2, 32));
    const double s = rng.uniform(-1, 1);
    EXPECT_EQ(besov_iso_norm(v, s, 2.0, 2.0), sobolev_norm_iso(v, s));
  }
}

TEST(Norms, HomogeneityAndMonotonicity) {
  detail::Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    auto u = fixtures::random_sparse_hyper(haar(), rng, 2, 5, 30);
    const NormParams np{0.3, 0.2, 1.0, 0.8};
    const double base = besov_hybrid_norm(u, np);
    auto scaled = u;
    for (auto &e : scaled.entries)
      e.second *= -2.5;
    EXPECT_NEAR(besov_hybrid_norm(scaled, np), 2.5 * base, 1e-12 * base);
    EXPECT_GE(besov_hybrid_norm(u, {0.5, 0.2, 1.0, 0.8}), base);
    EXPECT_GE(besov_hybrid_norm(u, {0.3, 0.4, 1.0, 0.8}), base);
  }
}

TEST(Norms, PNormalizationIsInternal) {
  detail::Rng rng(8);
  const auto u = fixtures::random_sparse_hyper(haar(), rng, 2, 5, 20);
  const NormParams np{0.1, 0.3, 1.5, 1.0};
  EXPECT_NEAR(besov_hybrid_norm(rescale(u, 0.7), np), besov_hybrid_norm(u, np),
              1e-12 * besov_hybrid_norm(u, np));
}

TEST(Norms, InvalidExponents) {
  EXPECT_THROW(besov_hybrid_norm(single_hyper(0, 0, 1), {0, 0, 0.0, 1.0}), Error);
  EXPECT_THROW(besov_iso_norm(single_iso(1, 1), 0, 1.0, -1.0), Error);
}

TEST(WeakLtau, Examples) {
  const std::vector<double> h{1, 0.5, 1.0 / 3.0, 0.25};
  EXPECT_DOUBLE_EQ(weak_ltau(h, 1.0), 1.0);
  const std::vector<double> one{-3.5};
  EXPECT_DOUBLE_EQ(weak_ltau(one, 0.7), 3.5);
}

TEST(WeakLtau, BelowStrongNorm) {
  detail::Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(1 + rng.below(50));
    for (auto &v : x)
      v = rng.normal();
    const double tau = rng.uniform(0.3, 2.0);
    EXPECT_LE(weak_ltau(x, tau), lp_norm(x, tau) * (1 + 1e-14));
  }
}

TEST(Window, HaarSobolevRange) {
  EXPECT_TRUE(sobolev_window(haar(), 0.3));
  EXPECT_TRUE(sobolev_window(haar(), -0.3));
  EXPECT_FALSE(sobolev_window(haar(), 0.5));
}
