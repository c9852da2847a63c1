#pragma once

// Numerical checks of the structural lemmata: p-norm bounds for matrices,
// transform norm growth, Kronecker norm identities, biorthogonality, Riesz
// stability and the embedding chain between hybrid and isotropic Besov
// norms.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperwave/band_matrix.hpp"
#include "hyperwave/basis1d.hpp"
#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/seqnorms.hpp"
#include "hyperwave/tensorbasis.hpp"
#include "hyperwave/transform1d.hpp"

namespace hyperwave {

/// One line of a verification report.
struct CheckRow {
  std::string check;
  std::string param;
  int m = 0;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

inline void write_report_csv(std::ostream &os, std::span<const CheckRow> rows, bool header = true) {
  if (header)
    os << "check,param,m,value,bound,pass\n";
  for (const auto &r : rows)
    os << r.check << ',' << r.param << ',' << r.m << ',' << detail::format17(r.value) << ','
       << detail::format17(r.bound) << ',' << (r.pass ? 1 : 0) << '\n';
}

// --- matrix p-norms -----------------------------------------------------------

namespace detail {

inline double abs_pow(double v, double p) { return p == 1.0 ? std::abs(v) : std::pow(std::abs(v), p); }

/// max_j (sum_i |a_ij|^p)^(1/p), p in (0, inf).
inline double max_column_p(const BandMatrix &a, double p) {
  const auto &m = a.storage();
  double worst = 0.0;
  std::vector<double> col;
  for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
    col.clear();
    for (BandMatrix::Storage::InnerIterator it(m, c); it; ++it)
      col.push_back(abs_pow(it.value(), p));
    worst = std::max(worst, pairwise_sum(col));
  }
  return std::pow(worst, 1.0 / p);
}

inline double max_row_sum(const BandMatrix &a) {
  std::vector<double> rows(static_cast<std::size_t>(a.rows()), 0.0);
  const auto &m = a.storage();
  for (Eigen::Index c = 0; c < m.outerSize(); ++c)
    for (BandMatrix::Storage::InnerIterator it(m, c); it; ++it)
      rows[static_cast<std::size_t>(it.row())] += std::abs(it.value());
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

inline double vec_p(std::span<const double> x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : x)
      m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    t[i] = abs_pow(x[i], p);
  return std::pow(pairwise_sum(t), 1.0 / p);
}

inline constexpr double kPowerTolerance = 1e-10;
inline constexpr int kPowerMaxIterations = 10000;

/// Largest singular value by power iteration on A^T A, stopped when the
/// eigen-residual falls below kPowerTolerance relative to the estimate.
inline double spectral_norm(const BandMatrix &a, std::uint64_t seed) {
  if (a.nonzeros() == 0)
    return 0.0;
  const auto &m = a.storage();
  Rng rng(seed);
  Eigen::VectorXd x(a.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x(i) = 1.0 + 0.5 * rng.uniform();
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < kPowerMaxIterations; ++it) {
    const Eigen::VectorXd y = m.transpose() * (m * x);
    lambda = x.dot(y);
    const double residual = (y - lambda * x).norm();
    const double ny = y.norm();
    if (ny == 0.0)
      return 0.0;
    x = y / ny;
    if (residual <= kPowerTolerance * lambda)
      break;
  }
  // Rayleigh quotient of the final iterate
  const Eigen::VectorXd ax = m * x;
  return std::max(std::sqrt(std::max(lambda, 0.0)), ax.norm());
}

/// Boyd's power method for 1 < p < inf; returns ||Ax||_p/||x||_p at the
/// final iterate (a lower bound).
inline double boyd_power(const BandMatrix &a, double p, Eigen::VectorXd x) {
  const auto &m = a.storage();
  const double q = p / (p - 1.0);
  auto ratio = [&](const Eigen::VectorXd &v) {
    const Eigen::VectorXd y = m * v;
    const double den = vec_p(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), p);
    return den == 0.0 ? 0.0
                      : vec_p(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), p) / den;
  };
  double best = ratio(x);
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd y = m * x;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y(i) = std::copysign(std::pow(std::abs(y(i)), p - 1.0), y(i));
    Eigen::VectorXd z = m.transpose() * y;
    if (z.isZero(0.0))
      break;
    for (Eigen::Index i = 0; i < z.size(); ++i)
      z(i) = std::copysign(std::pow(std::abs(z(i)), q - 1.0), z(i));
    const double r = ratio(z);
    x = z;
    if (r <= best * (1.0 + 1e-12)) {
      best = std::max(best, r);
      break;
    }
    best = r;
  }
  return best;
}

} // namespace detail

/// Column bound (max_j sum_i |a_ij|^p)^(1/p) on ||A||_p for 0 < p <= 1.
inline double matrix_p_norm_bound(const BandMatrix &a, double p) {
  require(p > 0.0 && p <= 1.0, ErrorCode::InvalidExponent, "column p-norm bound needs 0 < p <= 1");
  return detail::max_column_p(a, p);
}

/// Lower bound on ||A||_p = sup ||Ax||_p / ||x||_p, exact for p in
/// {1, 2, inf}: column sums, row sums and the largest singular value. For
/// p <= 1 coordinate vectors attain the column bound, so the estimate is
/// exact there too; for other p it is the best of the coordinate vectors
/// and Boyd power iterations from `trials` random starts.
inline double operator_p_norm_estimate(const BandMatrix &a, double p, int trials = 8,
                                       std::uint64_t seed = 1) {
  require(p > 0.0 && !std::isnan(p), ErrorCode::InvalidExponent, "p must lie in (0, inf]");
  if (std::isinf(p))
    return detail::max_row_sum(a);
  if (p == 1.0)
    return detail::max_column_p(a, 1.0);
  if (p == 2.0)
    return detail::spectral_norm(a, seed);
  double best = detail::max_column_p(a, p);
  detail::Rng rng(seed);
  const auto &m = a.storage();
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd x(a.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x(i) = rng.normal();
    if (p < 1.0) {
      const Eigen::VectorXd y = m * x;
      const double den =
          detail::vec_p(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), p);
      if (den > 0.0)
        best = std::max(best, detail::vec_p(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), p) / den);
    } else {
      best = std::max(best, detail::boyd_power(a, p, x));
    }
  }
  if (p > 1.0)
    best = std::max(best, detail::boyd_power(a, p, Eigen::VectorXd::Ones(a.cols())));
  return best;
}

/// Random sparse matrix with about `density` * rows * cols normal entries.
inline BandMatrix random_sparse_matrix(detail::Rng &rng, Eigen::Index rows, Eigen::Index cols,
                                       double density) {
  std::vector<Triplet> t;
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r)
      if (rng.uniform() < density)
        t.push_back({r, c, rng.normal()});
  if (t.empty())
    t.push_back({0, 0, 1.0});
  return BandMatrix::from_triplets(rows, cols, t);
}

// --- transform norms ----------------------------------------------------------

struct TransformNormRow {
  int m = 0;
  double primal = 0.0;            ///< ||T_m||_p
  double dual = 0.0;              ///< ||T~_m||_p
  double primal_transpose = 0.0;  ///< ||T_m^T||_p
  double dual_transpose = 0.0;    ///< ||T~_m^T||_p
  double primal_ratio = 0.0;      ///< ||T_m||_p 2^{-m(1/p - 1/2)}
  double dual_ratio = 0.0;        ///< ||T~_m||_p 2^{-m(1/p - 1/2)}
};

struct TransformNormReport {
  double p = 2.0;
  std::vector<TransformNormRow> rows;
  bool transpose_bounded = false;
  bool ratio_bounded = false;
};

/// Stabilization test for a finite sequence: with running maximum R, the
/// last three values R(m) lie within `tolerance` of R(last).
inline bool running_max_stable(std::span<const double> values, double tolerance = 0.1) {
  if (values.size() < 3)
    return false;
  std::vector<double> run(values.size());
  double r = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    run[i] = r = std::max(r, values[i]);
  const double last = run.back();
  if (!std::isfinite(last))
    return false;
  return last - run[run.size() - 3] <= tolerance * last;
}

inline TransformNormReport check_transform_norms(const BasisSpec &spec, double p, int m_max,
                                                 std::uint64_t seed = 1) {
  require(p > 1.0 / spec.alpha() && p <= 2.0, ErrorCode::ExponentOutOfRange,
          "transform norm sweep needs 1/alpha < p <= 2");
  spec.check_level(m_max);
  TransformNormReport rep;
  rep.p = p;
  std::vector<double> tr, ra;
  for (int m = spec.j0() + 1; m <= m_max; ++m) {
    const auto t = build_transform(spec, m);
    TransformNormRow row;
    row.m = m;
    row.primal = operator_p_norm_estimate(t.primal, p, 4, seed);
    row.dual = operator_p_norm_estimate(t.dual, p, 4, seed);
    row.primal_transpose = operator_p_norm_estimate(t.primal.transpose(), p, 4, seed);
    row.dual_transpose = operator_p_norm_estimate(t.dual.transpose(), p, 4, seed);
    const double scale = std::exp2(-m * (1.0 / p - 0.5));
    row.primal_ratio = row.primal * scale;
    row.dual_ratio = row.dual * scale;
    rep.rows.push_back(row);
  }
  auto column = [&](auto member) {
    std::vector<double> v;
    for (const auto &r : rep.rows)
      v.push_back(r.*member);
    return v;
  };
  rep.transpose_bounded = running_max_stable(column(&TransformNormRow::primal_transpose)) &&
                          running_max_stable(column(&TransformNormRow::dual_transpose));
  rep.ratio_bounded = running_max_stable(column(&TransformNormRow::primal_ratio)) &&
                      running_max_stable(column(&TransformNormRow::dual_ratio));
  return rep;
}

// --- Kronecker products --------------------------------------------------------

inline constexpr Eigen::Index kKronMaxFactor = 64;

struct KronCheck {
  double lhs = 0.0; ///< ||A x B||_p
  double rhs = 0.0; ///< ||A||_p ||B||_p
};

inline KronCheck check_kron_identity(const BandMatrix &a, const BandMatrix &b, double p) {
  require(p == 1.0 || p == 2.0 || std::isinf(p), ErrorCode::InvalidExponent,
          "Kronecker identity is checked for p in {1, 2, inf}");
  for (const auto *f : {&a, &b})
    require(f->rows() <= kKronMaxFactor && f->cols() <= kKronMaxFactor, ErrorCode::SizeTooLarge,
            "Kronecker factors are limited to 64x64");
  BandMatrix::Storage k = Eigen::kroneckerProduct(a.storage(), b.storage());
  const BandMatrix kb(std::move(k));
  return {operator_p_norm_estimate(kb, p), operator_p_norm_estimate(a, p) * operator_p_norm_estimate(b, p)};
}

// --- biorthogonality and Riesz stability --------------------------------------

/// max |T~_m^T T_m - I|.
inline double check_biorthogonality(const BasisSpec &spec, int m) {
  const auto t = build_transform(spec, m);
  return detail::max_abs_deviation(t.dual.transpose() * t.primal, true);
}

struct RieszCheck {
  double condition = 0.0;
  double diagonal_defect = 0.0; ///< max |G_ll - 1|
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Gram matrix of {psi_lambda : |lambda| <= m}, G = T_m^T R^T R T_m, where R
/// refines Phi_m to level L = min(m + 4, max_level) and level-L scaling
/// functions are treated as orthonormal (exact for piecewise-constant
/// primal bases).
inline RieszCheck check_riesz(const BasisSpec &spec, int m) {
  spec.check_level(m);
  const int fine = std::min(m + 4, spec.max_level());
  BandMatrix r = BandMatrix::identity(spec.delta_size(m));
  for (int l = m + 1; l <= fine; ++l)
    r = spec.masks(l).primal_scaling * r;
  const auto t = build_transform(spec, m).primal;
  const BandMatrix rt = r * t;
  const Eigen::MatrixXd g = (rt.transpose() * rt).dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  RieszCheck out;
  out.lambda_min = es.eigenvalues().minCoeff();
  out.lambda_max = es.eigenvalues().maxCoeff();
  out.condition = out.lambda_max / out.lambda_min;
  out.diagonal_defect = (g.diagonal().array() - 1.0).abs().maxCoeff();
  return out;
}

// --- cross-system norm checks (n = 2) -----------------------------------------

/// sobolev_norm_hyper(u, s) / sobolev_norm_iso(iso_from_hyper(u), s).
inline double check_norm_equivalence(const BasisSpec &spec, const CoeffVector &u, double s) {
  const auto v = iso_from_hyper(spec, u);
  const double den = sobolev_norm_iso(v, s);
  require(den > 0.0, ErrorCode::DivisionByZero, "zero coefficient vector");
  return sobolev_norm_hyper(u, s) / den;
}

/// Parameter window of the embedding theorem: s < alpha - 1/2 and
/// q + s, q + s n > max(0, n (s - 1/2)).
inline bool embedding_window(const BasisSpec &spec, int n, double q, double s) {
  const double floor = std::max(0.0, n * (s - 0.5));
  return s < spec.alpha() - 0.5 && q + s > floor && q + s * n > floor;
}

struct EmbeddingCheck {
  double lower_ratio = 0.0; ///< |v|_{b^{q+s}} / |u|_{b^{q,s}}
  double upper_ratio = 0.0; ///< |u|_{b^{q,s}} / |v|_{b^{q+2s}}
  bool in_window = true;
};

/// Both sides of B^{q+2s} -> hybrid B^{q,s} -> B^{q+s} on one vector,
/// with 1/tau = s + 1/2.
inline EmbeddingCheck check_embedding_chain(const BasisSpec &spec, const CoeffVector &u, double q,
                                            double s) {
  require_system(u, System::hyperbolic);
  require(u.n == 2, ErrorCode::UnsupportedDimension, "embedding chain implemented for n = 2");
  const double tau = 1.0 / (s + 0.5);
  const auto v = iso_from_hyper(spec, u);
  const double hybrid = besov_hybrid_norm(u, NormParams{q, s, tau, tau});
  const double iso_low = besov_iso_norm(v, q + s, tau, tau);
  const double iso_high = besov_iso_norm(v, q + 2.0 * s, tau, tau);
  require(hybrid > 0.0 && iso_high > 0.0, ErrorCode::DivisionByZero, "zero coefficient vector");
  return {iso_low / hybrid, hybrid / iso_high, embedding_window(spec, 2, q, s)};
}

} // namespace hyperwave
