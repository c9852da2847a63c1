#pragma once

// Best N-term approximation in H^q. Since the rescaled system is a Riesz
// basis of H^q, the error is measured in the weighted l^2 metric and the
// best N terms are the N largest weights w_lambda = 2^{q|lambda|_inf}|u_lambda|
// (2^{q|mu|}|v_mu| on the isotropic side).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/seqnorms.hpp"
#include "hyperwave/tensorbasis.hpp"

namespace hyperwave {

struct NTermResult {
  double q = 0.0;
  /// Indices of the best N terms, in selection order (for best_nterm; the
  /// largest N of the list for error_curve).
  std::vector<CoeffIndex> support;
  /// (N, E_N) pairs in the requested order.
  std::vector<std::pair<std::int64_t, double>> errors;

  double error_at(std::int64_t n) const {
    for (const auto &[k, e] : errors)
      if (k == n)
        return e;
    throw Error(ErrorCode::DimensionMismatch, "no error recorded for N=" + std::to_string(n));
  }
};

/// Weights sorted descending with ties broken by index order.
struct RankedWeights {
  std::vector<CoeffIndex> index;
  std::vector<double> weight;
  /// tail[N] = sum_{i >= N} weight_i^2, tail[size] = 0.
  std::vector<double> tail;
};

inline RankedWeights rank_weights(const CoeffVector &c, double q) {
  const auto u = c.p_norm == 2.0 ? c : rescale(c, 2.0);
  RankedWeights r;
  std::vector<std::pair<double, std::size_t>> w;
  w.reserve(u.entries.size());
  for (std::size_t i = 0; i < u.entries.size(); ++i) {
    const auto &[idx, v] = u.entries[i];
    if (v == 0.0)
      continue;
    const int level = u.system == System::hyperbolic ? idx.linf(u.n) : idx.level();
    w.emplace_back(std::exp2(q * level) * std::abs(v), i);
  }
  // entries are sorted by index, so a stable sort on weight alone keeps
  // lexicographic order among ties
  std::stable_sort(w.begin(), w.end(), [](const auto &a, const auto &b) { return a.first > b.first; });
  r.index.reserve(w.size());
  r.weight.reserve(w.size());
  for (const auto &[wt, i] : w) {
    r.index.push_back(u.entries[i].first);
    r.weight.push_back(wt);
  }
  // Suffix sums from the small end keep tails accurate.
  r.tail.assign(w.size() + 1, 0.0);
  for (std::size_t i = w.size(); i-- > 0;)
    r.tail[i] = r.tail[i + 1] + r.weight[i] * r.weight[i];
  return r;
}

/// Best N-term approximation of u in H^q.
inline NTermResult best_nterm(const CoeffVector &u, double q, std::int64_t n_terms) {
  require(n_terms >= 0, ErrorCode::DimensionMismatch, "N must be nonnegative");
  const auto r = rank_weights(u, q);
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(n_terms), r.weight.size());
  NTermResult out;
  out.q = q;
  out.support.assign(r.index.begin(), r.index.begin() + static_cast<std::ptrdiff_t>(keep));
  out.errors.emplace_back(n_terms, std::sqrt(r.tail[keep]));
  return out;
}

/// E_N for every N of an ascending list, from one sort.
inline NTermResult error_curve(const CoeffVector &u, double q, std::span<const std::int64_t> ns) {
  require(std::is_sorted(ns.begin(), ns.end()), ErrorCode::DimensionMismatch,
          "N list must be ascending");
  const auto r = rank_weights(u, q);
  NTermResult out;
  out.q = q;
  for (auto n : ns) {
    require(n >= 0, ErrorCode::DimensionMismatch, "N must be nonnegative");
    const auto keep = std::min<std::size_t>(static_cast<std::size_t>(n), r.weight.size());
    out.errors.emplace_back(n, std::sqrt(r.tail[keep]));
  }
  if (!ns.empty()) {
    const auto keep = std::min<std::size_t>(static_cast<std::size_t>(ns.back()), r.weight.size());
    out.support.assign(r.index.begin(), r.index.begin() + static_cast<std::ptrdiff_t>(keep));
  }
  return out;
}

/// 1, 2, 4, ... up to and including the last power of two <= n_max.
inline std::vector<std::int64_t> doubling_grid(std::int64_t n_min, std::int64_t n_max) {
  std::vector<std::int64_t> g;
  for (std::int64_t n = std::max<std::int64_t>(n_min, 1); n <= n_max; n *= 2)
    g.push_back(n);
  return g;
}

/// Least-squares rate: minus the slope of log E_N against log N over the
/// points with n_min <= N <= n_max, N > 0, E_N > 0.
inline double fit_rate(const NTermResult &curve, std::int64_t n_min, std::int64_t n_max) {
  std::vector<double> x, y;
  for (const auto &[n, e] : curve.errors)
    if (n >= n_min && n <= n_max && n > 0 && e > 0.0) {
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(std::log(e));
    }
  require(x.size() >= 3, ErrorCode::InsufficientPoints,
          "rate fit needs at least 3 points with positive error, got " + std::to_string(x.size()));
  const double k = static_cast<double>(x.size());
  const double mx = detail::pairwise_sum(x) / k, my = detail::pairwise_sum(y) / k;
  std::vector<double> sxy(x.size()), sxx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy[i] = (x[i] - mx) * (y[i] - my);
    sxx[i] = (x[i] - mx) * (x[i] - mx);
  }
  return -detail::pairwise_sum(sxy) / detail::pairwise_sum(sxx);
}

struct JacksonBernstein {
  double jackson_sup = 0.0;
  double bernstein_sup = 0.0;
};

/// Jackson: sup_N max(N,1)^r E_N(u) / ||u||_B with the B^{q,r,tau}_tau norm,
/// 1/tau = r + 1/2. Bernstein: max over nested greedy truncations u_N of
/// ||u_N||_B / (N^r ||u_N||_{H^q}). The Bernstein side only checks the
/// greedy family, a necessary condition for the inequality over all of V_N.
inline JacksonBernstein jackson_bernstein_ratios(const CoeffVector &u, double q, double r) {
  require_system(u, System::hyperbolic);
  require(r > 0.0, ErrorCode::InvalidExponent, "r must be positive");
  const double tau = 1.0 / (r + 0.5);
  const auto ranked = rank_weights(u, q);
  const double besov = besov_hybrid_norm(u, NormParams{q, r, tau, tau});
  require(besov > 0.0 && !ranked.weight.empty(), ErrorCode::DivisionByZero,
          "zero coefficient vector");
  JacksonBernstein out;
  const std::size_t m = ranked.weight.size();
  for (std::size_t n = 0; n <= m; ++n) {
    const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
    out.jackson_sup = std::max(out.jackson_sup, std::pow(nn, r) * std::sqrt(ranked.tail[n]) / besov);
  }
  const CoeffVector u2 = u.p_norm == 2.0 ? u : rescale(u, 2.0);
  CoeffVector partial = u2;
  partial.entries.clear();
  for (std::size_t n = 1; n <= m; ++n) {
    const auto &idx = ranked.index[n - 1];
    const auto pos = std::lower_bound(partial.entries.begin(), partial.entries.end(), idx,
                                      [](const auto &e, const CoeffIndex &i) { return e.first < i; });
    partial.entries.insert(pos, {idx, u2.at(idx)});
    const double num = besov_hybrid_norm(partial, NormParams{q, r, tau, tau});
    const double den = std::pow(static_cast<double>(n), r) * sobolev_norm_hyper(partial, q);
    require(den > 0.0, ErrorCode::DivisionByZero, "vanishing H^q norm of a truncation");
    out.bernstein_sup = std::max(out.bernstein_sup, num / den);
  }
  return out;
}

/// CSV of an error curve: N,E_N,q,r,tau,basis,n,seed.
inline void write_curve_csv(std::ostream &os, const NTermResult &curve, double r, double tau,
                            const std::string &basis, int n, std::uint64_t seed,
                            bool header = true) {
  if (header)
    os << "N,E_N,q,r,tau,basis,n,seed\n";
  for (const auto &[k, e] : curve.errors)
    os << k << ',' << detail::format17(e) << ',' << detail::format17(curve.q) << ','
       << detail::format17(r) << ',' << detail::format17(tau) << ',' << basis << ',' << n << ','
       << seed << '\n';
}

} // namespace hyperwave
