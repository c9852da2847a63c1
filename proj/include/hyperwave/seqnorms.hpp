#pragma once

// Discrete Sobolev and Besov sequence norms on hyperbolic and isotropic
// coefficients. Weights use raw levels (j >= j0, not j - j0). Level sums
// are pairwise so that results do not depend on how work is split.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hyperwave/basis1d.hpp"
#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/tensorbasis.hpp"

namespace hyperwave {

/// (q, s, p, tau) selecting a hybrid Besov norm.
struct NormParams {
  double q = 0.0;
  double s = 0.0;
  double p = 2.0;
  double tau = 2.0;
};

namespace detail {

inline void check_exponent(double e, const char *name) {
  require(e > 0.0 && !std::isnan(e), ErrorCode::InvalidExponent,
          std::string(name) + " must lie in (0, inf]");
}

/// (sum |x|^p)^(1/p), or max |x| for p = inf.
inline double lp_sum(std::span<const double> x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : x)
      m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> pw(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    pw[i] = std::pow(std::abs(x[i]), p);
  return std::pow(pairwise_sum(pw), 1.0 / p);
}

/// [sum_g 2^{tau w_g} S_g^tau]^(1/tau) over groups with weight exponent
/// w_g and inner l^p norm S_g, or max_g 2^{w_g} S_g for tau = inf.
struct LevelTerms {
  std::vector<double> weight;
  std::vector<double> inner;
};

inline double combine(const LevelTerms &t, double tau) {
  if (std::isinf(tau)) {
    double m = 0.0;
    for (std::size_t g = 0; g < t.inner.size(); ++g)
      if (t.inner[g] != 0.0)
        m = std::max(m, std::exp2(t.weight[g]) * t.inner[g]);
    return m;
  }
  std::vector<double> terms(t.inner.size());
  for (std::size_t g = 0; g < t.inner.size(); ++g)
    terms[g] = t.inner[g] == 0.0 ? 0.0 : std::exp2(tau * t.weight[g]) * std::pow(t.inner[g], tau);
  return std::pow(pairwise_sum(terms), 1.0 / tau);
}

/// Groups consecutive entries of a sorted vector by key(index) and
/// collects the l^p norm of each group.
template <class Key, class Weight>
LevelTerms level_terms(const CoeffVector &c, double p, Key key, Weight weight) {
  LevelTerms t;
  std::vector<double> group;
  std::size_t i = 0;
  while (i < c.entries.size()) {
    const auto k = key(c.entries[i].first);
    group.clear();
    std::size_t e = i;
    for (; e < c.entries.size() && key(c.entries[e].first) == k; ++e)
      group.push_back(c.entries[e].second);
    t.weight.push_back(weight(c.entries[i].first));
    t.inner.push_back(lp_sum(group, p));
    i = e;
  }
  return t;
}

} // namespace detail

/// Isotropic Besov norm [sum_m 2^{tau m alpha} (sum_{|mu|=m} |v_mu^(p)|^p)^{tau/p}]^{1/tau}.
inline double besov_iso_norm(const CoeffVector &v, double alpha, double p, double tau) {
  require_system(v, System::isotropic);
  detail::check_exponent(p, "p");
  detail::check_exponent(tau, "tau");
  const auto vp = v.p_norm == p ? v : rescale(v, p);
  const auto terms = detail::level_terms(
      vp, p, [](const CoeffIndex &i) { return i.level(); },
      [alpha](const CoeffIndex &i) { return alpha * i.level(); });
  return detail::combine(terms, tau);
}

/// Hybrid Besov norm
/// [sum_j 2^{tau(q|j|_inf + s|j|_1)} (sum_{lambda in Nabla_j} |u^(p)|^p)^{tau/p}]^{1/tau}.
inline double besov_hybrid_norm(const CoeffVector &u, const NormParams &np) {
  require_system(u, System::hyperbolic);
  detail::check_exponent(np.p, "p");
  detail::check_exponent(np.tau, "tau");
  const auto up = u.p_norm == np.p ? u : rescale(u, np.p);
  const int n = u.n;
  const auto terms = detail::level_terms(
      up, np.p, [](const CoeffIndex &i) { return i.j; },
      [&](const CoeffIndex &i) { return np.q * i.linf(n) + np.s * i.l1(n); });
  return detail::combine(terms, np.tau);
}

/// Griebel-Knapek norm (sum 2^{2q|lambda|_inf + 2s|lambda|_1} |u|^2)^{1/2};
/// the p = tau = 2 hybrid norm, for q of either sign.
inline double gk_norm(const CoeffVector &u, double q, double s) {
  return besov_hybrid_norm(u, NormParams{q, s, 2.0, 2.0});
}

/// (sum 2^{2s|lambda|_inf} |u|^2)^{1/2}
inline double sobolev_norm_hyper(const CoeffVector &u, double s) {
  return besov_hybrid_norm(u, NormParams{s, 0.0, 2.0, 2.0});
}

/// (sum 2^{2s|mu|} |v|^2)^{1/2}
inline double sobolev_norm_iso(const CoeffVector &v, double s) {
  return besov_iso_norm(v, s, 2.0, 2.0);
}

/// Whether s lies in the window (-gamma~, gamma) of the norm equivalences.
inline bool sobolev_window(const BasisSpec &spec, double s) {
  return s > -spec.gamma_tilde() && s < spec.gamma();
}

/// (sum |x|^p)^(1/p), max for p = inf.
inline double lp_norm(std::span<const double> x, double p) {
  detail::check_exponent(p, "p");
  return detail::lp_sum(x, p);
}

/// Weak-l^tau quasinorm sup_k k^{1/tau} |x*(k)| of the descending
/// rearrangement.
inline double weak_ltau(std::span<const double> values, double tau) {
  detail::check_exponent(tau, "tau");
  std::vector<double> a(values.size());
  std::transform(values.begin(), values.end(), a.begin(), [](double v) { return std::abs(v); });
  std::sort(a.begin(), a.end(), std::greater<>());
  double sup = 0.0;
  for (std::size_t k = 0; k < a.size() && a[k] > 0.0; ++k)
    sup = std::max(sup, std::pow(static_cast<double>(k + 1), detail::inv(tau)) * a[k]);
  return sup;
}

} // namespace hyperwave
