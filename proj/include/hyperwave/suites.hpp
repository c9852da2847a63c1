#pragma once

// Verification suites producing report rows. Sweeps over levels run on the
// worker pool; every item draws from its own seeded substream, so reports do
// not depend on thread count or scheduling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hyperwave/basis1d.hpp"
#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/nterm.hpp"
#include "hyperwave/parallel.hpp"
#include "hyperwave/seqnorms.hpp"
#include "hyperwave/tensorbasis.hpp"
#include "hyperwave/transform1d.hpp"
#include "hyperwave/verify.hpp"

namespace hyperwave {

// --- random coefficient vectors -------------------------------------------------

/// Dense hyperbolic coefficients at truncation m with standard normal values.
inline CoeffVector random_dense_hyper(const BasisSpec &spec, detail::Rng &rng, int n, int m) {
  NdArray a(n, spec.delta_size(m));
  for (auto &v : a.data)
    v = rng.normal();
  return hyper_from_layout(spec, a);
}

/// `count` distinct hyperbolic indices at truncation m, per-axis levels
/// uniform in j0..m, standard normal values.
inline CoeffVector random_sparse_hyper(const BasisSpec &spec, detail::Rng &rng, int n, int m,
                                       std::size_t count) {
  check_dimension(n);
  spec.check_level(m);
  require(static_cast<double>(count) <= std::pow(static_cast<double>(spec.delta_size(m)), n),
          ErrorCode::SizeTooLarge, "more indices requested than the truncation holds");
  CoeffVector u{System::hyperbolic, n, 2.0, spec.name(), m, {}};
  const auto levels = static_cast<std::uint64_t>(m - spec.j0() + 1);
  while (u.entries.size() < count) {
    CoeffIndex idx;
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      idx.j[ii] = spec.j0() + static_cast<int>(rng.below(levels));
      idx.k[ii] = static_cast<Eigen::Index>(
          rng.below(static_cast<std::uint64_t>(spec.nabla_size(idx.j[ii]))));
    }
    if (u.at(idx) != 0.0)
      continue;
    u.entries.emplace_back(idx, rng.normal());
    u.normalize();
  }
  return u;
}

// --- suites -------------------------------------------------------------------

enum class Suite { biorth, kron, lemma1, lemma2, lemma4, riesz, embedding, jackson, equivalence };

inline const std::vector<std::pair<std::string, Suite>> &suite_names() {
  static const std::vector<std::pair<std::string, Suite>> names{
      {"biorth", Suite::biorth},         {"kron", Suite::kron},
      {"lemma1", Suite::lemma1},         {"lemma2", Suite::lemma2},
      {"lemma4", Suite::lemma4},         {"riesz", Suite::riesz},
      {"embedding", Suite::embedding},   {"jackson", Suite::jackson},
      {"equivalence", Suite::equivalence}};
  return names;
}

inline Suite parse_suite(const std::string &s) {
  for (const auto &[name, suite] : suite_names())
    if (name == s)
      return suite;
  throw Error(ErrorCode::UnknownKind, "unknown suite '" + s + "'");
}

/// Unset fields take per-suite defaults.
struct SuiteOptions {
  std::optional<int> m_max;
  std::vector<double> p;
  std::optional<double> q;
  std::optional<double> s;
  std::optional<double> r;
  std::uint64_t seed = 1;
};

inline constexpr double kBiorthTolerance = 1e-12;
inline constexpr double kUnitNormTolerance = 1e-10;
inline constexpr double kKronTolerance = 1e-12;
inline constexpr double kKronSpectralTolerance = 1e-9;
inline constexpr double kEntryDecayBound = 2.0;
inline constexpr double kTransformNormDrift = 0.1;
inline constexpr double kEquivalenceBound = 10.0;
inline constexpr double kEquivalenceDrift = 0.25;
inline constexpr double kEmbeddingDrift = 0.25;
inline constexpr double kJacksonBound = 4.0;
inline constexpr double kRieszDrift = 0.1;

namespace detail {

inline std::string param(const std::string &key, double v) { return key + "=" + format17(v); }

/// (R(last) - R(last - 2)) / R(last) for the running maximum R.
inline double running_max_drift(std::span<const double> values) {
  require(values.size() >= 3, ErrorCode::InsufficientPoints,
          "stabilization test needs at least 3 levels");
  double r = 0.0;
  std::vector<double> run;
  for (double v : values)
    run.push_back(r = std::max(r, v));
  const double last = run.back();
  if (!std::isfinite(last) || last <= 0.0)
    return kInf;
  return (last - run[run.size() - 3]) / last;
}

inline bool is_orthogonal(const BasisSpec &spec, int m_max) {
  for (int l = spec.j0() + 1; l <= m_max; ++l) {
    const auto &q = spec.masks(l);
    if ((q.primal_scaling.storage() - q.dual_scaling.storage()).norm() != 0.0 ||
        (q.primal_wavelet.storage() - q.dual_wavelet.storage()).norm() != 0.0)
      return false;
  }
  return true;
}

inline CheckRow info_row(std::string check, std::string par, int m, double value) {
  return {std::move(check), std::move(par), m, value, kInf, true};
}

inline CheckRow bound_row(std::string check, std::string par, int m, double value, double bound) {
  return {std::move(check), std::move(par), m, value, bound, value <= bound};
}

} // namespace detail

inline std::vector<CheckRow> suite_biorth(const BasisSpec &spec, const SuiteOptions &o) {
  const int m_max = o.m_max.value_or(std::min(10, spec.max_level()));
  std::vector<CheckRow> rows;
  for (int m = spec.j0(); m <= m_max; ++m)
    rows.push_back(detail::bound_row("biorth", spec.name(), m, check_biorthogonality(spec, m),
                                     kBiorthTolerance));
  return rows;
}

/// 20 random dense 4x4 pairs per p in {1, inf, 2}; value is the largest
/// relative gap between ||A x B||_p and ||A||_p ||B||_p.
inline std::vector<CheckRow> suite_kron(const SuiteOptions &o) {
  std::vector<CheckRow> rows;
  const std::vector<std::pair<double, double>> grid{
      {1.0, kKronTolerance}, {detail::kInf, kKronTolerance}, {2.0, kKronSpectralTolerance}};
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto [p, tol] = grid[g];
    detail::Rng rng(detail::substream_seed(o.seed, g));
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const auto a = random_sparse_matrix(rng, 4, 4, 1.0);
      const auto b = random_sparse_matrix(rng, 4, 4, 1.0);
      const auto k = check_kron_identity(a, b, p);
      worst = std::max(worst, std::abs(k.lhs - k.rhs) / k.rhs);
    }
    rows.push_back(detail::bound_row("kron", detail::param("p", p), 4, worst, tol));
  }
  return rows;
}

/// 200 random sparse matrices per p; value is the largest ratio of the
/// operator estimate to the column bound.
inline std::vector<CheckRow> suite_lemma1(const SuiteOptions &o) {
  const std::vector<double> ps = o.p.empty() ? std::vector<double>{0.5, 0.8, 1.0} : o.p;
  std::vector<CheckRow> rows;
  for (std::size_t g = 0; g < ps.size(); ++g) {
    const double p = ps[g];
    require(p > 0.0 && p <= 1.0, ErrorCode::InvalidExponent, "lemma1 needs 0 < p <= 1");
    detail::Rng rng(detail::substream_seed(o.seed, g));
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const auto rows_n = static_cast<Eigen::Index>(1 + rng.below(16));
      const auto cols_n = static_cast<Eigen::Index>(1 + rng.below(16));
      const auto a = random_sparse_matrix(rng, rows_n, cols_n, 0.3);
      worst = std::max(worst, operator_p_norm_estimate(a, p) / matrix_p_norm_bound(a, p));
    }
    rows.push_back(detail::bound_row("lemma1", detail::param("p", p), 0, worst, 1.0 + 1e-12));
  }
  return rows;
}

inline std::vector<CheckRow> suite_lemma2(const BasisSpec &spec, const SuiteOptions &o) {
  const int m_max = o.m_max.value_or(std::min(10, spec.max_level()));
  const double alpha = std::min(4.0, spec.alpha());
  std::vector<CheckRow> rows;
  for (int m = spec.j0() + 1; m <= m_max; ++m)
    rows.push_back(detail::bound_row("lemma2", detail::param("alpha", alpha), m,
                                     check_entry_decay(spec, m, alpha), kEntryDecayBound));
  return rows;
}

/// Per p: the four transform norms and two scaled ratios per level, the
/// drift of their running maxima over the last three levels, and for
/// orthogonal bases the p = 2 unit-norm defect.
inline std::vector<CheckRow> suite_lemma4(const BasisSpec &spec, const SuiteOptions &o) {
  const std::vector<double> ps = o.p.empty() ? std::vector<double>{0.6, 1.0, 1.5, 2.0} : o.p;
  const int m_max = o.m_max.value_or(std::min(12, spec.max_level()));
  const auto reports = parallel_map(ps.size(), [&](std::size_t g) {
    return check_transform_norms(spec, ps[g], m_max, detail::substream_seed(o.seed, g));
  });
  std::vector<CheckRow> rows;
  const bool orthogonal = detail::is_orthogonal(spec, m_max);
  for (const auto &rep : reports) {
    const auto par = detail::param("p", rep.p);
    std::vector<double> pt, dt, pr, dr;
    double unit = 0.0;
    for (const auto &r : rep.rows) {
      rows.push_back(detail::info_row("lemma4_primal", par, r.m, r.primal));
      rows.push_back(detail::info_row("lemma4_dual", par, r.m, r.dual));
      rows.push_back(detail::info_row("lemma4_primal_transpose", par, r.m, r.primal_transpose));
      rows.push_back(detail::info_row("lemma4_dual_transpose", par, r.m, r.dual_transpose));
      pt.push_back(r.primal_transpose);
      dt.push_back(r.dual_transpose);
      pr.push_back(r.primal_ratio);
      dr.push_back(r.dual_ratio);
      for (double v : {r.primal, r.dual, r.primal_transpose, r.dual_transpose})
        unit = std::max(unit, std::abs(v - 1.0));
    }
    rows.push_back(detail::bound_row(
        "lemma4_transpose_drift", par, m_max,
        std::max(detail::running_max_drift(pt), detail::running_max_drift(dt)), kTransformNormDrift));
    rows.push_back(detail::bound_row(
        "lemma4_ratio_drift", par, m_max,
        std::max(detail::running_max_drift(pr), detail::running_max_drift(dr)), kTransformNormDrift));
    if (orthogonal && rep.p == 2.0)
      rows.push_back(detail::bound_row("lemma4_unit", par, m_max, unit, kUnitNormTolerance));
  }
  return rows;
}

inline std::vector<CheckRow> suite_riesz(const BasisSpec &spec, const SuiteOptions &o) {
  const int m_max = o.m_max.value_or(std::min(8, spec.max_level()));
  std::vector<int> ms;
  for (int m = spec.j0(); m <= m_max; ++m)
    ms.push_back(m);
  const auto checks = parallel_map(ms.size(), [&](std::size_t i) { return check_riesz(spec, ms[i]); });
  std::vector<CheckRow> rows;
  std::vector<double> cond;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    rows.push_back(detail::info_row("riesz_condition", spec.name(), ms[i], checks[i].condition));
    cond.push_back(checks[i].condition);
  }
  rows.push_back(detail::bound_row("riesz_drift", spec.name(), m_max,
                                   detail::running_max_drift(cond), kRieszDrift));
  return rows;
}

/// Cross-system H^s equivalence on 100 dense random vectors per level:
/// C(m) = max(max ratio, 1 / min ratio) must stay below 10 and settle over
/// the last three levels.
inline std::vector<CheckRow> suite_equivalence(const BasisSpec &spec, const SuiteOptions &o) {
  const std::vector<double> ss =
      o.s ? std::vector<double>{*o.s} : std::vector<double>{-0.3, 0.0, 0.3};
  const int m_max = o.m_max.value_or(std::min(8, spec.max_level()));
  std::vector<std::pair<double, int>> items;
  for (double s : ss)
    for (int m = spec.j0() + 1; m <= m_max; ++m)
      items.emplace_back(s, m);
  const auto c = parallel_map(items.size(), [&](std::size_t i) {
    const auto [s, m] = items[i];
    detail::Rng rng(detail::substream_seed(o.seed, i));
    double lo = detail::kInf, hi = 0.0;
    for (int t = 0; t < 100; ++t) {
      const double r = check_norm_equivalence(spec, random_dense_hyper(spec, rng, 2, m), s);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return std::max(hi, 1.0 / lo);
  });
  std::vector<CheckRow> rows;
  for (double s : ss) {
    std::vector<double> tail;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (items[i].first == s) {
        rows.push_back(detail::bound_row("equivalence", detail::param("s", s), items[i].second, c[i],
                                         kEquivalenceBound));
        tail.push_back(c[i]);
      }
    require(tail.size() >= 3, ErrorCode::InsufficientPoints, "equivalence needs three levels");
    const auto last3 = std::span<const double>(tail).last(3);
    const double hi = *std::max_element(last3.begin(), last3.end());
    const double lo = *std::min_element(last3.begin(), last3.end());
    rows.push_back(detail::bound_row("equivalence_drift", detail::param("s", s), m_max,
                                     (hi - lo) / hi, kEquivalenceDrift));
  }
  return rows;
}

/// Embedding chain on 100 dense random vectors per level m = 4..m_max:
/// the running maxima of both ratios settle over the last three levels.
inline std::vector<CheckRow> suite_embedding(const BasisSpec &spec, const SuiteOptions &o) {
  std::vector<std::pair<double, double>> qs{{0.0, 0.25}, {0.1, 0.2}};
  if (o.q || o.s)
    qs = {{o.q.value_or(0.0), o.s.value_or(0.25)}};
  const int m_max = o.m_max.value_or(std::min(8, spec.max_level()));
  const int m_min = std::max(spec.j0() + 1, 4);
  for (const auto &[q, s] : qs)
    require(embedding_window(spec, 2, q, s), ErrorCode::ExponentOutOfRange,
            "(q, s) lies outside the embedding window");
  std::vector<std::tuple<std::size_t, int>> items;
  for (std::size_t g = 0; g < qs.size(); ++g)
    for (int m = m_min; m <= m_max; ++m)
      items.emplace_back(g, m);
  const auto sup = parallel_map(items.size(), [&](std::size_t i) {
    const auto [g, m] = items[i];
    detail::Rng rng(detail::substream_seed(o.seed, i));
    std::pair<double, double> w{0.0, 0.0};
    for (int t = 0; t < 100; ++t) {
      const auto e = check_embedding_chain(spec, random_dense_hyper(spec, rng, 2, m), qs[g].first,
                                           qs[g].second);
      w.first = std::max(w.first, e.lower_ratio);
      w.second = std::max(w.second, e.upper_ratio);
    }
    return w;
  });
  std::vector<CheckRow> rows;
  for (std::size_t g = 0; g < qs.size(); ++g) {
    const auto par = detail::param("q", qs[g].first) + ";" + detail::param("s", qs[g].second);
    std::vector<double> lower, upper;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (std::get<0>(items[i]) == g) {
        const int m = std::get<1>(items[i]);
        rows.push_back(detail::info_row("embedding_lower", par, m, sup[i].first));
        rows.push_back(detail::info_row("embedding_upper", par, m, sup[i].second));
        lower.push_back(sup[i].first);
        upper.push_back(sup[i].second);
      }
    rows.push_back(detail::bound_row("embedding_lower_drift", par, m_max,
                                     detail::running_max_drift(lower), kEmbeddingDrift));
    rows.push_back(detail::bound_row("embedding_upper_drift", par, m_max,
                                     detail::running_max_drift(upper), kEmbeddingDrift));
  }
  return rows;
}

/// Jackson and Bernstein suprema over 500 random 64-sparse vectors per
/// truncation level m = 5..m_max.
inline std::vector<CheckRow> suite_jackson(const BasisSpec &spec, const SuiteOptions &o) {
  std::vector<std::pair<double, double>> qr{{0.0, 1.0}, {0.25, 0.5}, {-0.25, 0.5}};
  if (o.q || o.r)
    qr = {{o.q.value_or(0.0), o.r.value_or(1.0)}};
  const int m_max = o.m_max.value_or(std::min(8, spec.max_level()));
  const int m_min = std::max(spec.j0() + 1, 5);
  std::vector<std::tuple<std::size_t, int>> items;
  for (std::size_t g = 0; g < qr.size(); ++g)
    for (int m = m_min; m <= m_max; ++m)
      items.emplace_back(g, m);
  const auto sup = parallel_map(items.size(), [&](std::size_t i) {
    const auto [g, m] = items[i];
    detail::Rng rng(detail::substream_seed(o.seed, i));
    JacksonBernstein w;
    for (int t = 0; t < 500; ++t) {
      const auto jb =
          jackson_bernstein_ratios(random_sparse_hyper(spec, rng, 2, m, 64), qr[g].first, qr[g].second);
      w.jackson_sup = std::max(w.jackson_sup, jb.jackson_sup);
      w.bernstein_sup = std::max(w.bernstein_sup, jb.bernstein_sup);
    }
    return w;
  });
  std::vector<CheckRow> rows;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto [g, m] = items[i];
    const auto par = detail::param("q", qr[g].first) + ";" + detail::param("r", qr[g].second);
    rows.push_back(detail::bound_row("jackson", par, m, sup[i].jackson_sup, kJacksonBound));
    rows.push_back(detail::bound_row("bernstein", par, m, sup[i].bernstein_sup, kJacksonBound));
  }
  return rows;
}

inline std::vector<CheckRow> run_suite(Suite suite, const BasisSpec &spec, const SuiteOptions &o) {
  switch (suite) {
  case Suite::biorth: return suite_biorth(spec, o);
  case Suite::kron: return suite_kron(o);
  case Suite::lemma1: return suite_lemma1(o);
  case Suite::lemma2: return suite_lemma2(spec, o);
  case Suite::lemma4: return suite_lemma4(spec, o);
  case Suite::riesz: return suite_riesz(spec, o);
  case Suite::embedding: return suite_embedding(spec, o);
  case Suite::jackson: return suite_jackson(spec, o);
  case Suite::equivalence: return suite_equivalence(spec, o);
  }
  throw Error(ErrorCode::UnknownKind, "unknown suite");
}

inline bool all_pass(std::span<const CheckRow> rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow &r) { return r.pass; });
}

} // namespace hyperwave
