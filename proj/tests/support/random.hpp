#pragma once

#include <cmath>

#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/suites.hpp"
#include "hyperwave/tensorbasis.hpp"

namespace hyperwave::fixtures {

inline NdArray random_array(detail::Rng &rng, int n, Eigen::Index extent) {
  NdArray a(n, extent);
  for (auto &v : a.data)
    v = rng.normal();
  return a;
}

/// Dense random hyperbolic coefficients at truncation m.
inline CoeffVector random_hyper(const BasisSpec &spec, detail::Rng &rng, int n, int m) {
  return hyper_from_layout(spec, random_array(rng, n, spec.delta_size(m)));
}

using hyperwave::random_sparse_hyper;

inline double max_abs_diff(const NdArray &a, const NdArray &b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    w = std::max(w, std::abs(a.data[i] - b.data[i]));
  return w;
}

inline double max_abs(const NdArray &a) {
  double w = 0.0;
  for (double v : a.data)
    w = std::max(w, std::abs(v));
  return w;
}

inline double max_abs_diff(const CoeffVector &a, const CoeffVector &b) {
  double w = 0.0;
  for (const auto &[idx, v] : a.entries)
    w = std::max(w, std::abs(v - b.at(idx)));
  for (const auto &[idx, v] : b.entries)
    w = std::max(w, std::abs(v - a.at(idx)));
  return w;
}

} // namespace hyperwave::fixtures
