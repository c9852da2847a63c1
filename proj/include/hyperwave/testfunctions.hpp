#pragma once

// Seeded test data with known smoothness: midpoint samples on the dyadic
// grid {2^-m (k + 1/2)}^n.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "hyperwave/basis1d.hpp"
#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/tensorbasis.hpp"

namespace hyperwave {

enum class FunctionKind { smooth, point_kink, tensor_kink, random_decay };

inline FunctionKind parse_kind(const std::string &s) {
  if (s == "smooth") return FunctionKind::smooth;
  if (s == "point_kink") return FunctionKind::point_kink;
  if (s == "tensor_kink") return FunctionKind::tensor_kink;
  if (s == "random_decay") return FunctionKind::random_decay;
  throw Error(ErrorCode::UnknownKind, "unknown function kind '" + s + "'");
}

inline std::string to_string(FunctionKind k) {
  switch (k) {
  case FunctionKind::smooth: return "smooth";
  case FunctionKind::point_kink: return "point_kink";
  case FunctionKind::tensor_kink: return "tensor_kink";
  case FunctionKind::random_decay: return "random_decay";
  }
  return "unknown";
}

inline constexpr int kMaxSampleLevel = 12;
/// Largest number of grid points n*m may address.
inline constexpr int kMaxSampleBits = 24;

struct SampleParams {
  double beta = 0.5; ///< kink exponent
  std::array<double, kMaxDim> x0{1.0 / 3, 1.0 / 3, 1.0 / 3}; ///< point_kink centre
  double q = 0.0; ///< random_decay envelope
  double r = 1.0;
  std::uint64_t seed = 1;
};

/// Hyperbolic L2 coefficients of random_decay: random sign times
/// xi * 2^{-(q|j|_inf + r|j|_1)} applied to the L^inf-normalized coefficient,
/// so the L2 coefficient carries an extra 2^{-|j|_1/2}; xi ~ U(1/2, 1).
inline CoeffVector random_decay_coefficients(const BasisSpec &spec, const SampleParams &sp, int n,
                                             int m) {
  check_dimension(n);
  spec.check_level(m);
  NdArray layout(n, spec.delta_size(m));
  auto u = hyper_from_layout(spec, layout);
  detail::Rng rng(sp.seed);
  for (auto &[idx, v] : u.entries) {
    const double xi = rng.uniform(0.5, 1.0);
    const double sign = rng.sign();
    v = sign * xi * std::exp2(-(sp.q * idx.linf(n) + (sp.r + 0.5) * idx.l1(n)));
  }
  return u;
}

/// Samples of the requested kind at level m. For random_decay the
/// coefficients are synthesized with `spec` and the level-m single-scale
/// coefficients c are returned as function values 2^{nm/2} c.
inline NdArray sample_function(FunctionKind kind, const SampleParams &sp, const BasisSpec &spec,
                               int n, int m) {
  check_dimension(n);
  require(m >= 0 && m <= kMaxSampleLevel, ErrorCode::LevelTooCoarse,
          "sample level must lie in 0..12");
  require(n * m <= kMaxSampleBits, ErrorCode::SizeTooLarge,
          "grid of 2^(n m) points exceeds 2^24");
  const Eigen::Index e = Eigen::Index{1} << m;
  if (kind == FunctionKind::random_decay) {
    require(spec.delta_size(m) == e, ErrorCode::DimensionMismatch,
            "random_decay needs a basis with |Delta_m| = 2^m");
    auto a = hyper_inverse(spec, random_decay_coefficients(spec, sp, n, m));
    const double scale = std::exp2(0.5 * n * m);
    for (auto &v : a.data)
      v *= scale;
    return a;
  }
  NdArray a(n, e);
  std::vector<double> x(static_cast<std::size_t>(e));
  for (Eigen::Index k = 0; k < e; ++k)
    x[static_cast<std::size_t>(k)] = std::ldexp(static_cast<double>(k) + 0.5, -m);
  std::array<Eigen::Index, kMaxDim> slot{};
  auto coord = [&](int i) { return x[static_cast<std::size_t>(slot[static_cast<std::size_t>(i)])]; };
  for (std::size_t t = 0; t < a.data.size(); ++t) {
    auto rest = static_cast<Eigen::Index>(t);
    for (int i = n - 1; i >= 0; --i) {
      slot[static_cast<std::size_t>(i)] = rest % e;
      rest /= e;
    }
    double v = 1.0;
    switch (kind) {
    case FunctionKind::smooth:
      for (int i = 0; i < n; ++i)
        v *= std::sin(std::numbers::pi * coord(i));
      break;
    case FunctionKind::tensor_kink:
      for (int i = 0; i < n; ++i)
        v *= std::pow(std::abs(coord(i) - 0.5), sp.beta);
      break;
    case FunctionKind::point_kink: {
      double r2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = coord(i) - sp.x0[static_cast<std::size_t>(i)];
        r2 += d * d;
      }
      v = std::pow(r2, 0.5 * sp.beta);
      break;
    }
    case FunctionKind::random_decay:
      break;
    }
    a.data[t] = v;
  }
  return a;
}

/// Single-scale coefficients of sampled values: c = 2^{-nm/2} f (exact for
/// the Haar basis, midpoint quadrature otherwise).
inline NdArray samples_to_single_scale(NdArray a) {
  Eigen::Index m = 0;
  while ((Eigen::Index{1} << m) < a.extent)
    ++m;
  const double scale = std::exp2(-0.5 * a.n * static_cast<double>(m));
  for (auto &v : a.data)
    v *= scale;
  return a;
}

} // namespace hyperwave
