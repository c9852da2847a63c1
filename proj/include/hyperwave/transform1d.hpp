#pragma once

// Univariate multiscale transforms.
//
// T_m maps multiscale coefficients (c_{j0}, d_{j0+1}, ..., d_m) to
// single-scale coefficients c_m, i.e. [Phi_{j0}, Psi_{j0+1}, ..., Psi_m] =
// Phi_m T_m. Its dual satisfies T~_m^T T_m = I, so the analysis map is
// T~_m^T. Both are applied matrix-free by the level-by-level cascade; the
// explicit matrices are only assembled for verification.

#include <cmath>
#include <span>
#include <vector>

#include "hyperwave/band_matrix.hpp"
#include "hyperwave/basis1d.hpp"
#include "hyperwave/error.hpp"

namespace hyperwave {

/// Multiscale coefficient blocks (c_{j0}, d_{j0+1}, ..., d_m).
struct MultiscaleVector {
  int j0 = 0;
  int m = 0;
  std::vector<std::vector<double>> blocks;

  std::vector<double> concat() const {
    std::vector<double> out;
    for (const auto &b : blocks)
      out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  static MultiscaleVector split(const BasisSpec &spec, int m, std::span<const double> flat) {
    MultiscaleVector ms{spec.j0(), m, {}};
    for (int j = spec.j0(); j <= m; ++j) {
      const auto off = static_cast<std::size_t>(spec.block_offset(j));
      const auto len = static_cast<std::size_t>(spec.nabla_size(j));
      ms.blocks.emplace_back(flat.begin() + off, flat.begin() + off + len);
    }
    return ms;
  }
};

/// Level and position of every slot of a level-m multiscale vector.
struct MultiscaleLayout {
  std::vector<int> level;
  std::vector<Eigen::Index> position;

  MultiscaleLayout(const BasisSpec &spec, int m) {
    const auto n = static_cast<std::size_t>(spec.delta_size(m));
    level.resize(n);
    position.resize(n);
    for (int j = spec.j0(); j <= m; ++j) {
      const Eigen::Index off = spec.block_offset(j);
      for (Eigen::Index k = 0; k < spec.nabla_size(j); ++k) {
        level[static_cast<std::size_t>(off + k)] = j;
        position[static_cast<std::size_t>(off + k)] = k;
      }
    }
  }
};

// --- one-level steps --------------------------------------------------------

/// c_{j-1} = M~_{j,0}^T c_j, d_j = M~_{j,1}^T c_j; written as [c_{j-1}, d_j].
inline void analysis_step(const BasisSpec &spec, int j, std::span<const double> fine,
                          std::span<double> out) {
  const auto &q = spec.masks(j);
  const auto coarse = static_cast<std::size_t>(q.dual_scaling.cols());
  q.dual_scaling.apply_transpose(fine, out.first(coarse));
  q.dual_wavelet.apply_transpose(fine, out.subspan(coarse, static_cast<std::size_t>(q.dual_wavelet.cols())));
}

/// c_j = M_{j,0} c_{j-1} + M_{j,1} d_j from [c_{j-1}, d_j].
inline void synthesis_step(const BasisSpec &spec, int j, std::span<const double> coarse_and_detail,
                           std::span<double> fine) {
  const auto &q = spec.masks(j);
  const auto coarse = static_cast<std::size_t>(q.primal_scaling.cols());
  std::fill(fine.begin(), fine.end(), 0.0);
  q.primal_scaling.apply_add(coarse_and_detail.first(coarse), fine);
  q.primal_wavelet.apply_add(
      coarse_and_detail.subspan(coarse, static_cast<std::size_t>(q.primal_wavelet.cols())), fine);
}

// --- full cascades on flat storage -----------------------------------------

/// In-place T~_m^T on a buffer of length |Delta_m|; scratch must hold as
/// many values.
inline void forward_inplace(const BasisSpec &spec, int m, std::span<double> data,
                            std::span<double> scratch) {
  for (int l = m; l > spec.j0(); --l) {
    const auto n = static_cast<std::size_t>(spec.delta_size(l));
    analysis_step(spec, l, data.first(n), scratch.first(n));
    std::copy_n(scratch.begin(), n, data.begin());
  }
}

/// In-place T_m on a buffer of length |Delta_m|.
inline void inverse_inplace(const BasisSpec &spec, int m, std::span<double> data,
                            std::span<double> scratch) {
  for (int l = spec.j0() + 1; l <= m; ++l) {
    const auto n = static_cast<std::size_t>(spec.delta_size(l));
    synthesis_step(spec, l, data.first(n), scratch.first(n));
    std::copy_n(scratch.begin(), n, data.begin());
  }
}

/// Multiply-add count of one cascade at level m (sum of mask nonzeros).
inline Eigen::Index cascade_operation_count(const BasisSpec &spec, int m) {
  Eigen::Index ops = 0;
  for (int l = spec.j0() + 1; l <= m; ++l) {
    const auto &q = spec.masks(l);
    ops += q.dual_scaling.nonzeros() + q.dual_wavelet.nonzeros();
  }
  return ops;
}

inline int level_of_length(const BasisSpec &spec, std::size_t n) {
  const int m = spec.level_for_size(static_cast<Eigen::Index>(n));
  require(m >= 0, ErrorCode::DimensionMismatch,
          "length " + std::to_string(n) + " is not |Delta_m| for any supplied level");
  return m;
}

/// T~_m^T c_m, partitioned into blocks.
inline MultiscaleVector forward(const BasisSpec &spec, std::span<const double> c) {
  const int m = level_of_length(spec, c.size());
  std::vector<double> data(c.begin(), c.end()), scratch(c.size());
  forward_inplace(spec, m, data, scratch);
  return MultiscaleVector::split(spec, m, data);
}

/// T_m concat(ms).
inline std::vector<double> inverse(const BasisSpec &spec, const MultiscaleVector &ms) {
  require(ms.j0 == spec.j0(), ErrorCode::DimensionMismatch, "coarsest level mismatch");
  require(static_cast<int>(ms.blocks.size()) == ms.m - ms.j0 + 1, ErrorCode::DimensionMismatch,
          "block count does not match level range");
  spec.check_level(ms.m);
  for (int j = ms.j0; j <= ms.m; ++j)
    require(static_cast<Eigen::Index>(ms.blocks[static_cast<std::size_t>(j - ms.j0)].size()) ==
                spec.nabla_size(j),
            ErrorCode::DimensionMismatch, "block length mismatch at level " + std::to_string(j));
  auto data = ms.concat();
  std::vector<double> scratch(data.size());
  inverse_inplace(spec, ms.m, data, scratch);
  return data;
}

// --- explicit assembly ------------------------------------------------------

struct TransformPair {
  BandMatrix primal; ///< T_m
  BandMatrix dual;   ///< T~_m
};

/// Assembles T_m = F_m F_{m-1} ... F_{j0+1} with
/// F_l = diag([M_{l,0}, M_{l,1}], I), and T~_m in the same way from the
/// dual masks.
inline TransformPair build_transform(const BasisSpec &spec, int m) {
  require(m >= spec.j0(), ErrorCode::LevelBelowCoarsest, "transform level below coarsest level");
  spec.check_level(m);
  BandMatrix primal = BandMatrix::identity(spec.delta_size(spec.j0()));
  BandMatrix dual = primal;
  for (int l = spec.j0() + 1; l <= m; ++l) {
    const auto &q = spec.masks(l);
    const auto step_p = BandMatrix::hcat(q.primal_scaling, q.primal_wavelet);
    const auto step_d = BandMatrix::hcat(q.dual_scaling, q.dual_wavelet);
    const Eigen::Index rest = spec.delta_size(l) - spec.delta_size(l - 1);
    // T_l = [M_{l,0}, M_{l,1}] diag(T_{l-1}, I)
    primal = step_p * BandMatrix::block_diag(primal, BandMatrix::identity(rest));
    dual = step_d * BandMatrix::block_diag(dual, BandMatrix::identity(rest));
  }
  return {std::move(primal), std::move(dual)};
}

/// Largest ratio |t_{mu,lambda}| / (2^{(j-m)/2} (1 + sep)^{-alpha}) over the
/// entries of T_m, where mu = (m, l) is a single-scale row and lambda =
/// (j, k) a multiscale column. The separation sep is the distance, in
/// level-j units, from row l to the row range covered by column lambda.
inline double check_entry_decay(const BasisSpec &spec, int m, double alpha) {
  require(m > spec.j0(), ErrorCode::LevelTooCoarse, "decay check needs m > j0");
  require(alpha > 0.0 && alpha <= spec.alpha(), ErrorCode::ExponentOutOfRange,
          "alpha must lie in (0, spec.alpha]");
  const auto t = build_transform(spec, m).primal;
  const MultiscaleLayout layout(spec, m);
  const auto &mat = t.storage();
  double worst = 0.0;
  for (Eigen::Index c = 0; c < mat.outerSize(); ++c) {
    const int j = layout.level[static_cast<std::size_t>(c)];
    const auto [lo, hi] = t.column_support(c);
    if (lo < 0)
      continue;
    for (BandMatrix::Storage::InnerIterator it(mat, c); it; ++it) {
      const Eigen::Index row = it.row();
      const double gap = static_cast<double>(std::max<Eigen::Index>({0, lo - row, row - hi}));
      const double sep = std::exp2(j - m) * gap;
      const double bound = std::exp2(0.5 * (j - m)) * std::pow(1.0 + sep, -alpha);
      worst = std::max(worst, std::abs(it.value()) / bound);
    }
  }
  return worst;
}

} // namespace hyperwave
