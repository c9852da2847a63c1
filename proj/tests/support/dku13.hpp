#pragma once

// Test fixture: masks of the piecewise-constant biorthogonal interval basis
// with (d, d~) = (1, 3), supplied the way a user would supply them.
// Primal scaling functions are Haar boxes; the primal wavelets are given
// cell-wise and the dual masks follow from [M~0, M~1] = [M0, M1]^{-T}.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "hyperwave/basis1d.hpp"

namespace hyperwave::fixtures {

inline MaskQuad dku13_masks(int j) {
  const Eigen::Index n = Eigen::Index{1} << j, h = n / 2;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double s = 1.0 / std::numbers::sqrt2;
  for (Eigen::Index k = 0; k < h; ++k)
    m(2 * k, k) = m(2 * k + 1, k) = s;
  const double left[6] = {5, -11, 4, 4, -1, -1};
  const double inner[6] = {-1, -1, 8, -8, 1, 1};
  const double right[6] = {-1, -1, 4, 4, -11, 5};
  for (int i = 0; i < 6; ++i)
    m(i, h) = left[i] / 8.0;
  for (Eigen::Index k = 1; k < h - 1; ++k)
    for (int i = 0; i < 6; ++i)
      m(2 * k - 2 + i, h + k) = inner[i] / 8.0;
  for (int i = 0; i < 6; ++i)
    m(n - 6 + i, 2 * h - 1) = right[i] / 8.0;

  Eigen::MatrixXd dual = m.inverse().transpose();
  // Dual scaling entries are integers / (8 sqrt 2), dual wavelet entries +-1/2.
  const double unit0 = 1.0 / (8.0 * std::numbers::sqrt2);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) {
      const double unit = c < h ? unit0 : 0.5;
      dual(r, c) = std::round(dual(r, c) / unit) * unit;
    }
  const auto block = [](const Eigen::MatrixXd &d) { return BandMatrix::from_dense(d); };
  return MaskQuad{block(m.leftCols(h)), block(m.rightCols(h)), block(dual.leftCols(h)),
                  block(dual.rightCols(h))};
}

inline std::vector<MaskQuad> dku13_mask_levels(int max_level) {
  std::vector<MaskQuad> out;
  for (int j = 3; j <= max_level; ++j)
    out.push_back(dku13_masks(j));
  return out;
}

inline BasisParams dku13_params() {
  return BasisParams{"dku13", 1, 3, 0.5, 0.5, kCompactSupportAlpha, 2};
}

inline BasisSpec make_dku13_basis(int max_level = 9) {
  return make_mask_basis(dku13_mask_levels(max_level), dku13_params());
}

} // namespace hyperwave::fixtures
