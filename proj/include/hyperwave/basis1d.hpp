#pragma once

// Univariate biorthogonal multiscale bases on [0,1].
//
// A basis is described entirely by its refinement masks: for every level
// j > j0 the four matrices M_{j,0}, M_{j,1} (primal) and their duals with
//
//   Phi_{j-1} = Phi_j M_{j,0},   Psi_j = Phi_j M_{j,1},
//
// and likewise on the dual side. Index sets are Delta_j (scaling
// functions) and Nabla_j (wavelets); on the coarsest level the wavelet
// indices alias the scaling indices.

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hyperwave/band_matrix.hpp"
#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/error.hpp"

namespace hyperwave {

/// Refinement masks of one level j: M_{j,0}, M_{j,1}, M~_{j,0}, M~_{j,1}.
struct MaskQuad {
  BandMatrix primal_scaling;
  BandMatrix primal_wavelet;
  BandMatrix dual_scaling;
  BandMatrix dual_wavelet;
};

enum class IndexKind { scaling, wavelet };

/// Univariate index (j, k).
struct LevelIndex {
  int j = 0;
  Eigen::Index k = 0;
  IndexKind kind = IndexKind::wavelet;
};

/// Decay exponent stored for compactly supported bases.
inline constexpr double kCompactSupportAlpha = 64.0;

/// Haar masks satisfy the block identities to this tolerance.
inline constexpr double kHaarTolerance = 1e-12;
/// Tolerance for masks supplied by the user.
inline constexpr double kMaskTolerance = 1e-10;
/// Default bound on mask bandwidth.
inline constexpr Eigen::Index kMaxBandwidth = 32;

struct BasisParams {
  std::string name = "custom";
  int d = 1;
  int d_tilde = 1;
  double gamma = 0.5;
  double gamma_tilde = 0.5;
  double alpha = kCompactSupportAlpha;
  int j0 = 0;
};

/// Immutable description of a biorthogonal multiscale basis. Copies share
/// the mask storage.
class BasisSpec {
public:
  BasisSpec(BasisParams params, Eigen::Index coarse_size, std::vector<MaskQuad> masks)
      : params_(std::move(params)) {
    std::vector<Eigen::Index> sizes{coarse_size};
    for (const auto &q : masks)
      sizes.push_back(q.primal_scaling.rows());
    data_ = std::make_shared<const Data>(Data{std::move(masks), std::move(sizes)});
  }

  const std::string &name() const { return params_.name; }
  const BasisParams &params() const { return params_; }
  int d() const { return params_.d; }
  int d_tilde() const { return params_.d_tilde; }
  double gamma() const { return params_.gamma; }
  double gamma_tilde() const { return params_.gamma_tilde; }
  double alpha() const { return params_.alpha; }
  int j0() const { return params_.j0; }

  /// Finest level for which masks are available.
  int max_level() const { return j0() + static_cast<int>(data_->masks.size()); }

  const MaskQuad &masks(int j) const {
    check_level(j);
    if (j <= j0())
      throw Error(ErrorCode::LevelBelowCoarsest,
                  "no masks on the coarsest level " + std::to_string(j0()));
    return data_->masks[static_cast<std::size_t>(j - j0() - 1)];
  }

  /// |Delta_j|
  Eigen::Index delta_size(int j) const {
    check_level(j);
    return data_->delta[static_cast<std::size_t>(j - j0())];
  }

  /// |Nabla_j|; equals |Delta_j0| on the coarsest level.
  Eigen::Index nabla_size(int j) const {
    check_level(j);
    if (j == j0())
      return delta_size(j);
    return delta_size(j) - delta_size(j - 1);
  }

  /// Offset of the level-j block inside a multiscale vector
  /// (c_{j0}, d_{j0+1}, ..., d_m).
  Eigen::Index block_offset(int j) const { return j == j0() ? 0 : delta_size(j - 1); }

  /// Level whose |Delta| equals n, or -1.
  int level_for_size(Eigen::Index n) const {
    for (int j = j0(); j <= max_level(); ++j)
      if (delta_size(j) == n)
        return j;
    return -1;
  }

  void check_level(int j) const {
    if (j < j0())
      throw Error(ErrorCode::LevelBelowCoarsest,
                  "level " + std::to_string(j) + " below coarsest level " + std::to_string(j0()));
    if (j > max_level())
      throw Error(ErrorCode::DimensionMismatch,
                  "level " + std::to_string(j) + " beyond the finest supplied mask level " +
                      std::to_string(max_level()));
  }

private:
  struct Data {
    std::vector<MaskQuad> masks;
    std::vector<Eigen::Index> delta;
  };
  BasisParams params_;
  std::shared_ptr<const Data> data_;
};

namespace detail {

/// max |P - I| (or max |P| when identity is false) over a sparse product.
inline double max_abs_deviation(const BandMatrix &p, bool identity) {
  const auto &m = p.storage();
  double worst = 0.0;
  for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
    bool diag_seen = false;
    for (BandMatrix::Storage::InnerIterator it(m, c); it; ++it) {
      const bool on_diag = identity && it.row() == c;
      diag_seen = diag_seen || on_diag;
      worst = std::max(worst, std::abs(it.value() - (on_diag ? 1.0 : 0.0)));
    }
    if (identity && !diag_seen && c < m.rows())
      worst = std::max(worst, 1.0);
  }
  return worst;
}

} // namespace detail

/// Largest deviation of the four block identities
/// M~0^T M0 = I, M~1^T M1 = I, M~0^T M1 = 0, M~1^T M0 = 0.
inline double mask_identity_defect(const MaskQuad &q) {
  const auto t0 = q.dual_scaling.transpose();
  const auto t1 = q.dual_wavelet.transpose();
  double worst = 0.0;
  worst = std::max(worst, detail::max_abs_deviation(t0 * q.primal_scaling, true));
  worst = std::max(worst, detail::max_abs_deviation(t1 * q.primal_wavelet, true));
  worst = std::max(worst, detail::max_abs_deviation(t0 * q.primal_wavelet, false));
  worst = std::max(worst, detail::max_abs_deviation(t1 * q.primal_scaling, false));
  return worst;
}

enum class MaskValidation { strict, dimensions_only };

/// Validates level-indexed masks (for levels j0+1, j0+2, ...) and wraps them
/// into a BasisSpec.
inline BasisSpec make_mask_basis(std::vector<MaskQuad> masks, BasisParams params,
                                 MaskValidation validation = MaskValidation::strict,
                                 double tolerance = kMaskTolerance,
                                 Eigen::Index max_bandwidth = kMaxBandwidth) {
  require(!masks.empty(), ErrorCode::DimensionMismatch, "no mask levels supplied");
  require(params.alpha > 1.0, ErrorCode::MaskInconsistent, "decay exponent alpha must exceed 1");
  require(params.gamma > 0.0 && params.gamma_tilde > 0.0, ErrorCode::MaskInconsistent,
          "regularities must be positive");
  const Eigen::Index coarse = masks.front().primal_scaling.cols();
  Eigen::Index prev = coarse;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const int j = params.j0 + 1 + static_cast<int>(i);
    const auto &q = masks[i];
    const std::string where = " at level " + std::to_string(j);
    const Eigen::Index rows = q.primal_scaling.rows();
    require(q.primal_scaling.cols() == prev, ErrorCode::DimensionMismatch,
            "M_{j,0} columns must equal |Delta_{j-1}|" + where);
    require(q.primal_wavelet.rows() == rows && q.dual_scaling.rows() == rows &&
                q.dual_wavelet.rows() == rows,
            ErrorCode::DimensionMismatch, "mask row counts differ" + where);
    require(q.dual_scaling.cols() == prev, ErrorCode::DimensionMismatch,
            "M~_{j,0} columns must equal |Delta_{j-1}|" + where);
    require(q.dual_wavelet.cols() == q.primal_wavelet.cols(), ErrorCode::DimensionMismatch,
            "wavelet mask column counts differ" + where);
    require(prev + q.primal_wavelet.cols() == rows, ErrorCode::DimensionMismatch,
            "|Delta_j| != |Delta_{j-1}| + |Nabla_j|" + where);
    if (validation == MaskValidation::strict) {
      const double defect = mask_identity_defect(q);
      require(defect <= tolerance, ErrorCode::MaskInconsistent,
              "block identity defect " + std::to_string(defect) + where);
      for (const BandMatrix *m :
           {&q.primal_scaling, &q.primal_wavelet, &q.dual_scaling, &q.dual_wavelet})
        require(m->bandwidth() <= max_bandwidth, ErrorCode::MaskInconsistent,
                "mask bandwidth " + std::to_string(m->bandwidth()) + " exceeds bound" + where);
    }
    prev = rows;
  }
  return BasisSpec(std::move(params), coarse, std::move(masks));
}

/// Haar masks of level j (|Delta_j| = 2^j).
inline MaskQuad haar_masks(int j) {
  const Eigen::Index fine = Eigen::Index{1} << j;
  const Eigen::Index half = fine / 2;
  const double h = 1.0 / std::numbers::sqrt2;
  std::vector<Triplet> s, w;
  s.reserve(static_cast<std::size_t>(fine));
  w.reserve(static_cast<std::size_t>(fine));
  for (Eigen::Index k = 0; k < half; ++k) {
    s.push_back({2 * k, k, h});
    s.push_back({2 * k + 1, k, h});
    w.push_back({2 * k, k, h});
    w.push_back({2 * k + 1, k, -h});
  }
  auto m0 = BandMatrix::from_triplets(fine, half, s);
  auto m1 = BandMatrix::from_triplets(fine, half, w);
  return MaskQuad{m0, m1, m0, m1};
}

/// Finest level for which the built-in Haar basis carries masks.
inline constexpr int kHaarMaxLevel = 16;

/// Orthonormal Haar basis on [0,1] with coarsest level j0.
inline BasisSpec make_haar_basis(int j0, int max_level = kHaarMaxLevel) {
  require(j0 >= 0, ErrorCode::LevelBelowCoarsest, "Haar basis needs j0 >= 0");
  require(max_level > j0, ErrorCode::DimensionMismatch, "Haar basis needs max_level > j0");
  std::vector<MaskQuad> masks;
  for (int j = j0 + 1; j <= max_level; ++j)
    masks.push_back(haar_masks(j));
  BasisParams params{"haar", 1, 1, 0.5, 0.5, kCompactSupportAlpha, j0};
  return make_mask_basis(std::move(masks), params, MaskValidation::strict, kHaarTolerance);
}

/// Expands a single basis function into level-m scaling coefficients by
/// repeated application of M_{l,0}.
inline std::vector<double> refine_to_level(const BasisSpec &spec, const LevelIndex &idx, int m) {
  spec.check_level(idx.j);
  spec.check_level(m);
  std::vector<double> c;
  const bool coarse_alias = idx.j == spec.j0();
  if (idx.kind == IndexKind::scaling || coarse_alias) {
    require(idx.k >= 0 && idx.k < spec.delta_size(idx.j), ErrorCode::DimensionMismatch,
            "scaling position out of range");
    c.assign(static_cast<std::size_t>(spec.delta_size(idx.j)), 0.0);
    c[static_cast<std::size_t>(idx.k)] = 1.0;
  } else {
    require(idx.k >= 0 && idx.k < spec.nabla_size(idx.j), ErrorCode::DimensionMismatch,
            "wavelet position out of range");
    std::vector<double> e(static_cast<std::size_t>(spec.nabla_size(idx.j)), 0.0);
    e[static_cast<std::size_t>(idx.k)] = 1.0;
    c = spec.masks(idx.j).primal_wavelet.apply(e);
  }
  for (int l = idx.j + 1; l <= m; ++l)
    c = spec.masks(l).primal_scaling.apply(c);
  return c;
}

/// Values of phi_idx / psi_idx at the midpoints 2^{-m}(k + 1/2). Level-m
/// scaling functions are represented by their cell values 2^{m/2}; this is
/// exact for piecewise-constant primal bases and the cascade approximation
/// otherwise.
inline std::vector<double> evaluate_on_dyadic_grid(const BasisSpec &spec, const LevelIndex &idx,
                                                   int m) {
  require(m > idx.j, ErrorCode::LevelTooCoarse,
          "grid level " + std::to_string(m) + " must exceed index level " + std::to_string(idx.j));
  auto c = refine_to_level(spec, idx, m);
  const double scale = std::exp2(0.5 * m);
  for (auto &v : c)
    v *= scale;
  return c;
}

// ---------------------------------------------------------------------------
// Mask file format
//
//   % name=dku13 d=1 d_tilde=3 gamma=0.5 gamma_tilde=0.5 alpha=64   (optional)
//   level rows cols
//   row col value
//   ...
//   #
//
// Four blocks per level in the order M_{j,0}, M_{j,1}, M~_{j,0}, M~_{j,1};
// levels ascending and contiguous. The coarsest level is one below the
// first block's level.
// ---------------------------------------------------------------------------

inline void write_masks(std::ostream &os, const BasisSpec &spec) {
  const auto &p = spec.params();
  os << "% name=" << p.name << " d=" << p.d << " d_tilde=" << p.d_tilde
     << " gamma=" << detail::format17(p.gamma) << " gamma_tilde=" << detail::format17(p.gamma_tilde)
     << " alpha=" << detail::format17(p.alpha) << '\n';
  for (int j = spec.j0() + 1; j <= spec.max_level(); ++j) {
    const auto &q = spec.masks(j);
    for (const BandMatrix *m :
         {&q.primal_scaling, &q.primal_wavelet, &q.dual_scaling, &q.dual_wavelet}) {
      write_block(os, j, *m);
      os << "#\n";
    }
  }
}

namespace detail {

inline void apply_metadata(BasisParams &params, const std::string &line) {
  std::istringstream is(line.substr(1));
  std::string kv;
  while (is >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      continue;
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    try {
      if (key == "name") params.name = value;
      else if (key == "d") params.d = std::stoi(value);
      else if (key == "d_tilde") params.d_tilde = std::stoi(value);
      else if (key == "gamma") params.gamma = std::stod(value);
      else if (key == "gamma_tilde") params.gamma_tilde = std::stod(value);
      else if (key == "alpha") params.alpha = std::stod(value);
    } catch (const std::exception &) {
      throw Error(ErrorCode::ParseError, "bad metadata value for " + key);
    }
  }
}

} // namespace detail

/// Parses the mask format. Validation follows make_mask_basis.
inline BasisSpec read_masks(std::istream &is, const std::string &default_name = "custom",
                            MaskValidation validation = MaskValidation::strict) {
  BasisParams params;
  params.name = default_name;
  struct Block {
    int level;
    Eigen::Index rows, cols;
    std::vector<Triplet> entries;
  };
  std::vector<Block> blocks;
  bool in_block = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos)
      continue;
    line = line.substr(first);
    if (line[0] == '%') {
      detail::apply_metadata(params, line);
      continue;
    }
    if (line[0] == '#') {
      in_block = false;
      continue;
    }
    std::istringstream ls(line);
    if (!in_block) {
      Block b{};
      if (!(ls >> b.level >> b.rows >> b.cols) || b.rows <= 0 || b.cols <= 0)
        throw Error(ErrorCode::ParseError, "bad block header on line " + std::to_string(lineno));
      blocks.push_back(std::move(b));
      in_block = true;
    } else {
      Triplet t{};
      if (!(ls >> t.row >> t.col >> t.value))
        throw Error(ErrorCode::ParseError, "bad entry on line " + std::to_string(lineno));
      blocks.back().entries.push_back(t);
    }
  }
  require(!blocks.empty() && blocks.size() % 4 == 0, ErrorCode::DimensionMismatch,
          "mask file must contain four blocks per level");
  std::vector<MaskQuad> masks;
  const int first_level = blocks.front().level;
  for (std::size_t i = 0; i < blocks.size(); i += 4) {
    const int level = first_level + static_cast<int>(i / 4);
    BandMatrix mats[4];
    for (std::size_t b = 0; b < 4; ++b) {
      const auto &blk = blocks[i + b];
      require(blk.level == level, ErrorCode::DimensionMismatch,
              "mask levels must be contiguous and grouped by four");
      mats[b] = BandMatrix::from_triplets(blk.rows, blk.cols, blk.entries);
    }
    masks.push_back(MaskQuad{mats[0], mats[1], mats[2], mats[3]});
  }
  params.j0 = first_level - 1;
  return make_mask_basis(std::move(masks), params, validation);
}

inline BasisSpec read_mask_file(const std::string &path,
                                MaskValidation validation = MaskValidation::strict) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open mask file " + path);
  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos)
    stem = stem.substr(slash + 1);
  if (const auto dot = stem.find('.'); dot != std::string::npos)
    stem = stem.substr(0, dot);
  return read_masks(in, stem, validation);
}

} // namespace hyperwave
