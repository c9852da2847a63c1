#pragma once

// Multivariate coefficient systems on the unit cube.
//
// Hyperbolic: psi_lambda = psi_{lambda_1} x ... x psi_{lambda_n} with
// independent per-axis levels. Isotropic (n = 2): Theta_m^e with
// Theta_m^0 = Phi_{m-1}, Theta_m^1 = Psi_m, and Theta_{j0} = Phi_{j0} x Phi_{j0}.
//
// Both systems are stored densely in one layout: axis slot s of a level-M
// array carries the multiscale position given by MultiscaleLayout. The
// full tensor transform fills it with hyperbolic coefficients, the Mallat
// pyramid with isotropic ones; the isotropic block Theta_m^(0,1) then sits in
// rows [0, |Delta_{m-1}|) and columns Nabla_m, exactly where the hyperbolic
// blocks (j, m), j < m, live. This makes the change of basis an in-place
// block operation.

#include <algorithm>
#include <array>
#include <compare>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hyperwave/basis1d.hpp"
#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/transform1d.hpp"

namespace hyperwave {

inline constexpr int kMaxDim = 3;

enum class System { hyperbolic, isotropic };

inline std::string to_string(System s) { return s == System::hyperbolic ? "hyper" : "iso"; }

inline System parse_system(const std::string &s) {
  if (s == "hyper" || s == "hyperbolic")
    return System::hyperbolic;
  if (s == "iso" || s == "isotropic")
    return System::isotropic;
  throw Error(ErrorCode::ParseError, "unknown coefficient system '" + s + "'");
}

inline void check_dimension(int n) {
  require(n >= 1 && n <= kMaxDim, ErrorCode::UnsupportedDimension,
          "dimension n=" + std::to_string(n) + " outside 1..3");
}

/// Coefficient index. Hyperbolic: per-axis levels j and positions k
/// (e unused, zero). Isotropic: j holds the level m in every used slot, e the
/// type vector and k the position inside Theta_m^e. Unused trailing slots
/// are zero so that the defaulted ordering is lexicographic on the used part.
struct CoeffIndex {
  std::array<int, kMaxDim> j{};
  std::array<int, kMaxDim> e{};
  std::array<Eigen::Index, kMaxDim> k{};

  auto operator<=>(const CoeffIndex &) const = default;
  bool operator==(const CoeffIndex &) const = default;

  int l1(int n) const {
    int s = 0;
    for (int i = 0; i < n; ++i)
      s += j[static_cast<std::size_t>(i)];
    return s;
  }
  int linf(int n) const {
    int s = j[0];
    for (int i = 1; i < n; ++i)
      s = std::max(s, j[static_cast<std::size_t>(i)]);
    return s;
  }
  /// Isotropic level |mu|.
  int level() const { return j[0]; }
};

inline CoeffIndex hyper_index(std::initializer_list<int> levels,
                              std::initializer_list<Eigen::Index> positions) {
  CoeffIndex idx;
  std::copy(levels.begin(), levels.end(), idx.j.begin());
  std::copy(positions.begin(), positions.end(), idx.k.begin());
  return idx;
}

inline CoeffIndex iso_index(int n, int m, std::initializer_list<int> type,
                            std::initializer_list<Eigen::Index> positions) {
  CoeffIndex idx;
  for (int i = 0; i < n; ++i)
    idx.j[static_cast<std::size_t>(i)] = m;
  std::copy(type.begin(), type.end(), idx.e.begin());
  std::copy(positions.begin(), positions.end(), idx.k.begin());
  return idx;
}

/// Sparse coefficient vector: entries sorted by index, unique. Zeros may be
/// present; they are dropped when writing files.
struct CoeffVector {
  System system = System::hyperbolic;
  int n = 2;
  double p_norm = 2.0;
  std::string basis = "haar";
  int max_level = 0;
  std::vector<std::pair<CoeffIndex, double>> entries;

  std::size_t size() const { return entries.size(); }

  /// Value at idx, zero when absent.
  double at(const CoeffIndex &idx) const {
    const auto it = std::lower_bound(entries.begin(), entries.end(), idx,
                                     [](const auto &e, const CoeffIndex &i) { return e.first < i; });
    return (it != entries.end() && it->first == idx) ? it->second : 0.0;
  }

  /// Restores the sorted/unique invariant; duplicate indices are summed.
  void normalize() {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto &a, const auto &b) { return a.first < b.first; });
    std::vector<std::pair<CoeffIndex, double>> merged;
    merged.reserve(entries.size());
    for (const auto &e : entries) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(e);
    }
    entries = std::move(merged);
  }

  std::size_t nonzeros() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const auto &e) { return e.second != 0.0; }));
  }
};

inline void require_system(const CoeffVector &c, System s) {
  require(c.system == s, ErrorCode::WrongSystem,
          "expected " + to_string(s) + " coefficients, got " + to_string(c.system));
}

// --- dense n-dimensional arrays --------------------------------------------

/// Row-major cube array with equal extent on every axis; axis 0 is x_1.
struct NdArray {
  int n = 1;
  Eigen::Index extent = 0;
  std::vector<double> data;

  NdArray() = default;
  NdArray(int dim, Eigen::Index ext, double fill = 0.0) : n(dim), extent(ext) {
    check_dimension(dim);
    data.assign(static_cast<std::size_t>(total(dim, ext)), fill);
  }

  static Eigen::Index total(int dim, Eigen::Index ext) {
    Eigen::Index t = 1;
    for (int i = 0; i < dim; ++i)
      t *= ext;
    return t;
  }

  Eigen::Index stride(int axis) const { return total(n - 1 - axis, extent); }

  std::size_t offset(std::span<const Eigen::Index> slot) const {
    Eigen::Index o = 0;
    for (int i = 0; i < n; ++i)
      o = o * extent + slot[static_cast<std::size_t>(i)];
    return static_cast<std::size_t>(o);
  }

  double &operator()(Eigen::Index a) { return data[static_cast<std::size_t>(a)]; }
  double &operator()(Eigen::Index a, Eigen::Index b) {
    return data[static_cast<std::size_t>(a * extent + b)];
  }
  double operator()(Eigen::Index a, Eigen::Index b) const {
    return data[static_cast<std::size_t>(a * extent + b)];
  }
  double &operator()(Eigen::Index a, Eigen::Index b, Eigen::Index c) {
    return data[static_cast<std::size_t>((a * extent + b) * extent + c)];
  }
};

namespace detail {

/// Calls op(line) on every line of `arr` along `axis`, where only the
/// first `length` entries of each line are passed and the other coordinates
/// range over [0, cross) each.
template <class Op>
void for_each_line(NdArray &arr, int axis, Eigen::Index length, Eigen::Index cross, Op &&op) {
  const Eigen::Index stride = arr.stride(axis);
  std::vector<double> line(static_cast<std::size_t>(length));
  const int others = arr.n - 1;
  const Eigen::Index count = NdArray::total(others, cross);
  std::array<Eigen::Index, kMaxDim> slot{};
  for (Eigen::Index t = 0; t < count; ++t) {
    Eigen::Index rest = t;
    for (int i = arr.n - 1; i >= 0; --i) {
      if (i == axis) {
        slot[static_cast<std::size_t>(i)] = 0;
        continue;
      }
      slot[static_cast<std::size_t>(i)] = rest % cross;
      rest /= cross;
    }
    const std::size_t base = arr.offset(slot);
    for (Eigen::Index l = 0; l < length; ++l)
      line[static_cast<std::size_t>(l)] = arr.data[base + static_cast<std::size_t>(l * stride)];
    op(std::span<double>(line));
    for (Eigen::Index l = 0; l < length; ++l)
      arr.data[base + static_cast<std::size_t>(l * stride)] = line[static_cast<std::size_t>(l)];
  }
}

/// In 2D, applies op to the sub-lines of `axis` with length `length` at the
/// cross-axis slots [lo, hi).
template <class Op>
void for_each_line_2d(NdArray &arr, int axis, Eigen::Index length, Eigen::Index lo,
                      Eigen::Index hi, Op &&op) {
  std::vector<double> line(static_cast<std::size_t>(length));
  for (Eigen::Index c = lo; c < hi; ++c) {
    for (Eigen::Index l = 0; l < length; ++l)
      line[static_cast<std::size_t>(l)] = axis == 0 ? arr(l, c) : arr(c, l);
    op(std::span<double>(line));
    for (Eigen::Index l = 0; l < length; ++l)
      (axis == 0 ? arr(l, c) : arr(c, l)) = line[static_cast<std::size_t>(l)];
  }
}

/// |Nabla_j| and block offsets for levels j0..m, read without level checks.
struct LevelTables {
  LevelTables(const BasisSpec &spec, int m) : j0(spec.j0()) {
    for (int j = j0; j <= m; ++j) {
      nabla_.push_back(spec.nabla_size(j));
      offset_.push_back(spec.block_offset(j));
    }
  }
  Eigen::Index nabla(int j) const { return nabla_[static_cast<std::size_t>(j - j0)]; }
  Eigen::Index offset(int j) const { return offset_[static_cast<std::size_t>(j - j0)]; }

  int j0;

private:
  std::vector<Eigen::Index> nabla_, offset_;
};

inline int array_level(const BasisSpec &spec, const NdArray &arr) {
  const int m = spec.level_for_size(arr.extent);
  require(m >= 0, ErrorCode::DimensionMismatch,
          "array extent " + std::to_string(arr.extent) + " is not |Delta_m| for any level");
  return m;
}

} // namespace detail

/// Applies the 1D forward (or inverse) cascade along one axis of a level-m
/// array, in place.
inline void transform_axis(const BasisSpec &spec, NdArray &arr, int axis, bool forward_dir) {
  const int m = detail::array_level(spec, arr);
  std::vector<double> scratch(static_cast<std::size_t>(arr.extent));
  detail::for_each_line(arr, axis, arr.extent, arr.extent, [&](std::span<double> line) {
    if (forward_dir)
      forward_inplace(spec, m, line, scratch);
    else
      inverse_inplace(spec, m, line, scratch);
  });
}

// --- layout <-> coefficient vectors -----------------------------------------

/// Sorted hyperbolic coefficients read from a dense layout array.
inline CoeffVector hyper_from_layout(const BasisSpec &spec, const NdArray &arr) {
  const int m = detail::array_level(spec, arr);
  CoeffVector out{System::hyperbolic, arr.n, 2.0, spec.name(), m, {}};
  out.entries.reserve(arr.data.size());
  const int levels = m - spec.j0() + 1;
  const auto tables = detail::LevelTables(spec, m);
  std::array<int, kMaxDim> jv{};
  std::array<Eigen::Index, kMaxDim> kv{}, slot{};
  const auto nn = static_cast<std::size_t>(arr.n);
  const Eigen::Index level_count = NdArray::total(arr.n, levels);
  for (Eigen::Index t = 0; t < level_count; ++t) {
    Eigen::Index rest = t;
    for (int i = arr.n - 1; i >= 0; --i) {
      jv[static_cast<std::size_t>(i)] = spec.j0() + static_cast<int>(rest % levels);
      rest /= levels;
    }
    std::array<Eigen::Index, kMaxDim> len{1, 1, 1};
    Eigen::Index block = 1;
    for (std::size_t i = 0; i < nn; ++i) {
      len[i] = tables.nabla(jv[i]);
      block *= len[i];
    }
    for (Eigen::Index b = 0; b < block; ++b) {
      Eigen::Index r = b;
      for (int i = arr.n - 1; i >= 0; --i) {
        const auto ii = static_cast<std::size_t>(i);
        kv[ii] = r % len[ii];
        r /= len[ii];
        slot[ii] = tables.offset(jv[ii]) + kv[ii];
      }
      CoeffIndex idx;
      std::copy_n(jv.begin(), nn, idx.j.begin());
      std::copy_n(kv.begin(), nn, idx.k.begin());
      out.entries.emplace_back(idx, arr.data[arr.offset(slot)]);
    }
  }
  return out;
}

/// Scatters hyperbolic coefficients into a dense layout array at level
/// c.max_level.
inline NdArray hyper_to_layout(const BasisSpec &spec, const CoeffVector &c) {
  require_system(c, System::hyperbolic);
  check_dimension(c.n);
  spec.check_level(c.max_level);
  NdArray arr(c.n, spec.delta_size(c.max_level));
  const auto tables = detail::LevelTables(spec, c.max_level);
  std::array<Eigen::Index, kMaxDim> slot{};
  for (const auto &[idx, v] : c.entries) {
    for (int i = 0; i < c.n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const int j = idx.j[ii];
      if (j < spec.j0() || j > c.max_level || idx.k[ii] < 0 || idx.k[ii] >= tables.nabla(j))
        throw Error(ErrorCode::DimensionMismatch, "hyperbolic index outside truncation");
      slot[ii] = tables.offset(j) + idx.k[ii];
    }
    arr.data[arr.offset(slot)] = v;
  }
  return arr;
}

namespace detail {

inline void require_iso_dim(int n) {
  require(n == 2, ErrorCode::UnsupportedDimension,
          "isotropic system implemented for n = 2 only, got n=" + std::to_string(n));
}

} // namespace detail

/// Sorted isotropic coefficients from a dense layout array (n = 2).
inline CoeffVector iso_from_layout(const BasisSpec &spec, const NdArray &arr) {
  detail::require_iso_dim(arr.n);
  const int top = detail::array_level(spec, arr);
  CoeffVector out{System::isotropic, 2, 2.0, spec.name(), top, {}};
  out.entries.reserve(arr.data.size());
  const int j0 = spec.j0();
  const Eigen::Index c0 = spec.delta_size(j0);
  for (Eigen::Index a = 0; a < c0; ++a)
    for (Eigen::Index b = 0; b < c0; ++b)
      out.entries.emplace_back(iso_index(2, j0, {0, 0}, {a, b}), arr(a, b));
  for (int m = j0 + 1; m <= top; ++m) {
    const Eigen::Index coarse = spec.delta_size(m - 1), off = spec.block_offset(m),
                       wav = spec.nabla_size(m);
    for (Eigen::Index a = 0; a < coarse; ++a)
      for (Eigen::Index b = 0; b < wav; ++b)
        out.entries.emplace_back(iso_index(2, m, {0, 1}, {a, b}), arr(a, off + b));
    for (Eigen::Index a = 0; a < wav; ++a)
      for (Eigen::Index b = 0; b < coarse; ++b)
        out.entries.emplace_back(iso_index(2, m, {1, 0}, {a, b}), arr(off + a, b));
    for (Eigen::Index a = 0; a < wav; ++a)
      for (Eigen::Index b = 0; b < wav; ++b)
        out.entries.emplace_back(iso_index(2, m, {1, 1}, {a, b}), arr(off + a, off + b));
  }
  return out;
}

inline NdArray iso_to_layout(const BasisSpec &spec, const CoeffVector &c) {
  require_system(c, System::isotropic);
  detail::require_iso_dim(c.n);
  spec.check_level(c.max_level);
  NdArray arr(2, spec.delta_size(c.max_level));
  for (const auto &[idx, v] : c.entries) {
    const int m = idx.level();
    require(m >= spec.j0() && m <= c.max_level, ErrorCode::DimensionMismatch,
            "isotropic level outside truncation");
    const bool coarsest = m == spec.j0();
    require(coarsest == (idx.e[0] == 0 && idx.e[1] == 0), ErrorCode::DimensionMismatch,
            "type e = 0 is reserved for the coarsest level");
    std::array<Eigen::Index, 2> slot{};
    for (std::size_t i = 0; i < 2; ++i) {
      const Eigen::Index len =
          coarsest ? spec.delta_size(m) : (idx.e[i] ? spec.nabla_size(m) : spec.delta_size(m - 1));
      require(idx.k[i] >= 0 && idx.k[i] < len, ErrorCode::DimensionMismatch,
              "isotropic position out of range");
      slot[i] = (idx.e[i] && !coarsest) ? spec.block_offset(m) + idx.k[i] : idx.k[i];
    }
    arr(slot[0], slot[1]) = v;
  }
  return arr;
}

inline CoeffVector rescale(CoeffVector c, double new_p);

// --- hyperbolic transforms --------------------------------------------------

/// Full tensor transform of level-m single-scale data: the 1D forward
/// cascade along every axis. Result is L2-normalized (p = 2).
inline CoeffVector hyper_forward(const BasisSpec &spec, NdArray data) {
  check_dimension(data.n);
  for (int axis = 0; axis < data.n; ++axis)
    transform_axis(spec, data, axis, true);
  return hyper_from_layout(spec, data);
}

/// Inverse of hyper_forward on the truncated index set.
inline NdArray hyper_inverse(const BasisSpec &spec, const CoeffVector &coeffs) {
  require_system(coeffs, System::hyperbolic);
  auto arr = hyper_to_layout(spec, coeffs.p_norm == 2.0 ? coeffs : rescale(coeffs, 2.0));
  for (int axis = 0; axis < arr.n; ++axis)
    transform_axis(spec, arr, axis, false);
  return arr;
}

// --- isotropic (Mallat) transforms, n = 2 -----------------------------------

/// Isotropic analysis by the level-by-level pyramid: at every level both
/// axes of the coarse corner are split once.
inline NdArray iso_analysis_layout(const BasisSpec &spec, NdArray data) {
  detail::require_iso_dim(data.n);
  const int top = detail::array_level(spec, data);
  std::vector<double> scratch(static_cast<std::size_t>(data.extent));
  for (int l = top; l > spec.j0(); --l) {
    const Eigen::Index len = spec.delta_size(l);
    for (int axis = 0; axis < 2; ++axis)
      detail::for_each_line_2d(data, axis, len, 0, len, [&](std::span<double> line) {
        analysis_step(spec, l, line, std::span<double>(scratch).first(line.size()));
        std::copy_n(scratch.begin(), line.size(), line.begin());
      });
  }
  return data;
}

inline NdArray iso_synthesis_layout(const BasisSpec &spec, NdArray data) {
  detail::require_iso_dim(data.n);
  const int top = detail::array_level(spec, data);
  std::vector<double> scratch(static_cast<std::size_t>(data.extent));
  for (int l = spec.j0() + 1; l <= top; ++l) {
    const Eigen::Index len = spec.delta_size(l);
    for (int axis = 0; axis < 2; ++axis)
      detail::for_each_line_2d(data, axis, len, 0, len, [&](std::span<double> line) {
        synthesis_step(spec, l, line, std::span<double>(scratch).first(line.size()));
        std::copy_n(scratch.begin(), line.size(), line.begin());
      });
  }
  return data;
}

inline CoeffVector iso_forward(const BasisSpec &spec, NdArray data) {
  return iso_from_layout(spec, iso_analysis_layout(spec, std::move(data)));
}

inline NdArray iso_inverse(const BasisSpec &spec, const CoeffVector &v) {
  return iso_synthesis_layout(spec, iso_to_layout(spec, v.p_norm == 2.0 ? v : rescale(v, 2.0)));
}

// --- change of basis, n = 2 -------------------------------------------------

namespace detail {

/// For every m: on the (0,1) block apply op(m-1) along axis 0, on the
/// (1,0) block along axis 1. The (1,1) blocks are left alone.
template <class Op>
void change_of_basis(const BasisSpec &spec, NdArray &arr, Op &&op) {
  const int top = array_level(spec, arr);
  for (int m = spec.j0() + 1; m <= top; ++m) {
    const Eigen::Index coarse = spec.delta_size(m - 1), off = spec.block_offset(m),
                       wav = spec.nabla_size(m);
    for_each_line_2d(arr, 0, coarse, off, off + wav,
                     [&](std::span<double> line) { op(m - 1, line); });
    for_each_line_2d(arr, 1, coarse, off, off + wav,
                     [&](std::span<double> line) { op(m - 1, line); });
  }
}

} // namespace detail

/// Isotropic coefficients of the function with hyperbolic coefficients u:
/// v|_(0,1),m = (T_{m-1} x I) u|_{U_{j<m} Nabla_j x Nabla_m}, symmetric for
/// (1,0), identity for (1,1).
inline CoeffVector iso_from_hyper(const BasisSpec &spec, const CoeffVector &u) {
  require_system(u, System::hyperbolic);
  detail::require_iso_dim(u.n);
  auto arr = hyper_to_layout(spec, u.p_norm == 2.0 ? u : rescale(u, 2.0));
  std::vector<double> scratch(static_cast<std::size_t>(arr.extent));
  detail::change_of_basis(spec, arr, [&](int level, std::span<double> line) {
    inverse_inplace(spec, level, line, std::span<double>(scratch).first(line.size()));
  });
  return iso_from_layout(spec, arr);
}

/// Inverse change of basis: (T~_{m-1}^T x I) on the (0,1) blocks.
inline CoeffVector hyper_from_iso(const BasisSpec &spec, const CoeffVector &v) {
  require_system(v, System::isotropic);
  detail::require_iso_dim(v.n);
  auto arr = iso_to_layout(spec, v.p_norm == 2.0 ? v : rescale(v, 2.0));
  std::vector<double> scratch(static_cast<std::size_t>(arr.extent));
  detail::change_of_basis(spec, arr, [&](int level, std::span<double> line) {
    forward_inplace(spec, level, line, std::span<double>(scratch).first(line.size()));
  });
  return hyper_from_layout(spec, arr);
}

// --- renormalization --------------------------------------------------------

/// Rescales coefficients from L^{old_p}- to L^{new_p}-normalized basis
/// functions: u^(new) = 2^{|lambda|_1 (1/old - 1/new)} u^(old), or with
/// n|mu| in place of |lambda|_1 for the isotropic system.
inline CoeffVector rescale(CoeffVector c, double new_p) {
  require(c.p_norm > 0.0 && new_p > 0.0 && !std::isnan(new_p) && !std::isnan(c.p_norm),
          ErrorCode::InvalidExponent, "normalization exponents must lie in (0, inf]");
  const double shift = detail::inv(c.p_norm) - detail::inv(new_p);
  if (shift != 0.0)
    for (auto &[idx, v] : c.entries) {
      const int weight = c.system == System::hyperbolic ? idx.l1(c.n) : c.n * idx.level();
      v *= std::exp2(weight * shift);
    }
  c.p_norm = new_p;
  return c;
}

// --- index bookkeeping ------------------------------------------------------

/// Number of hyperbolic indices with |lambda|_inf = l, for l = j0..m.
inline std::vector<Eigen::Index> hyper_shell_sizes(const BasisSpec &spec, int n, int m) {
  check_dimension(n);
  std::vector<Eigen::Index> out;
  for (int l = spec.j0(); l <= m; ++l) {
    // |{lambda : |lambda|_inf <= l}| = |Delta_l|^n
    const Eigen::Index upto = NdArray::total(n, spec.delta_size(l));
    const Eigen::Index below = l == spec.j0() ? 0 : NdArray::total(n, spec.delta_size(l - 1));
    Eigen::Index direct = 0;
    // direct count over level vectors with max exactly l
    const int levels = l - spec.j0() + 1;
    for (Eigen::Index t = 0; t < NdArray::total(n, levels); ++t) {
      Eigen::Index rest = t, block = 1;
      int mx = spec.j0();
      for (int i = 0; i < n; ++i) {
        const int j = spec.j0() + static_cast<int>(rest % levels);
        rest /= levels;
        mx = std::max(mx, j);
        block *= spec.nabla_size(j);
      }
      if (mx == l)
        direct += block;
    }
    require(direct == upto - below, ErrorCode::DimensionMismatch,
            "index-set cardinality audit failed at level " + std::to_string(l));
    out.push_back(direct);
  }
  return out;
}

// --- files --------------------------------------------------------------------

inline void write_coeffs(std::ostream &os, const CoeffVector &c) {
  os << "hyperwave-coeffs v1 " << to_string(c.system) << " n=" << c.n
     << " p=" << detail::format17(c.p_norm) << " basis=" << c.basis << " jmax=" << c.max_level
     << '\n';
  for (const auto &[idx, v] : c.entries) {
    if (v == 0.0)
      continue;
    if (c.system == System::hyperbolic) {
      for (int i = 0; i < c.n; ++i)
        os << idx.j[static_cast<std::size_t>(i)] << ' ';
    } else {
      os << idx.level() << ' ';
      for (int i = 0; i < c.n; ++i)
        os << idx.e[static_cast<std::size_t>(i)] << ' ';
    }
    for (int i = 0; i < c.n; ++i)
      os << idx.k[static_cast<std::size_t>(i)] << ' ';
    os << detail::format17(v) << '\n';
  }
}

namespace detail {

inline std::map<std::string, std::string> header_fields(std::istringstream &hs) {
  std::map<std::string, std::string> kv;
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos)
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

inline const std::string &field(const std::map<std::string, std::string> &kv,
                                const std::string &key) {
  const auto it = kv.find(key);
  require(it != kv.end(), ErrorCode::ParseError, "header lacks " + key + "=");
  return it->second;
}

} // namespace detail

inline CoeffVector read_coeffs(std::istream &is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::IoError, "empty coefficient file");
  std::istringstream hs(line);
  std::string magic, version, system;
  hs >> magic >> version >> system;
  require(magic == "hyperwave-coeffs" && version == "v1", ErrorCode::ParseError,
          "not a hyperwave-coeffs v1 file");
  CoeffVector c;
  c.system = parse_system(system);
  const auto kv = detail::header_fields(hs);
  try {
    c.n = std::stoi(detail::field(kv, "n"));
    c.p_norm = detail::parse_exponent(detail::field(kv, "p"));
    c.max_level = std::stoi(detail::field(kv, "jmax"));
  } catch (const Error &) {
    throw;
  } catch (const std::exception &) {
    throw Error(ErrorCode::ParseError, "malformed coefficient header");
  }
  c.basis = detail::field(kv, "basis");
  check_dimension(c.n);
  if (c.system == System::isotropic)
    detail::require_iso_dim(c.n);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::istringstream ls(line);
    CoeffIndex idx;
    bool ok = true;
    if (c.system == System::hyperbolic) {
      for (int i = 0; i < c.n; ++i)
        ok = ok && static_cast<bool>(ls >> idx.j[static_cast<std::size_t>(i)]);
    } else {
      int m = 0;
      ok = static_cast<bool>(ls >> m);
      for (int i = 0; i < c.n; ++i) {
        idx.j[static_cast<std::size_t>(i)] = m;
        ok = ok && static_cast<bool>(ls >> idx.e[static_cast<std::size_t>(i)]);
      }
    }
    for (int i = 0; i < c.n; ++i)
      ok = ok && static_cast<bool>(ls >> idx.k[static_cast<std::size_t>(i)]);
    std::string value;
    ok = ok && static_cast<bool>(ls >> value);
    require(ok, ErrorCode::ParseError, "bad coefficient on line " + std::to_string(lineno));
    double v = 0.0;
    try {
      v = std::stod(value);
    } catch (const std::exception &) {
      throw Error(ErrorCode::ParseError, "bad value on line " + std::to_string(lineno));
    }
    c.entries.emplace_back(idx, v);
  }
  c.normalize();
  return c;
}

inline void write_array(std::ostream &os, const BasisSpec &spec, const NdArray &a) {
  os << "hyperwave-array v1 n=" << a.n << " m=" << detail::array_level(spec, a) << '\n';
  for (double v : a.data)
    os << detail::format17(v) << '\n';
}

/// Reads an array file; the extent is |Delta_m| of the given basis.
inline NdArray read_array(std::istream &is, const BasisSpec &spec) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::IoError, "empty array file");
  std::istringstream hs(line);
  std::string magic, version;
  hs >> magic >> version;
  require(magic == "hyperwave-array" && version == "v1", ErrorCode::ParseError,
          "not a hyperwave-array v1 file");
  const auto kv = detail::header_fields(hs);
  int n = 0, m = 0;
  try {
    n = std::stoi(detail::field(kv, "n"));
    m = std::stoi(detail::field(kv, "m"));
  } catch (const Error &) {
    throw;
  } catch (const std::exception &) {
    throw Error(ErrorCode::ParseError, "malformed array header");
  }
  check_dimension(n);
  spec.check_level(m);
  NdArray a(n, spec.delta_size(m));
  for (auto &v : a.data) {
    std::string tok;
    require(static_cast<bool>(is >> tok), ErrorCode::ParseError, "array file truncated");
    try {
      v = std::stod(tok);
    } catch (const std::exception &) {
      throw Error(ErrorCode::ParseError, "bad array value '" + tok + "'");
    }
  }
  std::string extra;
  require(!(is >> extra), ErrorCode::ParseError, "trailing data in array file");
  return a;
}

} // namespace hyperwave
