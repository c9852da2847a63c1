#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperwave/detail/numeric.hpp"
#include "hyperwave/error.hpp"

namespace hyperwave {

struct Triplet {
  Eigen::Index row;
  Eigen::Index col;
  double value;
};

/// Sparse banded real matrix. Used for refinement masks, assembled
/// transforms and the generic operators of the norm checks.
class BandMatrix {
public:
  using Storage = Eigen::SparseMatrix<double, Eigen::ColMajor>;

  BandMatrix() = default;
  BandMatrix(Eigen::Index rows, Eigen::Index cols) : mat_(rows, cols) {}
  explicit BandMatrix(Storage mat) : mat_(std::move(mat)) { mat_.makeCompressed(); }

  /// Builds from (row, col, value) triplets. Positions must be inside the
  /// declared dimensions and appear at most once.
  static BandMatrix from_triplets(Eigen::Index rows, Eigen::Index cols,
                                  std::span<const Triplet> entries) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(entries.size());
    std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
    for (const auto &t : entries) {
      require(t.row >= 0 && t.row < rows && t.col >= 0 && t.col < cols,
              ErrorCode::DimensionMismatch,
              "entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                  ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
      require(seen.emplace(t.row, t.col).second, ErrorCode::DimensionMismatch,
              "duplicate entry at (" + std::to_string(t.row) + ", " +
                  std::to_string(t.col) + ")");
      trips.emplace_back(t.row, t.col, t.value);
    }
    Storage m(rows, cols);
    m.setFromTriplets(trips.begin(), trips.end());
    return BandMatrix(std::move(m));
  }

  static BandMatrix identity(Eigen::Index n) {
    Storage m(n, n);
    m.setIdentity();
    return BandMatrix(std::move(m));
  }

  static BandMatrix from_dense(const Eigen::MatrixXd &d) {
    return BandMatrix(Storage(d.sparseView()));
  }

  Eigen::Index rows() const { return mat_.rows(); }
  Eigen::Index cols() const { return mat_.cols(); }
  Eigen::Index nonzeros() const { return mat_.nonZeros(); }

  const Storage &storage() const { return mat_; }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(static_cast<std::size_t>(mat_.nonZeros()));
    for (Eigen::Index c = 0; c < mat_.outerSize(); ++c)
      for (Storage::InnerIterator it(mat_, c); it; ++it)
        out.push_back({it.row(), it.col(), it.value()});
    std::sort(out.begin(), out.end(), [](const Triplet &a, const Triplet &b) {
      return std::pair(a.row, a.col) < std::pair(b.row, b.col);
    });
    return out;
  }

  double coeff(Eigen::Index r, Eigen::Index c) const { return mat_.coeff(r, c); }

  BandMatrix transpose() const { return BandMatrix(Storage(mat_.transpose())); }

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(mat_); }

  /// y = A x
  std::vector<double> apply(std::span<const double> x) const {
    require(static_cast<Eigen::Index>(x.size()) == cols(), ErrorCode::DimensionMismatch,
            "vector length does not match matrix columns");
    std::vector<double> y(static_cast<std::size_t>(rows()), 0.0);
    apply_add(x, y);
    return y;
  }

  /// y += A x, unchecked sizes.
  void apply_add(std::span<const double> x, std::span<double> y) const {
    for (Eigen::Index c = 0; c < mat_.outerSize(); ++c) {
      const double xc = x[static_cast<std::size_t>(c)];
      if (xc == 0.0)
        continue;
      for (Storage::InnerIterator it(mat_, c); it; ++it)
        y[static_cast<std::size_t>(it.row())] += it.value() * xc;
    }
  }

  /// y = A^T x, unchecked sizes; each output is a column dot product.
  void apply_transpose(std::span<const double> x, std::span<double> y) const {
    for (Eigen::Index c = 0; c < mat_.outerSize(); ++c) {
      double s = 0.0;
      for (Storage::InnerIterator it(mat_, c); it; ++it)
        s += it.value() * x[static_cast<std::size_t>(it.row())];
      y[static_cast<std::size_t>(c)] = s;
    }
  }

  friend BandMatrix operator*(const BandMatrix &a, const BandMatrix &b) {
    require(a.cols() == b.rows(), ErrorCode::DimensionMismatch, "matrix product shape");
    Storage p = (a.mat_ * b.mat_).pruned();
    return BandMatrix(std::move(p));
  }

  /// Maximum over columns of the row span covered by nonzeros.
  Eigen::Index bandwidth() const {
    Eigen::Index w = 0;
    for (Eigen::Index c = 0; c < mat_.outerSize(); ++c) {
      Eigen::Index lo = -1, hi = -1;
      for (Storage::InnerIterator it(mat_, c); it; ++it) {
        if (it.value() == 0.0)
          continue;
        if (lo < 0)
          lo = it.row();
        hi = it.row();
      }
      if (lo >= 0)
        w = std::max(w, hi - lo + 1);
    }
    return w;
  }

  /// [first, last] nonzero rows of a column, or (-1, -1) for a zero column.
  std::pair<Eigen::Index, Eigen::Index> column_support(Eigen::Index c) const {
    Eigen::Index lo = -1, hi = -1;
    for (Storage::InnerIterator it(mat_, c); it; ++it) {
      if (it.value() == 0.0)
        continue;
      if (lo < 0)
        lo = it.row();
      hi = it.row();
    }
    return {lo, hi};
  }

  /// Block-diagonal composition diag(a, b).
  static BandMatrix block_diag(const BandMatrix &a, const BandMatrix &b) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(a.nonzeros() + b.nonzeros()));
    for (Eigen::Index c = 0; c < a.mat_.outerSize(); ++c)
      for (Storage::InnerIterator it(a.mat_, c); it; ++it)
        trips.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index c = 0; c < b.mat_.outerSize(); ++c)
      for (Storage::InnerIterator it(b.mat_, c); it; ++it)
        trips.emplace_back(a.rows() + it.row(), a.cols() + it.col(), it.value());
    Storage m(a.rows() + b.rows(), a.cols() + b.cols());
    m.setFromTriplets(trips.begin(), trips.end());
    return BandMatrix(std::move(m));
  }

  /// Horizontal concatenation [a, b].
  static BandMatrix hcat(const BandMatrix &a, const BandMatrix &b) {
    require(a.rows() == b.rows(), ErrorCode::DimensionMismatch, "hcat row mismatch");
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index c = 0; c < a.mat_.outerSize(); ++c)
      for (Storage::InnerIterator it(a.mat_, c); it; ++it)
        trips.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index c = 0; c < b.mat_.outerSize(); ++c)
      for (Storage::InnerIterator it(b.mat_, c); it; ++it)
        trips.emplace_back(it.row(), a.cols() + it.col(), it.value());
    Storage m(a.rows(), a.cols() + b.cols());
    m.setFromTriplets(trips.begin(), trips.end());
    return BandMatrix(std::move(m));
  }

private:
  Storage mat_;
};

/// Writes one block of the plain-text triple format:
/// `level rows cols`, then one `row col value` line per nonzero.
inline void write_block(std::ostream &os, int level, const BandMatrix &m) {
  os << level << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (const auto &t : m.triplets())
    os << t.row << ' ' << t.col << ' ' << detail::format17(t.value) << '\n';
}

} // namespace hyperwave
