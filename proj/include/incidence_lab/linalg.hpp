#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace incidence_lab {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Gauss-Jordan elimination for exact scalars: pivots are the first nonzero
// entry, so these are not suitable for floating point.

/// Reduces `a` to reduced row echelon form and returns the pivot columns.
template <class Scalar>
std::vector<Eigen::Index> rref_in_place(MatrixX<Scalar>& a) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index p = row;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    a.row(p).swap(a.row(row));
    const Scalar inv = Scalar(1) / a(row, col);
    a.row(row) *= inv;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      const Scalar f = a(r, col);
      a.row(r) -= f * a.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class Scalar>
Eigen::Index rank(MatrixX<Scalar> a) {
  return static_cast<Eigen::Index>(rref_in_place(a).size());
}

/// Basis of {x : a x = 0}, one vector per column; each basis vector has a 1
/// in its free coordinate.
template <class Scalar>
MatrixX<Scalar> nullspace(MatrixX<Scalar> a) {
  const auto pivots = rref_in_place(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  MatrixX<Scalar> basis = MatrixX<Scalar>::Zero(a.cols(), a.cols() - static_cast<Eigen::Index>(pivots.size()));
  Eigen::Index out = 0;
  for (Eigen::Index free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    basis(free, out) = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], out) = -a(static_cast<Eigen::Index>(r), free);
    ++out;
  }
  return basis;
}

/// Unique solution of a square or overdetermined consistent system, if any.
template <class Scalar>
std::optional<VectorX<Scalar>> solve_unique(const MatrixX<Scalar>& a, const VectorX<Scalar>& b) {
  MatrixX<Scalar> aug(a.rows(), a.cols() + 1);
  aug << a, b;
  const auto pivots = rref_in_place(aug);
  if (static_cast<Eigen::Index>(pivots.size()) != a.cols()) return std::nullopt;
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  return VectorX<Scalar>(aug.col(a.cols()).head(a.cols()));
}

/// Some solution of a consistent system (free variables set to zero), if any.
template <class Scalar>
std::optional<VectorX<Scalar>> solve_any(const MatrixX<Scalar>& a, const VectorX<Scalar>& b) {
  MatrixX<Scalar> aug(a.rows(), a.cols() + 1);
  aug << a, b;
  const auto pivots = rref_in_place(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  VectorX<Scalar> x = VectorX<Scalar>::Zero(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x(pivots[r]) = aug(static_cast<Eigen::Index>(r), a.cols());
  return x;
}

}  // namespace incidence_lab
