#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "gaussharm/error.hpp"

namespace gaussharm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Absolute tolerance for verdicts and containment checks.
inline constexpr double kDefaultTol = 1e-9;
/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kRankTol = 1e-9;

namespace detail {

inline double rank_threshold(const Eigen::VectorXd& singular_values, double rel_tol) {
  const double smax = singular_values.size() ? singular_values.maxCoeff() : 0.0;
  // Floor at 1: inputs are O(1), so roundoff-sized generators must not count as rank.
  return rel_tol * std::max(smax, 1.0);
}

inline void require_dim(Index got, Index want, const char* what) {
  if (got != want) {
    throw Error(Errc::DimensionMismatch, std::string(what) + ": expected length " +
                                             std::to_string(want) + ", got " + std::to_string(got));
  }
}

}  // namespace detail

/// Orthonormal (Euclidean) basis of the column space of `m`, rank-revealed by SVD.
namespace detail {

/// Flips each column so its largest-magnitude entry is positive, and clears negative zeros.
inline Matrix canonical_signs(Matrix b) {
  for (Index c = 0; c < b.cols(); ++c) {
    Index at = 0;
    b.col(c).cwiseAbs().maxCoeff(&at);
    if (b(at, c) < 0) b.col(c) = -b.col(c);
    b.col(c).array() += 0.0;
  }
  return b;
}

}  // namespace detail

inline Matrix range_basis(const Matrix& m, double rel_tol = kRankTol) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  const double thr = detail::rank_threshold(svd.singularValues(), rel_tol);
  Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > thr) ++r;
  return detail::canonical_signs(svd.matrixU().leftCols(r));
}

/// Orthonormal basis of the null space of `m` (columns).
inline Matrix null_space(const Matrix& m, double rel_tol = kRankTol) {
  const Index n = m.cols();
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const double thr = detail::rank_threshold(svd.singularValues(), rel_tol);
  Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > thr) ++r;
  return detail::canonical_signs(svd.matrixV().rightCols(n - r));
}

/// A linear subspace of R^n kept as its generators plus a Euclidean orthonormal basis.
class Subspace {
 public:
  Subspace() = default;

  /// The zero subspace of R^n.
  explicit Subspace(Index ambient_dim)
      : generators_(ambient_dim, 0), basis_(ambient_dim, 0) {}

  /// Span of the columns of `generators`.
  static Subspace span(Matrix generators, double rel_tol = kRankTol) {
    Subspace s;
    s.basis_ = range_basis(generators, rel_tol);
    s.generators_ = std::move(generators);
    return s;
  }

  static Subspace whole(Index n) { return span(Matrix::Identity(n, n)); }

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  bool is_zero() const { return dim() == 0; }

  const Matrix& generators() const { return generators_; }
  /// Columns are Euclidean-orthonormal and span the subspace.
  const Matrix& basis() const { return basis_; }

  /// Euclidean orthogonal projector onto the subspace.
  Matrix projector() const { return basis_ * basis_.transpose(); }

  /// Euclidean norm of the component of `v` outside the subspace.
  double residual(const Vector& v) const {
    detail::require_dim(v.size(), ambient_dim(), "Subspace::residual");
    return (v - basis_ * (basis_.transpose() * v)).norm();
  }

  bool contains(const Vector& v, double tol = kDefaultTol) const { return residual(v) <= tol; }

  bool contains(const Subspace& other, double tol = kDefaultTol) const {
    for (Index c = 0; c < other.dim(); ++c) {
      if (!contains(Vector(other.basis().col(c)), tol)) return false;
    }
    return true;
  }

 private:
  Matrix generators_;
  Matrix basis_;
};

/// Spectral-norm distance between the orthogonal projectors of two subspaces.
inline double subspace_distance(const Subspace& a, const Subspace& b) {
  detail::require_dim(b.ambient_dim(), a.ambient_dim(), "subspace_distance");
  const Matrix d = a.projector() - b.projector();
  if (d.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(d).singularValues()(0);
}

/// Sum a + b.
inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  detail::require_dim(b.ambient_dim(), a.ambient_dim(), "subspace_sum");
  Matrix g(a.ambient_dim(), a.dim() + b.dim());
  g << a.basis(), b.basis();
  return Subspace::span(std::move(g));
}

/// Intersection: null space of the stacked complement projectors.
inline Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  detail::require_dim(b.ambient_dim(), a.ambient_dim(), "subspace_intersect");
  const Index n = a.ambient_dim();
  if (a.is_zero() || b.is_zero()) return Subspace(n);
  Matrix stacked(2 * n, n);
  stacked << Matrix::Identity(n, n) - a.projector(), Matrix::Identity(n, n) - b.projector();
  return Subspace::span(null_space(stacked));
}

}  // namespace gaussharm
