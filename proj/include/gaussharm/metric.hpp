#pragma once

#include <span>
#include <utility>

#include "gaussharm/lie_algebra.hpp"

namespace gaussharm {

/// Symmetric positive-definite bilinear form in the algebra basis.
class InnerProduct {
 public:
  InnerProduct() = default;

  explicit InnerProduct(Matrix g, double sym_tol = 1e-12) {
    if (g.rows() != g.cols()) throw Error(Errc::DimensionMismatch, "inner product matrix not square");
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > sym_tol) {
      throw Error(Errc::NotSymmetric, "inner product matrix is not symmetric");
    }
    g_ = (g + g.transpose()) / 2;
    if (g_.size() > 0) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(g_, Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) <= 0.0) {
        throw Error(Errc::NotPositiveDefinite, "smallest eigenvalue " +
                                                   std::to_string(es.eigenvalues()(0)) + " <= 0");
      }
    }
    llt_.compute(g_);
  }

  static InnerProduct identity(Index n) { return InnerProduct(Matrix::Identity(n, n)); }

  Index dim() const { return g_.rows(); }
  const Matrix& matrix() const { return g_; }

  double operator()(const Vector& x, const Vector& y) const { return x.dot(g_ * y); }
  double norm(const Vector& x) const { return std::sqrt((*this)(x, x)); }

  /// Solves g v = rhs, i.e. converts a covector to a vector.
  Vector raise(const Vector& rhs) const { return llt_.solve(rhs); }

 private:
  Matrix g_;
  Eigen::LLT<Matrix> llt_;
};

/// A Lie algebra together with a left-invariant metric.
class MetricLieAlgebra {
 public:
  MetricLieAlgebra() = default;
  MetricLieAlgebra(LieAlgebra alg, InnerProduct ip) : alg_(std::move(alg)), ip_(std::move(ip)) {
    if (alg_.dim() != ip_.dim()) {
      throw Error(Errc::DimensionMismatch, "metric and algebra dimensions differ");
    }
  }

  const LieAlgebra& algebra() const { return alg_; }
  const InnerProduct& metric() const { return ip_; }
  Index dim() const { return alg_.dim(); }

 private:
  LieAlgebra alg_;
  InnerProduct ip_;
};

/// Levi-Civita connection on left-invariant fields (Koszul formula):
/// <v, z> = 1/2 (<[x,y],z> - <[y,z],x> + <[z,x],y>).
inline Vector connection(const MetricLieAlgebra& m, const Vector& x, const Vector& y) {
  const auto& alg = m.algebra();
  const Matrix& g = m.metric().matrix();
  detail::require_dim(x.size(), alg.dim(), "connection");
  detail::require_dim(y.size(), alg.dim(), "connection");
  const Vector rhs = 0.5 * (g * bracket(alg, x, y) - ad_matrix(alg, y).transpose() * (g * x) -
                            ad_matrix(alg, x).transpose() * (g * y));
  return m.metric().raise(rhs);
}

/// R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z.
inline Vector curvature(const MetricLieAlgebra& m, const Vector& x, const Vector& y,
                        const Vector& z) {
  return connection(m, x, connection(m, y, z)) - connection(m, y, connection(m, x, z)) -
         connection(m, bracket(m.algebra(), x, y), z);
}

/// max |<[b_i,b_j],b_k> - <b_i,[b_j,b_k]>| over basis triples.
inline double biinvariance_residual(const MetricLieAlgebra& m) {
  const auto& alg = m.algebra();
  const Matrix& g = m.metric().matrix();
  const Index n = alg.dim();
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Vector gij = g * alg.ad_basis(i).col(j);
      for (Index k = 0; k < n; ++k) {
        const double lhs = gij(k);
        const double rhs = g.col(i).dot(alg.ad_basis(j).col(k));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

inline bool is_biinvariant(const MetricLieAlgebra& m, double tol = kDefaultTol) {
  return biinvariance_residual(m) <= tol;
}

inline void require_biinvariant(const MetricLieAlgebra& m, double tol) {
  const double r = biinvariance_residual(m);
  if (r > tol) {
    throw Error(Errc::NotBiinvariant, "biinvariance residual " + std::to_string(r));
  }
}

/// Modified Gram-Schmidt (two passes) on the columns of `vs`, in input order.
inline Matrix orthonormalize(const InnerProduct& ip, const Matrix& vs, double rel_tol = kRankTol) {
  detail::require_dim(vs.rows(), ip.dim(), "orthonormalize");
  Matrix out(vs.rows(), vs.cols());
  for (Index c = 0; c < vs.cols(); ++c) {
    Vector v = vs.col(c);
    const double scale = std::max(ip.norm(v), 1.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index p = 0; p < c; ++p) v -= ip(out.col(p), v) * out.col(p);
    }
    const double nv = ip.norm(v);
    if (nv <= rel_tol * scale) {
      throw Error(Errc::RankDeficient,
                  "vector " + std::to_string(c) + " is dependent on its predecessors");
    }
    out.col(c) = v / nv;
  }
  return out;
}

/// Extends metric-orthonormal columns `onb` to a full orthonormal frame by running
/// Gram-Schmidt over the standard basis vectors in order and keeping the independent ones.
/// Returns only the added columns.
inline Matrix complete_frame(const InnerProduct& ip, const Matrix& onb) {
  const Index n = ip.dim();
  detail::require_dim(onb.rows(), n, "complete_frame");
  Matrix frame(n, n);
  frame.leftCols(onb.cols()) = onb;
  Index filled = onb.cols();
  for (Index k = 0; k < n && filled < n; ++k) {
    Vector v = Vector::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index p = 0; p < filled; ++p) v -= ip(frame.col(p), v) * frame.col(p);
    }
    const double nv = ip.norm(v);
    // Unit input vector: anything this small lies in the span already.
    if (nv <= 1e-8) continue;
    frame.col(filled++) = v / nv;
  }
  if (filled != n) throw Error(Errc::NumericalFailure, "frame completion lost rank");
  return frame.rightCols(n - onb.cols());
}

/// Metric-orthonormal basis of `s` (columns).
inline Matrix metric_basis(const InnerProduct& ip, const Subspace& s) {
  detail::require_dim(s.ambient_dim(), ip.dim(), "metric_basis");
  if (s.is_zero()) return Matrix(ip.dim(), 0);
  return orthonormalize(ip, s.basis());
}

/// Metric-orthogonal projector U U^T g onto `s`.
inline Matrix metric_projector(const InnerProduct& ip, const Subspace& s) {
  const Matrix u = metric_basis(ip, s);
  return u * u.transpose() * ip.matrix();
}

/// Metric-orthogonal complement of `s` inside `within`.
inline Subspace orthogonal_complement(const InnerProduct& ip, const Subspace& s,
                                      const Subspace& within, double tol = kDefaultTol) {
  detail::require_dim(s.ambient_dim(), ip.dim(), "orthogonal_complement");
  detail::require_dim(within.ambient_dim(), ip.dim(), "orthogonal_complement");
  if (!within.contains(s, tol)) throw Error(Errc::NotContained, "subspace not inside the ambient one");
  if (s.is_zero()) return within;
  const Matrix& b = within.basis();
  const Matrix coeffs = null_space(s.basis().transpose() * ip.matrix() * b);
  return Subspace::span(b * coeffs);
}

inline Subspace orthogonal_complement(const InnerProduct& ip, const Subspace& s,
                                      double tol = kDefaultTol) {
  return orthogonal_complement(ip, s, Subspace::whole(ip.dim()), tol);
}

}  // namespace gaussharm
