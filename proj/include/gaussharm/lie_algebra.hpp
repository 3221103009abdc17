#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gaussharm/linalg.hpp"

namespace gaussharm {

/// One structure constant: [b_i, b_j] has coefficient `c` on b_k (i < j).
struct BracketEntry {
  Index i = 0;
  Index j = 0;
  Index k = 0;
  double c = 0.0;

  friend bool operator==(const BracketEntry&, const BracketEntry&) = default;
};

/// Finite-dimensional real Lie algebra given by dense structure constants.
///
/// Stored as the adjoint matrices of the basis vectors: column j of ad(b_i) holds
/// [b_i, b_j], so c[i][j][k] = ad(b_i)(k, j).
class LieAlgebra {
 public:
  LieAlgebra() = default;

  /// Build from sparse entries with i < j; the antisymmetric completion is implied.
  LieAlgebra(std::vector<std::string> labels, std::span<const BracketEntry> entries)
      : labels_(std::move(labels)) {
    const Index n = static_cast<Index>(labels_.size());
    ad_.assign(n, Matrix::Zero(n, n));
    for (const auto& e : entries) {
      if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= n || e.j >= n || e.k >= n) {
        throw Error(Errc::DimensionMismatch, "bracket entry index out of range");
      }
      if (e.i >= e.j) {
        throw Error(Errc::InvalidArgument, "bracket entries must have i < j");
      }
      ad_[e.i](e.k, e.j) += e.c;
      ad_[e.j](e.k, e.i) -= e.c;
    }
  }

  /// Build from a full tensor, tensor[i](j, k) = c[i][j][k]. Rejects non-antisymmetric input.
  static LieAlgebra from_tensor(std::vector<std::string> labels, const std::vector<Matrix>& tensor,
                                double antisym_tol = 1e-12) {
    const Index n = static_cast<Index>(labels.size());
    if (static_cast<Index>(tensor.size()) != n) {
      throw Error(Errc::DimensionMismatch, "structure tensor has wrong first dimension");
    }
    for (const auto& t : tensor) {
      if (t.rows() != n || t.cols() != n) {
        throw Error(Errc::DimensionMismatch, "structure tensor slice has wrong shape");
      }
    }
    LieAlgebra alg;
    alg.labels_ = std::move(labels);
    alg.ad_.assign(n, Matrix::Zero(n, n));
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
          const double a = tensor[i](j, k);
          const double b = tensor[j](i, k);
          if (std::abs(a + b) / 2 > antisym_tol) {
            throw Error(Errc::NotAntisymmetric, "c[i][j][k] != -c[j][i][k] at (" + std::to_string(i) +
                                                     "," + std::to_string(j) + "," +
                                                     std::to_string(k) + ")");
          }
          alg.ad_[i](k, j) = (a - b) / 2;
        }
      }
    }
    return alg;
  }

  static LieAlgebra abelian(Index n) {
    std::vector<std::string> labels;
    for (Index i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
    return LieAlgebra(std::move(labels), {});
  }

  Index dim() const { return static_cast<Index>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

  double structure_constant(Index i, Index j, Index k) const { return ad_[i](k, j); }

  /// ad(b_i) in the algebra basis.
  const Matrix& ad_basis(Index i) const { return ad_[i]; }

  /// Nonzero constants with i < j, in lexicographic (i, j, k) order.
  std::vector<BracketEntry> entries() const {
    std::vector<BracketEntry> out;
    for (Index i = 0; i < dim(); ++i)
      for (Index j = i + 1; j < dim(); ++j)
        for (Index k = 0; k < dim(); ++k)
          if (ad_[i](k, j) != 0.0) out.push_back({i, j, k, ad_[i](k, j)});
    return out;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Matrix> ad_;
};

/// Matrix of y -> [x, y].
inline Matrix ad_matrix(const LieAlgebra& alg, const Vector& x) {
  detail::require_dim(x.size(), alg.dim(), "ad_matrix");
  Matrix out = Matrix::Zero(alg.dim(), alg.dim());
  for (Index i = 0; i < alg.dim(); ++i) {
    if (x(i) != 0.0) out += x(i) * alg.ad_basis(i);
  }
  return out;
}

inline Vector bracket(const LieAlgebra& alg, const Vector& x, const Vector& y) {
  detail::require_dim(x.size(), alg.dim(), "bracket");
  detail::require_dim(y.size(), alg.dim(), "bracket");
  Vector out = Vector::Zero(alg.dim());
  for (Index i = 0; i < alg.dim(); ++i) {
    if (x(i) != 0.0) out += x(i) * (alg.ad_basis(i) * y);
  }
  return out;
}

/// Largest Euclidean norm of the Jacobiator over basis triples; 0 for a Lie algebra.
inline double jacobi_residual(const LieAlgebra& alg) {
  const Index n = alg.dim();
  const Matrix id = Matrix::Identity(n, n);
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Vector bij = alg.ad_basis(i).col(j);
      for (Index k = 0; k < n; ++k) {
        const Vector bjk = alg.ad_basis(j).col(k);
        const Vector bki = alg.ad_basis(k).col(i);
        const Vector jac = bracket(alg, bij, id.col(k)) + bracket(alg, bjk, id.col(i)) +
                           bracket(alg, bki, id.col(j));
        worst = std::max(worst, jac.norm());
      }
    }
  }
  return worst;
}

/// K[a][b] = tr(ad(b_a) ad(b_b)).
inline Matrix killing_form(const LieAlgebra& alg) {
  const Index n = alg.dim();
  Matrix k(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a; b < n; ++b) {
      k(a, b) = k(b, a) = (alg.ad_basis(a) * alg.ad_basis(b)).trace();
    }
  }
  return k;
}

/// Null space of x -> ad(x), viewed as a map R^n -> R^{n*n}.
inline Subspace center(const LieAlgebra& alg) {
  const Index n = alg.dim();
  // Row block a: x -> [x, b_a] = -ad(b_a) x.
  Matrix stacked(n * n, n);
  for (Index a = 0; a < n; ++a) stacked.middleRows(a * n, n) = alg.ad_basis(a);
  return Subspace::span(null_space(stacked));
}

/// Span of [b_i, b_j] over i < j.
inline Subspace derived_subalgebra(const LieAlgebra& alg) {
  const Index n = alg.dim();
  Matrix gens(n, n * (n > 0 ? n - 1 : 0) / 2);
  Index c = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) gens.col(c++) = alg.ad_basis(i).col(j);
  return Subspace::span(std::move(gens));
}

}  // namespace gaussharm
