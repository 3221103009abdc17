#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "gaussharm/metric.hpp"

namespace gaussharm {

/// Span of all [a_i, b_j] for basis vectors of `a` and `b`.
inline Subspace bracket_span(const LieAlgebra& alg, const Subspace& a, const Subspace& b) {
  Matrix gens(alg.dim(), a.dim() * b.dim());
  Index c = 0;
  for (Index i = 0; i < a.dim(); ++i)
    for (Index j = 0; j < b.dim(); ++j)
      gens.col(c++) = bracket(alg, a.basis().col(i), b.basis().col(j));
  return Subspace::span(std::move(gens));
}

/// Largest Euclidean norm of the part of [[u,v],s] outside w, over basis triples of w.
/// Zero exactly when w is a Lie triple system.
inline double lie_triple_residual(const LieAlgebra& alg, const Subspace& w) {
  detail::require_dim(w.ambient_dim(), alg.dim(), "lie_triple_residual");
  const Matrix& u = w.basis();
  double worst = 0.0;
  for (Index i = 0; i < w.dim(); ++i) {
    for (Index j = i + 1; j < w.dim(); ++j) {
      const Vector uv = bracket(alg, u.col(i), u.col(j));
      for (Index k = 0; k < w.dim(); ++k) {
        worst = std::max(worst, w.residual(bracket(alg, uv, u.col(k))));
      }
    }
  }
  return worst;
}

/// Largest residual of [x, y] outside `s` for basis vectors x of `s`, y of `ambient`.
inline double closure_residual(const LieAlgebra& alg, const Subspace& ambient, const Subspace& s) {
  double worst = 0.0;
  for (Index i = 0; i < ambient.dim(); ++i)
    for (Index j = 0; j < s.dim(); ++j)
      worst = std::max(worst, s.residual(bracket(alg, ambient.basis().col(i), s.basis().col(j))));
  return worst;
}

inline bool is_subalgebra(const LieAlgebra& alg, const Subspace& s, double tol = kDefaultTol) {
  return closure_residual(alg, s, s) <= tol;
}

/// w + [w, w]; must be closed under the bracket (true whenever w is a Lie triple system).
inline Subspace generated_subalgebra(const LieAlgebra& alg, const Subspace& w,
                                     double tol = kDefaultTol) {
  detail::require_dim(w.ambient_dim(), alg.dim(), "generated_subalgebra");
  const Subspace result = subspace_sum(w, bracket_span(alg, w, w));
  if (!is_subalgebra(alg, result, tol)) {
    throw Error(Errc::NotClosed, "w + [w,w] is not closed under the bracket");
  }
  return result;
}

/// [ambient, s] inside s?
inline bool is_ideal(const LieAlgebra& alg, const Subspace& ambient, const Subspace& s,
                     double tol = kDefaultTol) {
  if (!ambient.contains(s, tol)) throw Error(Errc::NotContained, "s is not inside the ambient subalgebra");
  return closure_residual(alg, ambient, s) <= tol;
}

/// Orthogonal splitting of a compact subalgebra into centre and semisimple part.
struct CompactSplit {
  Subspace abelian_part;
  Subspace semisimple_part;
};

inline CompactSplit compact_split(const MetricLieAlgebra& m, const Subspace& sub,
                                  double tol = kDefaultTol) {
  const auto& alg = m.algebra();
  require_biinvariant(m, tol);
  if (!is_subalgebra(alg, sub, tol)) throw Error(Errc::NotSubalgebra, "input is not closed under the bracket");
  CompactSplit out;
  out.semisimple_part = bracket_span(alg, sub, sub);
  out.abelian_part = orthogonal_complement(m.metric(), out.semisimple_part, sub, tol);
  for (Index i = 0; i < out.abelian_part.dim(); ++i) {
    for (Index j = 0; j < sub.dim(); ++j) {
      if (bracket(alg, out.abelian_part.basis().col(i), sub.basis().col(j)).norm() > tol) {
        throw Error(Errc::SplitFailed, "complement of the derived algebra is not central");
      }
    }
  }
  return out;
}

/// Orthogonal decomposition of a semisimple ideal into simple ideals, with the
/// factor lambda_l such that metric = lambda_l * Killing on S_l (when it exists).
struct SimpleIdealList {
  std::vector<Subspace> ideals;
  std::vector<std::optional<double>> killing_multipliers;
};

namespace detail {

/// Matrices of ad(u_a) restricted to span(U) in the coordinates of the metric-orthonormal
/// columns of U. Assumes span(U) is ad-invariant under its own elements.
inline std::vector<Matrix> restricted_ad(const MetricLieAlgebra& m, const Matrix& u) {
  const Matrix ut_g = u.transpose() * m.metric().matrix();
  std::vector<Matrix> out;
  out.reserve(u.cols());
  for (Index a = 0; a < u.cols(); ++a) out.push_back(ut_g * ad_matrix(m.algebra(), u.col(a)) * u);
  return out;
}

/// Basis of {T : T A = A T for all A in ops}, each element a d x d matrix.
inline std::vector<Matrix> commutant(const std::vector<Matrix>& ops, Index d) {
  // vec(T A - A T) = (A^T (x) I - I (x) A) vec(T); accumulate the normal matrix.
  const Index d2 = d * d;
  Matrix normal = Matrix::Zero(d2, d2);
  const Matrix id = Matrix::Identity(d, d);
  for (const auto& a : ops) {
    Matrix k(d2, d2);
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c)
        k.block(r * d, c * d, d, d) = a(c, r) * id - (r == c ? a : Matrix::Zero(d, d));
    normal.noalias() += k.transpose() * k;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(normal);
  const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
  std::vector<Matrix> out;
  for (Index i = 0; i < d2; ++i) {
    if (es.eigenvalues()(i) > 1e-9 * top) break;
    out.push_back(Eigen::Map<const Matrix>(es.eigenvectors().col(i).data(), d, d));
  }
  return out;
}

inline void split_ideals(const MetricLieAlgebra& m, const Matrix& u, std::mt19937_64& rng,
                         std::vector<Matrix>& out, int depth = 0) {
  const Index d = u.cols();
  const auto basis = commutant(restricted_ad(m, u), d);
  if (basis.size() <= 1) {
    out.push_back(u);
    return;
  }
  if (depth > 64) throw Error(Errc::NumericalFailure, "simple ideal recursion did not terminate");
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  constexpr int kDraws = 8;
  for (int attempt = 0; attempt < kDraws; ++attempt) {
    Matrix t = Matrix::Zero(d, d);
    for (const auto& b : basis) t += coef(rng) * b;
    const Matrix sym = (t + t.transpose()) / 2;
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    const Vector& ev = es.eigenvalues();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1.0);
    std::vector<Index> cuts{0};
    for (Index i = 1; i < d; ++i)
      if (ev(i) - ev(i - 1) > 1e-6 * scale) cuts.push_back(i);
    cuts.push_back(d);
    if (cuts.size() <= 2) continue;  // one cluster: unlucky draw
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const Matrix piece = u * es.eigenvectors().middleCols(cuts[c], cuts[c + 1] - cuts[c]);
      split_ideals(m, piece, rng, out, depth + 1);
    }
    return;
  }
  throw Error(Errc::NumericalFailure, "commutant draws never separated the ideals");
}

inline Index leading_coordinate(const Subspace& s, double tol) {
  const Matrix p = s.projector();
  for (Index k = 0; k < p.rows(); ++k)
    if (p(k, k) > tol) return k;
  return p.rows();
}

}  // namespace detail

/// Killing form of span(U) restricted to itself, in the metric-orthonormal coordinates of U.
inline Matrix restricted_killing(const MetricLieAlgebra& m, const Matrix& u) {
  const auto ads = detail::restricted_ad(m, u);
  Matrix k(u.cols(), u.cols());
  for (Index a = 0; a < u.cols(); ++a)
    for (Index b = a; b < u.cols(); ++b) k(a, b) = k(b, a) = (ads[a] * ads[b]).trace();
  return k;
}

inline SimpleIdealList simple_ideals(const MetricLieAlgebra& m, const Subspace& semisimple,
                                     std::mt19937_64& rng, double tol = kDefaultTol) {
  detail::require_dim(semisimple.ambient_dim(), m.dim(), "simple_ideals");
  SimpleIdealList out;
  if (semisimple.is_zero()) return out;
  if (!is_subalgebra(m.algebra(), semisimple, tol)) {
    throw Error(Errc::NotSemisimple, "input is not closed under the bracket");
  }
  const Matrix u = metric_basis(m.metric(), semisimple);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(restricted_killing(m, u), Eigen::EigenvaluesOnly);
    const double big = es.eigenvalues().cwiseAbs().maxCoeff();
    const double small = es.eigenvalues().cwiseAbs().minCoeff();
    if (big == 0.0 || small <= 1e-9 * big) {
      throw Error(Errc::NotSemisimple, "Killing form restriction is degenerate");
    }
  }
  std::vector<Matrix> pieces;
  detail::split_ideals(m, u, rng, pieces);

  std::vector<Subspace> ideals;
  for (auto& p : pieces) ideals.push_back(Subspace::span(std::move(p)));
  std::vector<std::size_t> order(ideals.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Index> lead;
  for (const auto& s : ideals) lead.push_back(detail::leading_coordinate(s, 1e-6));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lead[a] < lead[b]; });

  for (std::size_t idx : order) {
    const Subspace& s = ideals[idx];
    const Matrix us = metric_basis(m.metric(), s);
    const Matrix k = restricted_killing(m, us);
    // The metric is the identity in these coordinates: fit I = lambda K.
    const Matrix id = Matrix::Identity(us.cols(), us.cols());
    const double kk = k.squaredNorm();
    std::optional<double> lambda;
    if (kk > 0.0) {
      const double fit = (k.array() * id.array()).sum() / kk;
      if ((id - fit * k).norm() <= 1e-9 * id.norm()) lambda = fit;
    }
    out.ideals.push_back(s);
    out.killing_multipliers.push_back(lambda);
  }
  return out;
}

}  // namespace gaussharm
