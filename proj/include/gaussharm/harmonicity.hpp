#pragma once

#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "gaussharm/structure.hpp"

namespace gaussharm {

/// Which residual a report holds.
enum class Criterion {
  Eq1,       ///< general left-invariant criterion with b and dH
  Eq1_2,     ///< totally geodesic form
  Eq2,       ///< biinvariant form with b and dH
  Pr2Eq1_1,  ///< biinvariant, totally geodesic, normal projections
  Pr2Eq1_2,  ///< biinvariant, totally geodesic, tangent projections
};

constexpr std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::Eq1: return "EQ1";
    case Criterion::Eq1_2: return "EQ1_2";
    case Criterion::Eq2: return "EQ2";
    case Criterion::Pr2Eq1_1: return "PR2EQ1_1";
    case Criterion::Pr2Eq1_2: return "PR2EQ1_2";
  }
  return "?";
}

/// Orthonormal tangent and normal frames at a point (columns), second fundamental form
/// and the normal derivative of nH.
struct ImmersionPointData {
  Matrix tangent_frame;  ///< N x n
  Matrix normal_frame;   ///< N x q
  /// second_fundamental[alpha](i, k) = b_ik^alpha
  std::vector<Matrix> second_fundamental;
  /// dH(j, alpha) = <nabla_{Y_j}(nH), Y_alpha>
  Matrix dH;
  bool dH_defaulted = false;

  Index n() const { return tangent_frame.cols(); }
  Index q() const { return normal_frame.cols(); }

  /// Totally geodesic data on the given frames: b = 0, dH = 0.
  static ImmersionPointData totally_geodesic(Matrix tangent, Matrix normal) {
    ImmersionPointData d;
    const Index n = tangent.cols();
    const Index q = normal.cols();
    d.tangent_frame = std::move(tangent);
    d.normal_frame = std::move(normal);
    d.second_fundamental.assign(q, Matrix::Zero(n, n));
    d.dH = Matrix::Zero(n, q);
    d.dH_defaulted = true;
    return d;
  }

  /// nH = sum_gamma (trace b^gamma) Y_gamma.
  Vector mean_curvature_vector() const {
    Vector h = Vector::Zero(normal_frame.rows());
    for (Index g = 0; g < q(); ++g) h += second_fundamental[g].trace() * normal_frame.col(g);
    return h;
  }
};

struct HarmonicityReport {
  Criterion criterion = Criterion::Eq1;
  Matrix residual;  ///< n x q; entry (j, a) is the equation for Y_{j+1}, Y_{n+a+1}
  double max_abs = 0.0;
  bool harmonic = true;
  double tol = kDefaultTol;
  bool dH_defaulted = false;
};

/// Tangent frame by Gram-Schmidt on the generators, normal frame by completion.
struct PointFrames {
  Matrix tangent;
  Matrix normal;
};

inline PointFrames frames_for(const InnerProduct& ip, const Subspace& tangent) {
  detail::require_dim(tangent.ambient_dim(), ip.dim(), "frames_for");
  PointFrames f;
  f.tangent = orthonormalize(ip, tangent.generators());
  f.normal = complete_frame(ip, f.tangent);
  return f;
}

namespace detail {

inline HarmonicityReport finish(Criterion c, Matrix residual, double tol, bool dh_default = false) {
  HarmonicityReport r;
  r.criterion = c;
  r.max_abs = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
  r.residual = std::move(residual);
  r.harmonic = r.max_abs <= tol;
  r.tol = tol;
  r.dH_defaulted = dh_default;
  return r;
}

inline void validate_point_data(const MetricLieAlgebra& m, const ImmersionPointData& d) {
  const Index dim = m.dim();
  const Index n = d.n(), q = d.q();
  if (d.tangent_frame.rows() != dim || d.normal_frame.rows() != dim) {
    throw Error(Errc::DimensionMismatch, "frame vectors must have the algebra dimension");
  }
  if (n + q != dim) {
    throw Error(Errc::DimensionMismatch, "tangent and normal frames must together span the algebra");
  }
  if (static_cast<Index>(d.second_fundamental.size()) != q) {
    throw Error(Errc::DimensionMismatch, "second fundamental form needs one n x n block per normal");
  }
  for (const auto& b : d.second_fundamental) {
    if (b.rows() != n || b.cols() != n) {
      throw Error(Errc::DimensionMismatch, "second fundamental form block has wrong shape");
    }
    if (n > 0 && (b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error(Errc::NotSymmetric, "second fundamental form is not symmetric in i, k");
    }
  }
  if (d.dH.rows() != n || d.dH.cols() != q) {
    throw Error(Errc::DimensionMismatch, "dH must be n x q");
  }
  Matrix y(dim, dim);
  y << d.tangent_frame, d.normal_frame;
  const Matrix gram = y.transpose() * m.metric().matrix() * y;
  if ((gram - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(Errc::FrameNotOrthonormal, "combined frame is not orthonormal in the metric");
  }
}

inline Matrix stack_frame(const Matrix& t, const Matrix& n) {
  Matrix y(t.rows(), t.cols() + n.cols());
  y << t, n;
  return y;
}

inline void require_lie_triple(const LieAlgebra& alg, const Subspace& w, double tol) {
  const double r = lie_triple_residual(alg, w);
  if (r > tol) throw Error(Errc::NotLieTriple, "Lie triple residual " + std::to_string(r));
}

}  // namespace detail

/// Pointwise harmonicity residual of the Gauss map for any left-invariant metric.
///
/// residual(j, a) is the sum of
///   sum_i <R(Y_j,Y_i)Y_i, Y_a>                 curvature
/// - sum_i <nabla_{nabla_{Y_i}Y_i} Y_j, Y_a>
/// + <nabla_{nH} Y_j, Y_a> - dH(j, a)            the field bracket [nH, Y_j] at the point
/// + 2 sum_{i,k} b^a_ik <nabla_{Y_i}Y_k, Y_j>
/// + 2 sum_{i,g} b^g_ij <nabla_{Y_i}Y_g, Y_a>
/// - sum_i <(nabla_{Y_i}Y_j)^T, (nabla_{Y_i}Y_a)^T>
/// + sum_i <(nabla_{Y_i}Y_j)^perp, (nabla_{Y_i}Y_a)^perp>
inline HarmonicityReport residual_eq1(const MetricLieAlgebra& m, const ImmersionPointData& d,
                                      double tol = kDefaultTol) {
  detail::validate_point_data(m, d);
  const Index n = d.n(), q = d.q(), dim = m.dim();
  const Matrix& g = m.metric().matrix();
  const Matrix y = detail::stack_frame(d.tangent_frame, d.normal_frame);
  const Matrix yt_g = y.transpose() * g;

  // cov[i](:, b) = frame coordinates of nabla_{Y_i} Y_b
  std::vector<Matrix> cov(n, Matrix(dim, dim));
  std::vector<Matrix> cov_vec(n, Matrix(dim, dim));
  for (Index i = 0; i < n; ++i) {
    for (Index b = 0; b < dim; ++b) cov_vec[i].col(b) = connection(m, y.col(i), y.col(b));
    cov[i] = yt_g * cov_vec[i];
  }
  const Vector nh = d.mean_curvature_vector();

  Matrix res = Matrix::Zero(n, q);
  for (Index j = 0; j < n; ++j) {
    const Vector yj = y.col(j);
    Vector field = Vector::Zero(dim);  // terms that are <v, Y_a> for a vector v
    for (Index i = 0; i < n; ++i) {
      field += curvature(m, yj, y.col(i), y.col(i));
      field -= connection(m, cov_vec[i].col(i), yj);
    }
    field += connection(m, nh, yj);
    const Vector field_coords = yt_g * field;

    for (Index a = 0; a < q; ++a) {
      const Index alpha = n + a;
      double r = field_coords(alpha) - d.dH(j, a);
      double t4 = 0.0, t5 = 0.0, t67 = 0.0;
      for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < n; ++k) t4 += d.second_fundamental[a](i, k) * cov[i](j, k);
        for (Index c = 0; c < q; ++c) t5 += d.second_fundamental[c](i, j) * cov[i](alpha, n + c);
        for (Index k = 0; k < n; ++k) t67 -= cov[i](k, j) * cov[i](k, alpha);
        for (Index c = n; c < dim; ++c) t67 += cov[i](c, j) * cov[i](c, alpha);
      }
      r += 2 * t4 + 2 * t5 + t67;
      res(j, a) = r;
    }
  }
  return detail::finish(Criterion::Eq1, std::move(res), tol, d.dH_defaulted);
}

/// Totally geodesic form, frames built from the generators of `tangent`:
/// residual(j, a) = < sum_i [Y_j, nabla_{Y_i}Y_i] + [Y_i,[Y_j,Y_i]]
///                        + 2 nabla_{Y_i}( [Y_i,Y_j]^T - (nabla_{Y_j}Y_i)^perp ), Y_a >.
inline HarmonicityReport residual_eq1_2(const MetricLieAlgebra& m, const Subspace& tangent,
                                        double tol = kDefaultTol) {
  const auto& alg = m.algebra();
  const auto& ip = m.metric();
  const PointFrames f = frames_for(ip, tangent);
  const Index n = f.tangent.cols(), q = f.normal.cols(), dim = m.dim();
  const Matrix pt = f.tangent * f.tangent.transpose() * ip.matrix();
  const Matrix pn = Matrix::Identity(dim, dim) - pt;

  Matrix res(n, q);
  for (Index j = 0; j < n; ++j) {
    const Vector yj = f.tangent.col(j);
    Vector sum = Vector::Zero(dim);
    for (Index i = 0; i < n; ++i) {
      const Vector yi = f.tangent.col(i);
      sum += bracket(alg, yj, connection(m, yi, yi));
      sum += bracket(alg, yi, bracket(alg, yj, yi));
      const Vector inner = pt * bracket(alg, yi, yj) - pn * connection(m, yj, yi);
      sum += 2 * connection(m, yi, inner);
    }
    for (Index a = 0; a < q; ++a) res(j, a) = ip(sum, f.normal.col(a));
  }
  return detail::finish(Criterion::Eq1_2, std::move(res), tol, true);
}

/// Biinvariant form:
/// residual(j, a) = <1/2 [nH, Y_j], Y_a> - dH(j, a) + sum_{i,g} b^g_ij <[Y_i,Y_g], Y_a>
///                  + 1/2 sum_i <[Y_i,Y_j]^perp, [Y_i,Y_a]^perp>.
inline HarmonicityReport residual_eq2(const MetricLieAlgebra& m, const ImmersionPointData& d,
                                      double tol = kDefaultTol) {
  require_biinvariant(m, tol);
  detail::validate_point_data(m, d);
  const auto& alg = m.algebra();
  const auto& ip = m.metric();
  const Index n = d.n(), q = d.q();
  const Matrix& t = d.tangent_frame;
  const Matrix& nf = d.normal_frame;
  const Matrix pn = nf * nf.transpose() * ip.matrix();
  const Vector nh = d.mean_curvature_vector();

  Matrix res(n, q);
  for (Index j = 0; j < n; ++j) {
    const Vector nh_yj = 0.5 * bracket(alg, nh, t.col(j));
    for (Index a = 0; a < q; ++a) {
      const Vector ya = nf.col(a);
      double r = ip(nh_yj, ya) - d.dH(j, a);
      for (Index i = 0; i < n; ++i) {
        for (Index c = 0; c < q; ++c) {
          const double b = d.second_fundamental[c](i, j);
          if (b != 0.0) r += b * ip(bracket(alg, t.col(i), nf.col(c)), ya);
        }
        r += 0.5 * ip(pn * bracket(alg, t.col(i), t.col(j)), pn * bracket(alg, t.col(i), ya));
      }
      res(j, a) = r;
    }
  }
  return detail::finish(Criterion::Eq2, std::move(res), tol, d.dH_defaulted);
}

/// Normal- and tangent-projection sums sum_i <[Y_i,Y_j]^P, [Y_i,Y_a]^P> for a Lie triple
/// system in a biinvariant metric.
struct Pr2Residuals {
  HarmonicityReport normal_form;
  HarmonicityReport tangent_form;
};

inline Pr2Residuals residual_pr2(const MetricLieAlgebra& m, const Subspace& tangent,
                                 double tol = kDefaultTol) {
  require_biinvariant(m, tol);
  detail::require_lie_triple(m.algebra(), tangent, tol);
  const auto& alg = m.algebra();
  const auto& ip = m.metric();
  const PointFrames f = frames_for(ip, tangent);
  const Index n = f.tangent.cols(), q = f.normal.cols(), dim = m.dim();
  const Matrix pt = f.tangent * f.tangent.transpose() * ip.matrix();
  const Matrix pn = Matrix::Identity(dim, dim) - pt;

  Matrix nres = Matrix::Zero(n, q), tres = Matrix::Zero(n, q);
  for (Index i = 0; i < n; ++i) {
    const Vector yi = f.tangent.col(i);
    for (Index j = 0; j < n; ++j) {
      const Vector bij = bracket(alg, yi, f.tangent.col(j));
      for (Index a = 0; a < q; ++a) {
        const Vector bia = bracket(alg, yi, f.normal.col(a));
        nres(j, a) += ip(pn * bij, pn * bia);
        tres(j, a) += ip(pt * bij, pt * bia);
      }
    }
  }
  return {detail::finish(Criterion::Pr2Eq1_1, std::move(nres), tol, true),
          detail::finish(Criterion::Pr2Eq1_2, std::move(tres), tol, true)};
}

/// The subspaces and case flags of the totally geodesic classification in a
/// biinvariant metric.
struct Theorem2Classification {
  Subspace tangent;
  Subspace n_bar;       ///< tangent + [tangent, tangent]
  CompactSplit split;   ///< centre and derived part of n_bar
  Subspace w_script;    ///< projection of the tangent space onto the derived part
  Subspace w_bar;       ///< w_script intersected with [w_script, w_script]
  Subspace v;           ///< complement of w_bar in the derived part
  SimpleIdealList ideals;
  Subspace w_tilde;     ///< w_script intersected with v
  std::vector<Subspace> projections;  ///< P_l(w_tilde) per ideal
  std::vector<Index> overlap_dims;    ///< dim of P_l(w_tilde) cap [P_l(w_tilde), P_l(w_tilde)]
  bool case1_applies = false;
  bool case2_applies = false;
  bool case3_applies = false;
  std::optional<Index> witness_index;  ///< zero-based ideal index l0
};

inline Theorem2Classification classify_theorem2(const MetricLieAlgebra& m, const Subspace& tangent,
                                                std::mt19937_64& rng, double tol = kDefaultTol) {
  const auto& alg = m.algebra();
  const auto& ip = m.metric();
  require_biinvariant(m, tol);
  detail::require_lie_triple(alg, tangent, tol);

  Theorem2Classification c;
  c.tangent = tangent;
  c.n_bar = generated_subalgebra(alg, tangent, tol);
  c.split = compact_split(m, c.n_bar, tol);
  const Subspace& derived = c.split.semisimple_part;

  const Matrix p_derived = metric_projector(ip, derived);
  c.w_script = Subspace::span(p_derived * tangent.basis());
  c.w_bar = subspace_intersect(c.w_script, bracket_span(alg, c.w_script, c.w_script));
  c.v = orthogonal_complement(ip, c.w_bar, derived, tol);
  c.ideals = simple_ideals(m, c.v, rng, tol);
  c.w_tilde = subspace_intersect(c.w_script, c.v);

  if (c.v.is_zero()) {
    c.case1_applies = c.case2_applies = true;
    return c;
  }

  const auto& lambdas = c.ideals.killing_multipliers;
  c.case1_applies = !lambdas.empty() && lambdas.front().has_value();
  for (const auto& l : lambdas) {
    if (!l || !lambdas.front() ||
        std::abs(*l - *lambdas.front()) > 1e-9 * std::abs(*lambdas.front())) {
      c.case1_applies = false;
    }
  }

  c.case2_applies = true;
  for (std::size_t l = 0; l < c.ideals.ideals.size(); ++l) {
    const Matrix pl = metric_projector(ip, c.ideals.ideals[l]);
    Subspace proj = Subspace::span(pl * c.w_tilde.basis());
    const Subspace overlap = subspace_intersect(proj, bracket_span(alg, proj, proj));
    c.overlap_dims.push_back(overlap.dim());
    if (!overlap.is_zero() && c.case2_applies) {
      c.case2_applies = false;
      c.witness_index = static_cast<Index>(l);
    }
    c.projections.push_back(std::move(proj));
  }
  c.case3_applies = !c.case2_applies;
  return c;
}

/// The rescaled biinvariant metric exhibiting non-harmonicity, with the residual
/// that certifies it.
struct WitnessMetric {
  InnerProduct metric;
  double lambda = 1.0;
  int attempts = 1;
  Pr2Residuals residuals;
};

/// Killing-type forms sum_l coeff_l * tr(ad P_l(x) ad P_l(y)) as a matrix in the algebra basis.
inline Matrix projected_killing_form(const MetricLieAlgebra& m, const SimpleIdealList& ideals,
                                     const std::vector<double>& coeff) {
  const Index dim = m.dim();
  const Matrix& g = m.metric().matrix();
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t l = 0; l < ideals.ideals.size(); ++l) {
    if (coeff[l] == 0.0) continue;
    const Matrix u = metric_basis(m.metric(), ideals.ideals[l]);
    const Matrix ut_g = u.transpose() * g;
    const Matrix proj = u * ut_g;
    std::vector<Matrix> ads;
    for (Index a = 0; a < dim; ++a) ads.push_back(ut_g * ad_matrix(m.algebra(), proj.col(a)) * u);
    for (Index a = 0; a < dim; ++a)
      for (Index b = a; b < dim; ++b) {
        const double v = coeff[l] * (ads[a] * ads[b]).trace();
        out(a, b) += v;
        if (a != b) out(b, a) += v;
      }
  }
  return out;
}

inline WitnessMetric witness_metric(const MetricLieAlgebra& m, const Theorem2Classification& cls,
                                    double lambda, double tol = kDefaultTol) {
  if (!cls.case3_applies || !cls.witness_index) {
    throw Error(Errc::NoWitness, "the tangent space is harmonic in every biinvariant metric");
  }
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw Error(Errc::InvalidArgument, "witness scaling must be a nonzero finite number");
  }
  const Index dim = m.dim();
  const Matrix& g = m.metric().matrix();
  const Matrix p_v = metric_projector(m.metric(), cls.v);
  const Matrix p_perp = Matrix::Identity(dim, dim) - p_v;
  const Matrix outside = p_perp.transpose() * g * p_perp;
  const std::size_t l0 = static_cast<std::size_t>(*cls.witness_index);

  constexpr int kMaxRetries = 5;
  double lam = lambda;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt, lam *= 2) {
    std::vector<double> coeff(cls.ideals.ideals.size(), -1.0);
    coeff[l0] -= lam * lam;
    Matrix gw = projected_killing_form(m, cls.ideals, coeff) + outside;
    gw = (gw + gw.transpose()) / 2;
    MetricLieAlgebra witness(m.algebra(), InnerProduct(gw));
    const double bi = biinvariance_residual(witness);
    if (bi > tol) {
      throw Error(Errc::NotBiinvariant,
                  "rescaled metric is not biinvariant (residual " + std::to_string(bi) +
                      "); the complement ideal is not an ideal of the whole algebra");
    }
    Pr2Residuals r = residual_pr2(witness, cls.tangent, tol);
    if (!r.tangent_form.harmonic) {
      return {witness.metric(), lam, attempt + 1, std::move(r)};
    }
  }
  throw Error(Errc::DegenerateLambda, "residual vanished for every tried scaling");
}

}  // namespace gaussharm
