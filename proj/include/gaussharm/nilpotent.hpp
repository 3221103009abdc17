#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "gaussharm/metric.hpp"

namespace gaussharm {

/// A 2-step nilpotent metric Lie algebra split as V + Z, Z the centre and V its
/// orthogonal complement, with the operators J(Z) on V cached per centre basis vector.
class NilpotentStructure {
 public:
  const MetricLieAlgebra& algebra() const { return m_; }
  const Subspace& center() const { return z_; }
  const Subspace& complement() const { return v_; }
  /// Metric-orthonormal bases (columns).
  const Matrix& center_onb() const { return z_onb_; }
  const Matrix& complement_onb() const { return v_onb_; }
  /// J of the k-th centre basis vector, in complement_onb coordinates.
  const Matrix& j_basis(Index k) const { return j_cache_[k]; }

  /// Metric-orthogonal parts of x in V and Z.
  Vector v_part(const Vector& x) const { return v_onb_ * (v_onb_.transpose() * (g() * x)); }
  Vector z_part(const Vector& x) const { return z_onb_ * (z_onb_.transpose() * (g() * x)); }

  friend NilpotentStructure build_nilpotent(const MetricLieAlgebra& m, double tol);

 private:
  const Matrix& g() const { return m_.metric().matrix(); }

  MetricLieAlgebra m_;
  Subspace z_;
  Subspace v_;
  Matrix z_onb_;
  Matrix v_onb_;
  std::vector<Matrix> j_cache_;
};

inline NilpotentStructure build_nilpotent(const MetricLieAlgebra& m, double tol = kDefaultTol) {
  const auto& alg = m.algebra();
  const Subspace derived = derived_subalgebra(alg);
  if (derived.is_zero()) throw Error(Errc::NotTwoStep, "[N,N] = 0 (abelian)");
  for (Index i = 0; i < derived.dim(); ++i) {
    for (Index k = 0; k < alg.dim(); ++k) {
      if (bracket(alg, derived.basis().col(i), Vector::Unit(alg.dim(), k)).norm() > tol) {
        throw Error(Errc::NotTwoStep, "[[N,N],N] != 0");
      }
    }
  }
  NilpotentStructure ns;
  ns.m_ = m;
  ns.z_ = center(alg);
  ns.z_onb_ = metric_basis(m.metric(), ns.z_);
  ns.v_onb_ = complete_frame(m.metric(), ns.z_onb_);
  ns.v_ = Subspace::span(ns.v_onb_);

  const Matrix& g = m.metric().matrix();
  const Index dv = ns.v_onb_.cols();
  for (Index k = 0; k < ns.z_onb_.cols(); ++k) {
    const Vector gz = g * ns.z_onb_.col(k);
    // <J u_a, u_b> = <[u_a, u_b], z>
    Matrix j(dv, dv);
    for (Index a = 0; a < dv; ++a)
      for (Index b = 0; b < dv; ++b)
        j(b, a) = bracket(alg, ns.v_onb_.col(a), ns.v_onb_.col(b)).dot(gz);
    ns.j_cache_.push_back(std::move(j));
  }
  return ns;
}

/// J(z) in complement_onb coordinates; z must be central.
inline Matrix j_operator(const NilpotentStructure& ns, const Vector& z, double tol = kDefaultTol) {
  detail::require_dim(z.size(), ns.algebra().dim(), "j_operator");
  if (ns.center().residual(z) > tol) throw Error(Errc::NotCentral, "vector is not in the centre");
  const Vector coords = ns.center_onb().transpose() * (ns.algebra().metric().matrix() * z);
  const Index dv = ns.complement_onb().cols();
  Matrix j = Matrix::Zero(dv, dv);
  for (Index k = 0; k < coords.size(); ++k) j += coords(k) * ns.j_basis(k);
  return j;
}

/// J(z) x as an algebra vector, for z central and x in V.
inline Vector apply_j(const NilpotentStructure& ns, const Vector& z, const Vector& x) {
  const Matrix& u = ns.complement_onb();
  const Vector xc = u.transpose() * (ns.algebra().metric().matrix() * x);
  return u * (j_operator(ns, z) * xc);
}

struct NonsingularProbe {
  bool nonsingular_witnessed = false;
  bool probabilistic = false;
  std::optional<Vector> singular_z;
  Index samples_used = 0;
  double min_abs_det = 0.0;
};

/// Looks for a nonzero central z with det J(z) = 0. Exact when the centre is a line.
inline NonsingularProbe nonsingular_probe(const NilpotentStructure& ns, Index samples,
                                          std::uint64_t seed, double tol = kDefaultTol) {
  NonsingularProbe out;
  const Matrix& zb = ns.center_onb();
  const Index dz = zb.cols();
  if (dz == 0) throw Error(Errc::InvalidArgument, "centre is zero");
  if (dz == 1) {
    const double det = ns.j_basis(0).determinant();
    out.samples_used = 1;
    out.min_abs_det = std::abs(det);
    out.nonsingular_witnessed = std::abs(det) > tol;
    if (!out.nonsingular_witnessed) out.singular_z = Vector(zb.col(0));
    return out;
  }
  out.probabilistic = true;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  out.min_abs_det = std::numeric_limits<double>::infinity();
  for (Index s = 0; s < samples; ++s) {
    Vector c(dz);
    for (Index k = 0; k < dz; ++k) c(k) = normal(rng);
    c.normalize();
    const Vector z = zb * c;
    const double det = std::abs(j_operator(ns, z).determinant());
    out.samples_used = s + 1;
    out.min_abs_det = std::min(out.min_abs_det, det);
    if (det <= tol) {
      out.singular_z = z;
      return out;
    }
  }
  out.nonsingular_witnessed = true;
  return out;
}

/// nabla_x y from the V/Z split: 1/2 [X,Y] on V x V, -1/2 J(Z)X on mixed pairs, 0 on Z x Z.
inline Vector nilpotent_connection(const NilpotentStructure& ns, const Vector& x, const Vector& y) {
  const auto& alg = ns.algebra().algebra();
  detail::require_dim(x.size(), alg.dim(), "nilpotent_connection");
  detail::require_dim(y.size(), alg.dim(), "nilpotent_connection");
  const Vector xv = ns.v_part(x), xz = ns.z_part(x);
  const Vector yv = ns.v_part(y), yz = ns.z_part(y);
  return 0.5 * bracket(alg, xv, yv) - 0.5 * apply_j(ns, yz, xv) - 0.5 * apply_j(ns, xz, yv);
}

struct GeodesicVerdict {
  Vector x_part;  ///< V-component of the unit tangent
  Vector z_part;  ///< Z-component of the unit tangent
  double jzx_norm = 0.0;
  double residual_norm = 0.0;
  bool harmonic = false;
  bool one_parameter = false;
};

/// Gauss map test for the geodesic through e with initial direction v.
inline GeodesicVerdict geodesic_gauss_verdict(const NilpotentStructure& ns, const Vector& v,
                                              double tol = kDefaultTol) {
  const auto& ip = ns.algebra().metric();
  detail::require_dim(v.size(), ip.dim(), "geodesic_gauss_verdict");
  const double len = ip.norm(v);
  if (!(len > 0.0)) throw Error(Errc::ZeroVector, "geodesic direction is zero");
  const Vector y1 = v / len;
  GeodesicVerdict out;
  out.x_part = ns.v_part(y1);
  out.z_part = ns.z_part(y1);
  const Vector jx = apply_j(ns, out.z_part, out.x_part);
  const Vector jjx = apply_j(ns, out.z_part, jx);
  out.jzx_norm = ip.norm(jx);
  out.residual_norm = ip.norm(jjx - ip(jjx, y1) * y1);
  out.harmonic = out.one_parameter = out.jzx_norm <= tol;
  return out;
}

}  // namespace gaussharm
