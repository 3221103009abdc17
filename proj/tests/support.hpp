#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gaussharm/gaussharm.hpp"

namespace testing_support {

using gaussharm::Index;
using gaussharm::Matrix;
using gaussharm::Vector;

/// Structure tensor c[i][j][k] written out by hand, independent of the library constructors.
struct Tensor {
  Index n;
  std::vector<double> c;
  explicit Tensor(Index n_) : n(n_), c(n_ * n_ * n_, 0.0) {}
  double& at(Index i, Index j, Index k) { return c[(i * n + j) * n + k]; }
  double at(Index i, Index j, Index k) const { return c[(i * n + j) * n + k]; }
  void set(Index i, Index j, Index k, double v) {
    at(i, j, k) = v;
    at(j, i, k) = -v;
  }
};

inline Tensor so3_tensor(Index blocks = 1) {
  Tensor t(3 * blocks);
  for (Index b = 0; b < blocks; ++b) {
    const Index o = 3 * b;
    t.set(o + 0, o + 1, o + 2, 1.0);
    t.set(o + 1, o + 2, o + 0, 1.0);
    t.set(o + 2, o + 0, o + 1, 1.0);
  }
  return t;
}

inline Tensor heisenberg3_tensor() {
  Tensor t(3);
  t.set(0, 1, 2, 1.0);
  return t;
}

inline Vector tensor_bracket(const Tensor& t, const Vector& x, const Vector& y) {
  Vector out = Vector::Zero(t.n);
  for (Index i = 0; i < t.n; ++i)
    for (Index j = 0; j < t.n; ++j)
      for (Index k = 0; k < t.n; ++k) out(k) += x(i) * y(j) * t.at(i, j, k);
  return out;
}

inline gaussharm::LieAlgebra to_algebra(const Tensor& t) {
  std::vector<gaussharm::BracketEntry> e;
  for (Index i = 0; i < t.n; ++i)
    for (Index j = i + 1; j < t.n; ++j)
      for (Index k = 0; k < t.n; ++k)
        if (t.at(i, j, k) != 0.0) e.push_back({i, j, k, t.at(i, j, k)});
  std::vector<std::string> labels;
  for (Index i = 0; i < t.n; ++i) labels.push_back("b" + std::to_string(i + 1));
  return gaussharm::LieAlgebra(labels, e);
}

inline gaussharm::LieAlgebra so3() { return to_algebra(so3_tensor()); }
inline gaussharm::LieAlgebra so3xso3() { return to_algebra(so3_tensor(2)); }
inline gaussharm::LieAlgebra heisenberg3() { return to_algebra(heisenberg3_tensor()); }

inline Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

inline gaussharm::MetricLieAlgebra so3xso3_metric(double a) {
  return {so3xso3(), gaussharm::InnerProduct(diag({1, 1, 1, a * a, a * a, a * a}))};
}

inline Vector unit(Index n, Index k) { return Vector::Unit(n, k); }

inline Matrix cols(std::initializer_list<Vector> vs) {
  Matrix m(vs.begin()->size(), static_cast<Index>(vs.size()));
  Index c = 0;
  for (const auto& v : vs) m.col(c++) = v;
  return m;
}

/// The diagonal Lie triple system e1+f1, e2-f2, e3+f3.
inline Matrix diagonal_w() {
  auto e = [](Index k) { return unit(6, k); };
  return cols({e(0) + e(3), e(1) - e(4), e(2) + e(5)});
}

inline Vector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

inline Matrix random_spd(std::mt19937_64& rng, Index n) {
  Matrix a(n, n);
  for (Index c = 0; c < n; ++c) a.col(c) = random_vector(rng, n);
  return a * a.transpose() + Matrix::Identity(n, n);
}

/// Classical Gram-Schmidt against g, written independently of the library.
inline Matrix classical_gs(const Matrix& g, const Matrix& vs) {
  Matrix out(vs.rows(), vs.cols());
  for (Index c = 0; c < vs.cols(); ++c) {
    Vector v = vs.col(c);
    for (Index p = 0; p < c; ++p) v -= out.col(p).dot(g * vs.col(c)) * out.col(p);
    out.col(c) = v / std::sqrt(v.dot(g * v));
  }
  return out;
}

/// Koszul formula via the explicit inverse, summing over basis vectors z.
inline Vector koszul(const Tensor& t, const Matrix& g, const Vector& x, const Vector& y) {
  Vector rhs(t.n);
  for (Index k = 0; k < t.n; ++k) {
    const Vector z = unit(t.n, k);
    rhs(k) = 0.5 * (tensor_bracket(t, x, y).dot(g * z) - tensor_bracket(t, y, z).dot(g * x) +
                    tensor_bracket(t, z, x).dot(g * y));
  }
  return g.inverse() * rhs;
}

/// Sum_i <[Y_i,Y_j]^T, [Y_i,Y_a]^T> evaluated directly from the frames.
inline double tangent_form_sum(const Tensor& t, const Matrix& g, const Matrix& tangent,
                               const Matrix& normal, Index j, Index a) {
  auto tproj = [&](const Vector& v) {
    Vector out = Vector::Zero(v.size());
    for (Index i = 0; i < tangent.cols(); ++i) out += tangent.col(i).dot(g * v) * tangent.col(i);
    return out;
  };
  double s = 0.0;
  for (Index i = 0; i < tangent.cols(); ++i) {
    const Vector u = tproj(tensor_bracket(t, tangent.col(i), tangent.col(j)));
    const Vector w = tproj(tensor_bracket(t, tangent.col(i), normal.col(a)));
    s += u.dot(g * w);
  }
  return s;
}

/// Frames by Gram-Schmidt on the generators followed by the standard basis.
inline std::pair<Matrix, Matrix> gs_frames(const Matrix& g, const Matrix& gens) {
  const Index n = g.rows();
  Matrix all(n, gens.cols() + n);
  all << gens, Matrix::Identity(n, n);
  std::vector<Vector> kept;
  for (Index c = 0; c < all.cols() && static_cast<Index>(kept.size()) < n; ++c) {
    Vector v = all.col(c);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& p : kept) v -= p.dot(g * v) * p;
    const double len = std::sqrt(v.dot(g * v));
    if (len > 1e-8) kept.push_back(v / len);
  }
  Matrix tangent(n, gens.cols()), normal(n, n - gens.cols());
  for (Index c = 0; c < gens.cols(); ++c) tangent.col(c) = kept[c];
  for (Index c = gens.cols(); c < n; ++c) normal.col(c - gens.cols()) = kept[c];
  return {tangent, normal};
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

template <class F>
void expect_error(gaussharm::Errc code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << gaussharm::to_string(code);
  } catch (const gaussharm::Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace testing_support
