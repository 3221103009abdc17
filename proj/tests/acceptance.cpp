// Acceptance checks: one PASS/FAIL line per criterion.
#include <cstdio>
#include <functional>
#include <sstream>

#include "support.hpp"

using namespace gaussharm;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Subspace span_of(std::initializer_list<Vector> vs) { return Subspace::span(cols(vs)); }

Outcome a1() {
  const double a = 2.0;
  const auto doc = io::builtin("so3xso3", {{"a", "2"}});
  const MetricLieAlgebra m(doc.algebra, io::resolve_metric(doc.algebra, doc.metric));
  const auto r = residual_pr2(m, Subspace::span(*doc.subspace));
  const double got = r.tangent_form.residual(0, 0);
  const double closed = 4 * a * (1 - a * a) / std::pow(1 + a * a, 3);
  const auto [t, n] = gs_frames(m.metric().matrix(), diagonal_w());
  const double direct = tangent_form_sum(so3_tensor(2), m.metric().matrix(), t, n, 0, 0);
  std::ostringstream s;
  s.precision(17);
  s << "r(1,4)=" << got << " closed=" << closed << " direct=" << direct;
  const bool ok = std::abs(got - (-0.192)) <= 1e-9 && std::abs(closed - (-0.192)) <= 1e-12 &&
                  std::abs(direct - got) <= 1e-9 && !r.tangent_form.harmonic;
  return {ok, s.str()};
}

Outcome a2() {
  const auto m = so3xso3_metric(1.0);
  const Subspace w = Subspace::span(diagonal_w());
  const auto r = residual_pr2(m, w);
  std::mt19937_64 rng(42);
  const auto cls = classify_theorem2(m, w, rng);
  const auto wit = witness_metric(m, cls, 1.0);
  Matrix expect = Matrix::Zero(6, 6);
  for (Index k = 0; k < 6; ++k) expect(k, k) = (k / 3 == cls.witness_index.value()) ? 4.0 : 2.0;
  const double block_err = (wit.metric.matrix() - expect).cwiseAbs().maxCoeff();
  std::ostringstream s;
  s << "pr2 max=" << std::max(r.normal_form.max_abs, r.tangent_form.max_abs)
    << " case1=" << cls.case1_applies << " case3=" << cls.case3_applies
    << " l0=" << *cls.witness_index + 1 << " block_err=" << block_err
    << " witness max=" << wit.residuals.tangent_form.max_abs;
  const bool ok = r.normal_form.max_abs <= 1e-9 && r.tangent_form.max_abs <= 1e-9 &&
                  cls.case1_applies && cls.case3_applies && cls.witness_index && block_err <= 1e-9 &&
                  wit.residuals.tangent_form.max_abs > 1e-9;
  return {ok, s.str()};
}

Outcome a3() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  const std::vector<MetricLieAlgebra> ms{MetricLieAlgebra(so3(), InnerProduct::identity(3)),
                                         so3xso3_metric(1.0), so3xso3_metric(2.0)};
  for (const auto& m : ms) {
    const auto& alg = m.algebra();
    for (int s = 0; s < 50; ++s) {
      const Vector x = random_vector(rng, m.dim()), y = random_vector(rng, m.dim()),
                   z = random_vector(rng, m.dim());
      worst = std::max(worst, (curvature(m, x, y, z) + 0.25 * bracket(alg, bracket(alg, x, y), z)).norm());
    }
  }
  return {worst <= 1e-12, "max deviation " + sci(worst)};
}

Outcome a4() {
  std::mt19937_64 rng(4);
  bool exact = true;
  for (Index n : {3, 4, 6}) {
    const auto doc = io::builtin("euclidean", {{"n", std::to_string(n)}});
    const MetricLieAlgebra m(doc.algebra, io::resolve_metric(doc.algebra, doc.metric));
    for (Index k = 1; k < n; ++k) {
      Matrix gens(n, k);
      for (Index c = 0; c < k; ++c) gens.col(c) = random_vector(rng, n);
      const auto [t, nf] = gs_frames(Matrix::Identity(n, n), gens);
      ImmersionPointData d;
      d.tangent_frame = t;
      d.normal_frame = nf;
      for (Index a = 0; a < nf.cols(); ++a) {
        Matrix b(k, k);
        for (Index c = 0; c < k; ++c) b.col(c) = random_vector(rng, k);
        d.second_fundamental.push_back(b + b.transpose());
      }
      d.dH.resize(k, nf.cols());
      for (Index c = 0; c < nf.cols(); ++c) d.dH.col(c) = random_vector(rng, k);
      exact = exact && residual_eq1(m, d).residual == -d.dH;
    }
  }
  return {exact, exact ? "residual_eq1 == -dH bitwise" : "mismatch"};
}

Outcome a5() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (double a : {1.0, 2.0}) {
    const auto m = so3xso3_metric(a);
    for (int s = 0; s < 20; ++s) {
      Matrix gens(6, 5);
      for (Index c = 0; c < 5; ++c) gens.col(c) = random_vector(rng, 6);
      const auto [t, nf] = gs_frames(m.metric().matrix(), gens);
      ImmersionPointData d;
      d.tangent_frame = t;
      d.normal_frame = nf;
      Matrix b(5, 5);
      for (Index c = 0; c < 5; ++c) b.col(c) = random_vector(rng, 5);
      d.second_fundamental = {b + b.transpose()};
      d.dH = Matrix(5, 1);
      d.dH.col(0) = random_vector(rng, 5);
      worst = std::max(worst, max_abs(residual_eq2(m, d).residual + d.dH));
    }
  }
  return {worst <= 1e-12, "max |r + dH| = " + sci(worst)};
}

Outcome a6() {
  const MetricLieAlgebra h(heisenberg3(), InnerProduct::identity(3));
  const auto ns = build_nilpotent(h);
  const auto v = geodesic_gauss_verdict(ns, unit(3, 0) + unit(3, 2));
  const bool x1 = geodesic_gauss_verdict(ns, unit(3, 0)).harmonic;
  const bool z = geodesic_gauss_verdict(ns, unit(3, 2)).harmonic;
  std::mt19937_64 rng(6);
  bool equiv = true;
  for (int s = 0; s < 200; ++s) {
    const auto g = geodesic_gauss_verdict(ns, random_vector(rng, 3));
    equiv = equiv && ((g.jzx_norm <= 1e-9) == (g.residual_norm <= 1e-9));
  }
  std::ostringstream s;
  s.precision(17);
  s << "residual=" << v.residual_norm << " jzx=" << v.jzx_norm;
  const bool ok = !v.harmonic && std::abs(v.residual_norm - 0.25) <= 1e-9 &&
                  std::abs(v.jzx_norm - 0.5) <= 1e-9 && x1 && z && equiv;
  return {ok, s.str()};
}

Outcome a7() {
  const Subspace w = span_of({unit(6, 0), unit(6, 1), unit(6, 3), unit(6, 4)});
  bool ok = true;
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0, 3.0}) {
    const auto m = so3xso3_metric(a);
    std::mt19937_64 rng(42);
    const auto cls = classify_theorem2(m, w, rng);
    const auto r = residual_pr2(m, w);
    worst = std::max({worst, r.normal_form.max_abs, r.tangent_form.max_abs});
    ok = ok && cls.case2_applies && !cls.case3_applies;
  }
  ok = ok && worst <= 1e-9;
  return {ok, "max residual " + sci(worst)};
}

Outcome a8() {
  std::mt19937_64 rng(8);
  double eq12 = 0.0, tg = 0.0, lts = 0.0;
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  for (int s = 0; s < 100; ++s) {
    // Eq1 vs Eq2 on a biinvariant metric with random frames, b and dH.
    const auto m = so3xso3_metric(scale(rng));
    const Index n = 1 + static_cast<Index>(rng() % 5);
    Matrix gens(6, n);
    for (Index c = 0; c < n; ++c) gens.col(c) = random_vector(rng, 6);
    const auto [t, nf] = gs_frames(m.metric().matrix(), gens);
    ImmersionPointData d;
    d.tangent_frame = t;
    d.normal_frame = nf;
    for (Index a = 0; a < nf.cols(); ++a) {
      Matrix b(n, n);
      for (Index c = 0; c < n; ++c) b.col(c) = random_vector(rng, n);
      d.second_fundamental.push_back((b + b.transpose()) / 2);
    }
    d.dH.resize(n, nf.cols());
    for (Index c = 0; c < nf.cols(); ++c) d.dH.col(c) = random_vector(rng, n);
    eq12 = std::max(eq12, max_abs(residual_eq1(m, d).residual - residual_eq2(m, d).residual));

    // Totally geodesic form against Eq1 with b = 0, dH = 0 in a random metric.
    const MetricLieAlgebra r(s % 2 ? heisenberg3() : so3(), InnerProduct(random_spd(rng, 3)));
    const Index k = 1 + static_cast<Index>(rng() % 2);
    Matrix g3(3, k);
    for (Index c = 0; c < k; ++c) g3.col(c) = random_vector(rng, 3);
    const auto [t3, n3] = gs_frames(r.metric().matrix(), g3);
    tg = std::max(tg, max_abs(residual_eq1(r, ImmersionPointData::totally_geodesic(t3, n3)).residual -
                              residual_eq1_2(r, Subspace::span(g3)).residual));

    // Normal form = -tangent form on Lie triple systems.
    const std::vector<Matrix> systems{
        diagonal_w(), cols({unit(6, 0), unit(6, 1), unit(6, 3), unit(6, 4)}),
        cols({unit(6, 0) + unit(6, 3), unit(6, 1) + unit(6, 4), unit(6, 2) + unit(6, 5)}),
        cols({unit(6, 0), unit(6, 3)}), cols({unit(6, 0) + 2.0 * unit(6, 4)})};
    const auto p = residual_pr2(m, Subspace::span(systems[s % systems.size()]));
    lts = std::max(lts, max_abs(p.normal_form.residual + p.tangent_form.residual));
  }
  std::ostringstream out;
  out << "eq1-eq2=" << eq12 << " eq1-eq1_2=" << tg << " normal+tangent=" << lts;
  return {eq12 <= 1e-9 && tg <= 1e-9 && lts <= 1e-9, out.str()};
}

Outcome a9() {
  std::mt19937_64 rng(42);
  const auto list = simple_ideals(so3xso3_metric(2.0), Subspace::whole(6), rng);
  double dist = 1.0;
  if (list.ideals.size() == 2) {
    dist = std::max(subspace_distance(list.ideals[0], span_of({unit(6, 0), unit(6, 1), unit(6, 2)})),
                    subspace_distance(list.ideals[1], span_of({unit(6, 3), unit(6, 4), unit(6, 5)})));
  }
  const double kill = (killing_form(so3()) + 2.0 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff();
  const double lts = lie_triple_residual(so3xso3(), Subspace::span(diagonal_w()));
  std::ostringstream s;
  s << "ideals=" << list.ideals.size() << " dist=" << dist << " killing=" << kill << " lts=" << lts;
  return {list.ideals.size() == 2 && dist <= 1e-9 && kill <= 1e-12 && lts <= 1e-12, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s  %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
