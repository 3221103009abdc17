#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "gaussharm/document.hpp"
#include "gaussharm/harmonicity.hpp"
#include "gaussharm/nilpotent.hpp"

namespace gaussharm::io {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr Index kDefaultProbeSamples = 1000;

struct TaskOutcome {
  std::string task;
  bool ok = true;
  std::optional<Errc> error;
  std::string message;
  std::string verdict;
  json details = json::object();
  std::vector<std::string> warnings;
};

struct ReportDocument {
  json inputs;
  std::vector<TaskOutcome> tasks;
};

/// Optional command-line overrides applied on top of a document.
struct RunOptions {
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::vector<std::string> tasks;
};

/// %.17g: lossless for doubles.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// FNV-1a over the 17-digit decimal entries of the metric matrix.
inline std::string metric_fingerprint(const Matrix& g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  mix(std::to_string(g.rows()));
  for (Index r = 0; r < g.rows(); ++r)
    for (Index c = 0; c < g.cols(); ++c) mix("," + format_number(g(r, c)));
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline json report_json(const HarmonicityReport& r) {
  return {{"criterion", std::string(to_string(r.criterion))},
          {"tangent_dim", r.residual.rows()},
          {"normal_dim", r.residual.cols()},
          {"residual", rows_to_json(r.residual)},
          {"max_abs", r.max_abs},
          {"harmonic", r.harmonic},
          {"tol", r.tol}};
}

inline json subspace_json(const Subspace& s) {
  return {{"dim", s.dim()}, {"basis", columns_to_json(s.basis())}};
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

struct Context {
  const AnalysisDocument& doc;
  MetricLieAlgebra m;
  double tol;
  std::uint64_t seed;
  double lambda;
};

inline const Matrix& need_subspace(const Context& c, const char* task) {
  if (!c.doc.subspace) throw Error(Errc::InvalidArgument, std::string(task) + " needs 'subspace'");
  return *c.doc.subspace;
}

inline ImmersionPointData point_data(const Context& c, TaskOutcome& out) {
  const auto& im = *c.doc.immersion;
  ImmersionPointData d;
  d.tangent_frame = im.tangent_frame;
  d.normal_frame = im.normal_frame;
  d.second_fundamental = im.b;
  if (im.dH) {
    d.dH = *im.dH;
  } else {
    d.dH = Matrix::Zero(im.tangent_frame.cols(), im.normal_frame.cols());
    d.dH_defaulted = true;
    out.warnings.push_back("dH not given; taken as zero");
  }
  return d;
}

inline std::string harmonic_word(bool h) { return h ? "harmonic" : "not harmonic"; }

inline void task_validate(const Context& c, TaskOutcome& out) {
  const double jac = jacobi_residual(c.m.algebra());
  const double bi = biinvariance_residual(c.m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c.m.metric().matrix(), Eigen::EigenvaluesOnly);
  out.details["dim"] = c.m.dim();
  out.details["jacobi_residual"] = jac;
  out.details["metric_min_eigenvalue"] = es.eigenvalues()(0);
  out.details["biinvariance_residual"] = bi;
  out.details["biinvariant"] = bi <= c.tol;
  if (c.doc.subspace) {
    out.details["subspace_lie_triple_residual"] =
        lie_triple_residual(c.m.algebra(), Subspace::span(*c.doc.subspace));
  }
  out.verdict = jac <= c.tol ? "valid" : "invalid (Jacobi identity fails)";
}

inline void task_classify_structure(const Context& c, TaskOutcome& out) {
  const auto& alg = c.m.algebra();
  const Subspace z = center(alg);
  const Subspace d = derived_subalgebra(alg);
  out.details["center"] = subspace_json(z);
  out.details["derived"] = subspace_json(d);
  out.details["killing_form"] = rows_to_json(killing_form(alg));
  const bool bi = is_biinvariant(c.m, c.tol);
  out.details["biinvariant"] = bi;
  std::vector<std::string> tags;
  if (d.is_zero()) tags.push_back("abelian");
  if (bi) {
    tags.push_back("biinvariant");
    const Subspace whole = Subspace::whole(alg.dim());
    const CompactSplit split = compact_split(c.m, whole, c.tol);
    out.details["compact_split"] = {{"abelian_dim", split.abelian_part.dim()},
                                    {"semisimple_dim", split.semisimple_part.dim()}};
    std::mt19937_64 rng(c.seed);
    const SimpleIdealList ideals = simple_ideals(c.m, split.semisimple_part, rng, c.tol);
    json list = json::array();
    for (std::size_t l = 0; l < ideals.ideals.size(); ++l) {
      list.push_back({{"dim", ideals.ideals[l].dim()},
                      {"killing_multiplier", optional_number(ideals.killing_multipliers[l])},
                      {"basis", columns_to_json(ideals.ideals[l].basis())}});
    }
    out.details["simple_ideals"] = std::move(list);
  }
  try {
    const NilpotentStructure ns = build_nilpotent(c.m, c.tol);
    tags.push_back("2-step nilpotent");
    const NonsingularProbe probe = nonsingular_probe(ns, kDefaultProbeSamples, c.seed, c.tol);
    json nj = {{"center_dim", ns.center().dim()},
               {"complement_dim", ns.complement().dim()},
               {"nonsingular_witnessed", probe.nonsingular_witnessed},
               {"probabilistic", probe.probabilistic},
               {"samples_used", probe.samples_used},
               {"min_abs_det", probe.min_abs_det}};
    if (probe.singular_z) {
      nj["singular_z"] = columns_to_json(Matrix(*probe.singular_z))[0];
    }
    if (probe.probabilistic) out.warnings.push_back("nonsingularity probe is probabilistic");
    out.details["nilpotent"] = std::move(nj);
    tags.push_back(probe.nonsingular_witnessed ? "nonsingular" : "singular");
  } catch (const Error& e) {
    if (e.code() != Errc::NotTwoStep) throw;
  }
  if (c.doc.subspace) {
    out.details["subspace_lie_triple_residual"] =
        lie_triple_residual(alg, Subspace::span(*c.doc.subspace));
  }
  std::string verdict;
  for (const auto& t : tags) verdict += (verdict.empty() ? "" : ", ") + t;
  out.verdict = verdict.empty() ? "general" : verdict;
}

inline void add_report(TaskOutcome& out, const std::string& label, const HarmonicityReport& r) {
  out.details["residuals"].push_back(report_json(r));
  out.details["residuals"].back()["label"] = label;
}

inline void task_eq1(const Context& c, TaskOutcome& out) {
  if (!c.doc.immersion) throw Error(Errc::InvalidArgument, "harmonicity_eq1 needs 'immersion'");
  const auto r = residual_eq1(c.m, point_data(c, out), c.tol);
  add_report(out, "eq1", r);
  out.verdict = harmonic_word(r.harmonic);
}

inline void task_tg(const Context& c, TaskOutcome& out) {
  const auto r = residual_eq1_2(c.m, Subspace::span(need_subspace(c, "harmonicity_tg")), c.tol);
  add_report(out, "totally_geodesic", r);
  out.verdict = harmonic_word(r.harmonic);
}

inline void task_biinv(const Context& c, TaskOutcome& out) {
  if (!c.doc.immersion && !c.doc.subspace) {
    throw Error(Errc::InvalidArgument, "harmonicity_biinv needs 'immersion' or 'subspace'");
  }
  bool harmonic = true;
  if (c.doc.immersion) {
    const auto r = residual_eq2(c.m, point_data(c, out), c.tol);
    add_report(out, "biinvariant", r);
    harmonic = harmonic && r.harmonic;
  }
  if (c.doc.subspace) {
    const auto r = residual_pr2(c.m, Subspace::span(*c.doc.subspace), c.tol);
    add_report(out, "normal_form", r.normal_form);
    add_report(out, "tangent_form", r.tangent_form);
    harmonic = harmonic && r.normal_form.harmonic;
  }
  out.verdict = harmonic_word(harmonic);
}

inline json classification_json(const Theorem2Classification& cls) {
  json ideals = json::array();
  for (std::size_t l = 0; l < cls.ideals.ideals.size(); ++l) {
    ideals.push_back({{"dim", cls.ideals.ideals[l].dim()},
                      {"killing_multiplier", optional_number(cls.ideals.killing_multipliers[l])},
                      {"projection_dim", cls.projections[l].dim()},
                      {"overlap_dim", cls.overlap_dims[l]}});
  }
  return {{"n_bar_dim", cls.n_bar.dim()},
          {"center_part_dim", cls.split.abelian_part.dim()},
          {"derived_part_dim", cls.split.semisimple_part.dim()},
          {"w_script_dim", cls.w_script.dim()},
          {"w_bar_dim", cls.w_bar.dim()},
          {"v_dim", cls.v.dim()},
          {"w_tilde_dim", cls.w_tilde.dim()},
          {"ideals", std::move(ideals)},
          {"case1", cls.case1_applies},
          {"case2", cls.case2_applies},
          {"case3", cls.case3_applies},
          {"witness_index", cls.witness_index ? json(*cls.witness_index + 1) : json(nullptr)}};
}

inline void add_witness(const Context& c, const Theorem2Classification& cls, TaskOutcome& out) {
  const WitnessMetric w = witness_metric(c.m, cls, c.lambda, c.tol);
  out.details["witness"] = {{"lambda", w.lambda},
                            {"attempts", w.attempts},
                            {"metric", rows_to_json(w.metric.matrix())},
                            {"metric_fingerprint", metric_fingerprint(w.metric.matrix())}};
  add_report(out, "witness_tangent_form", w.residuals.tangent_form);
}

inline std::string case_list(const Theorem2Classification& cls) {
  std::string s;
  if (cls.case1_applies) s += "1";
  if (cls.case2_applies) s += s.empty() ? "2" : ",2";
  if (cls.case3_applies) s += s.empty() ? "3" : ",3";
  return s;
}

inline void task_theorem2(const Context& c, TaskOutcome& out) {
  const Subspace tangent = Subspace::span(need_subspace(c, "theorem2"));
  std::mt19937_64 rng(c.seed);
  const auto cls = classify_theorem2(c.m, tangent, rng, c.tol);
  out.details["classification"] = classification_json(cls);
  const auto r = residual_pr2(c.m, tangent, c.tol);
  add_report(out, "tangent_form", r.tangent_form);
  if (cls.case3_applies) add_witness(c, cls, out);
  out.verdict = harmonic_word(r.tangent_form.harmonic) + "; cases " + case_list(cls);
}

inline void task_witness(const Context& c, TaskOutcome& out) {
  const Subspace tangent = Subspace::span(need_subspace(c, "witness"));
  std::mt19937_64 rng(c.seed);
  const auto cls = classify_theorem2(c.m, tangent, rng, c.tol);
  add_witness(c, cls, out);
  out.verdict = "witness found (not harmonic in witness metric)";
}

inline void task_nilpotent_geodesic(const Context& c, TaskOutcome& out) {
  const Matrix& s = need_subspace(c, "nilpotent_geodesic");
  if (s.cols() != 1) {
    throw Error(Errc::InvalidArgument, "nilpotent_geodesic needs exactly one subspace generator");
  }
  const NilpotentStructure ns = build_nilpotent(c.m, c.tol);
  const GeodesicVerdict v = geodesic_gauss_verdict(ns, s.col(0), c.tol);
  out.details["x_part"] = columns_to_json(Matrix(v.x_part))[0];
  out.details["z_part"] = columns_to_json(Matrix(v.z_part))[0];
  out.details["jzx_norm"] = v.jzx_norm;
  out.details["residual_norm"] = v.residual_norm;
  out.details["one_parameter"] = v.one_parameter;
  add_report(out, "totally_geodesic", residual_eq1_2(c.m, Subspace::span(s), c.tol));
  out.verdict = v.harmonic ? "harmonic (one-parameter subgroup)" : "not harmonic";
}

}  // namespace detail

/// Runs every task of `doc` (or of opts.tasks when given). Failures are recorded per task.
inline ReportDocument run_tasks(const AnalysisDocument& doc, const RunOptions& opts = {}) {
  const double tol = opts.tolerance.value_or(doc.tolerance.value_or(kDefaultTol));
  const std::uint64_t seed = opts.seed.value_or(doc.seed.value_or(kDefaultSeed));
  const double lambda = opts.lambda.value_or(doc.lambda.value_or(1.0));
  const std::vector<std::string>& tasks = opts.tasks.empty() ? doc.tasks : opts.tasks;

  detail::Context ctx{doc, MetricLieAlgebra(doc.algebra, resolve_metric(doc.algebra, doc.metric)),
                      tol, seed, lambda};
  ReportDocument report;
  report.inputs = {{"dim", doc.algebra.dim()},
                   {"labels", doc.algebra.labels()},
                   {"metric_fingerprint", metric_fingerprint(ctx.m.metric().matrix())},
                   {"subspace_generators", doc.subspace ? doc.subspace->cols() : 0},
                   {"immersion", doc.immersion.has_value()},
                   {"tolerance", tol},
                   {"seed", seed},
                   {"lambda", lambda}};

  for (const auto& name : tasks) {
    TaskOutcome out;
    out.task = name;
    try {
      if (name == "validate") detail::task_validate(ctx, out);
      else if (name == "classify_structure") detail::task_classify_structure(ctx, out);
      else if (name == "harmonicity_eq1") detail::task_eq1(ctx, out);
      else if (name == "harmonicity_tg") detail::task_tg(ctx, out);
      else if (name == "harmonicity_biinv") detail::task_biinv(ctx, out);
      else if (name == "theorem2") detail::task_theorem2(ctx, out);
      else if (name == "witness") detail::task_witness(ctx, out);
      else if (name == "nilpotent_geodesic") detail::task_nilpotent_geodesic(ctx, out);
      else throw Error(Errc::SchemaError, "unknown task '" + name + "'");
    } catch (const Error& e) {
      out.ok = false;
      out.error = e.code();
      out.message = e.what();
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = Errc::NumericalFailure;
      out.message = e.what();
    }
    if (!out.ok) {
      out.verdict = "error";
      out.details = json::object();
    }
    report.tasks.push_back(std::move(out));
  }
  return report;
}

inline json to_json(const ReportDocument& r) {
  json tasks = json::array();
  for (const auto& t : r.tasks) {
    json j = {{"task", t.task}, {"status", t.ok ? "ok" : "error"}, {"verdict", t.verdict}};
    if (t.error) {
      j["error"] = std::string(to_string(*t.error));
      j["message"] = t.message;
    }
    j["details"] = t.details;
    j["warnings"] = t.warnings;
    tasks.push_back(std::move(j));
  }
  return {{"inputs", r.inputs}, {"tasks", std::move(tasks)}};
}

/// 0 = all tasks ran, 2 = document error, 3 = precondition violation, 4 = numerical failure.
inline int exit_code(const ReportDocument& r) {
  int code = 0;
  for (const auto& t : r.tasks) {
    if (!t.error) continue;
    switch (category(*t.error)) {
      case ErrorCategory::Document: code = std::max(code, 2); break;
      case ErrorCategory::Precondition: code = std::max(code, 3); break;
      case ErrorCategory::Numerical: code = std::max(code, 4); break;
    }
  }
  return code;
}

inline std::string render_text(const ReportDocument& r) {
  std::string s;
  for (const auto& t : r.tasks) {
    s += "TASK " + t.task + ": " + t.verdict + "\n";
    if (!t.ok) {
      s += "  " + t.message + "\n";
      continue;
    }
    for (const auto& w : t.warnings) s += "  warning: " + w + "\n";
    for (const auto& [key, value] : t.details.items()) {
      if (key == "residuals") continue;
      if (value.is_number_float()) {
        s += "  " + key + " = " + format_number(value.get<double>()) + "\n";
      } else {
        s += "  " + key + " = " + value.dump() + "\n";
      }
    }
    if (!t.details.contains("residuals")) continue;
    for (const auto& rep : t.details["residuals"]) {
      s += "  [" + rep["label"].get<std::string>() + " " + rep["criterion"].get<std::string>() +
           "] max_abs = " + format_number(rep["max_abs"].get<double>()) + " (" +
           detail::harmonic_word(rep["harmonic"].get<bool>()) + ")\n";
      const Index n = rep["tangent_dim"].get<Index>();
      const auto& rows = rep["residual"];
      for (Index j = 0; j < n; ++j) {
        for (std::size_t a = 0; a < rows[j].size(); ++a) {
          s += "    r[" + std::to_string(j + 1) + "][" + std::to_string(n + 1 + static_cast<Index>(a)) +
               "] = " + format_number(rows[j][a].get<double>()) + "\n";
        }
      }
    }
  }
  return s;
}

}  // namespace gaussharm::io
