#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "gaussharm/gaussharm.hpp"

namespace {

struct Flags {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::string format = "text";
  std::vector<std::string> tasks;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--tol", f.tol, "Tolerance for verdicts");
  cmd->add_option("--seed", f.seed, "Seed for randomized steps");
  cmd->add_option("--lambda", f.lambda, "Starting witness scale");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--task", f.tasks, "Task to run (repeatable); overrides the document");
}

int run(const gaussharm::io::AnalysisDocument& doc, const Flags& f) {
  gaussharm::io::RunOptions opts{f.tol, f.seed, f.lambda, f.tasks};
  const auto report = gaussharm::io::run_tasks(doc, opts);
  if (f.format == "json") {
    std::cout << gaussharm::io::to_json(report).dump(2) << "\n";
  } else {
    std::cout << gaussharm::io::render_text(report);
  }
  return gaussharm::io::exit_code(report);
}

int fail(const gaussharm::Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  switch (gaussharm::category(e.code())) {
    case gaussharm::ErrorCategory::Document: return 2;
    case gaussharm::ErrorCategory::Precondition: return 3;
    default: return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauss map harmonicity checks for left-invariant metrics on Lie groups"};
  app.require_subcommand(1);

  Flags flags;
  std::string path;
  auto* analyze = app.add_subcommand("analyze", "Run the tasks of a JSON analysis document");
  analyze->add_option("file", path, "Document path")->required();
  add_common(analyze, flags);

  std::string name;
  std::vector<std::string> params;
  bool emit = false;
  auto* builtin = app.add_subcommand("builtin", "Run tasks on a catalog algebra");
  builtin->add_option("name", name, "Catalog entry")->required();
  builtin->add_option("--param", params, "Catalog parameter as k=v (repeatable)");
  builtin->add_flag("--emit", emit, "Print the catalog document instead of running it");
  add_common(builtin, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      std::ifstream in(path);
      if (!in) {
        std::cerr << "error: cannot read " << path << "\n";
        return 2;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      return run(gaussharm::io::parse_document(buf.str()), flags);
    }
    std::map<std::string, std::string> kv;
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --param expects k=v, got '" << p << "'\n";
        return 2;
      }
      kv[p.substr(0, eq)] = p.substr(eq + 1);
    }
    const auto doc = gaussharm::io::builtin(name, kv);
    if (emit) {
      std::cout << gaussharm::io::emit_document(doc).dump(2) << "\n";
      return 0;
    }
    return run(doc, flags);
  } catch (const gaussharm::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
