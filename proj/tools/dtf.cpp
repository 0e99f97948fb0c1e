// dtf: parse, check, translate and prove DTF problems.
//
// Exit codes: 0 success or Theorem, 1 check failure or another verdict,
// 2 parse or usage error, 3 prover or system error.

#include <stdlib.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dtf/deep_check.hpp"
#include "dtf/erasure.hpp"
#include "dtf/prover_client.hpp"
#include "dtf/shallow_check.hpp"
#include "dtf/stats.hpp"
#include "dtf/syntax.hpp"

namespace fs = std::filesystem;
using namespace dtf;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kSystem = 3;

void report(const std::vector<Diagnostic>& diags, const std::string& file) {
  for (const Diagnostic& d : diags) std::cerr << format_diagnostic(d, file) << "\n";
}

std::optional<Problem> load(const std::string& file) {
  Result<Problem> r = parse_file(file);
  if (!r) {
    report(r.diagnostics(), file);
    return std::nullopt;
  }
  return std::move(r).value();
}

std::string describe_context(const Context& ctx) {
  std::string out;
  for (const ContextEntry& e : ctx.entries) {
    if (!out.empty()) out += ", ";
    if (const auto* v = std::get_if<VarDecl>(&e)) out += v->name + ": " + print_type(v->type);
    else out += "assume " + print_term(std::get<Assumption>(e).formula);
  }
  return out.empty() ? "(empty)" : out;
}

void print_obligation(const Obligation& ob, const std::string& file) {
  std::cout << "obligation " << ob.label << " (" << origin_name(ob.origin) << ") at " << file << ":"
            << ob.source_span.line << ":" << ob.source_span.column << "\n"
            << "  context: " << describe_context(ob.context) << "\n"
            << "  goal: " << print_term(ob.goal) << "\n";
}

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write '" << path.string() << "'\n";
    return false;
  }
  return true;
}

int cmd_parse(const std::vector<std::string>& files, bool print) {
  int code = kOk;
  for (const auto& file : files) {
    auto p = load(file);
    if (!p) {
      code = kUsage;
      continue;
    }
    if (print) std::cout << print_problem(*p);
  }
  return code;
}

int cmd_check(const std::vector<std::string>& files, bool deep) {
  int code = kOk;
  for (const auto& file : files) {
    auto p = load(file);
    if (!p) {
      code = std::max(code, kUsage);
      continue;
    }
    if (!deep) {
      auto diags = check_shallow(*p);
      report(diags, file);
      if (!diags.empty()) code = std::max(code, kCheckFailed);
      continue;
    }
    CheckReport r = check_problem(*p);
    report(r.diagnostics, file);
    if (!r.ok()) {
      code = std::max(code, kCheckFailed);
      continue;
    }
    for (const Obligation& ob : r.residual) print_obligation(ob, file);
    std::cout << "obligations: " << r.residual.size() << " residual, " << r.discharged.size()
              << " discharged\n";
  }
  return code;
}

int cmd_obligations(const std::string& file, const std::string& out_dir) {
  auto p = load(file);
  if (!p) return kUsage;
  CheckReport r = check_problem(*p);
  report(r.diagnostics, file);
  if (!r.ok()) return kCheckFailed;
  try {
    for (const auto& path : export_obligations(*p, r, out_dir, fs::path(file).stem().string()))
      std::cout << path.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSystem;
  }
  return kOk;
}

int cmd_translate(const std::string& file, const std::string& out, bool assume) {
  auto p = load(file);
  if (!p) return kUsage;
  CheckReport r = check_problem(*p);
  report(r.diagnostics, file);
  if (!r.ok()) return kCheckFailed;
  std::string text;
  try {
    text = print_erased(erase_problem(*p, r, ErasureOptions{assume}));
  } catch (const std::exception& e) {
    std::cerr << file << ": error: " << e.what() << "\n";
    return kCheckFailed;
  }
  if (out.empty()) {
    std::cout << text;
    return kOk;
  }
  fs::path target = out;
  if (fs::is_directory(target)) target /= fs::path(file).stem().string() + "__erased.p";
  return write_file(target, text) ? kOk : kSystem;
}

int cmd_stats(const std::vector<std::string>& files) {
  int code = kOk;
  for (const auto& file : files) {
    auto p = load(file);
    if (!p) {
      code = kUsage;
      continue;
    }
    if (files.size() > 1) std::cout << file << ":\n";
    std::cout << format_stats(compute_stats(*p));
  }
  return code;
}

struct SolveOptions {
  std::string file;
  std::string prover;
  double timeout = 60;
  int jobs = 1;
  bool obligations_only = false;
  bool conjecture_only = false;
  std::string work_dir;
};

int cmd_solve(const SolveOptions& o) {
  ProverConfig cfg;
  cfg.command_template = o.prover.empty() ? ProverConfig::default_template().value_or("") : o.prover;
  cfg.timeout = o.timeout;
  cfg.max_parallel = o.jobs;
  if (cfg.command_template.empty()) {
    std::cerr << "error: no prover given (use --prover or set DTF_PROVER)\n";
    return kUsage;
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  auto p = load(o.file);
  if (!p) return kUsage;
  CheckReport r = check_problem(*p);
  report(r.diagnostics, o.file);
  if (!r.ok()) return kCheckFailed;

  fs::path dir;
  bool temporary = false;
  if (!o.work_dir.empty()) {
    dir = o.work_dir;
    fs::create_directories(dir);
  } else {
    std::string tmpl = (fs::temp_directory_path() / "dtf-solve-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) {
      std::cerr << "error: cannot create a temporary directory\n";
      return kSystem;
    }
    dir = tmpl;
    temporary = true;
  }

  const std::string stem = fs::path(o.file).stem().string();
  std::vector<fs::path> files;
  bool ok = true;
  try {
    if (!o.conjecture_only) {
      for (std::size_t k = 0; k < r.residual.size() && ok; ++k) {
        const fs::path path = dir / (stem + "__ob" + std::to_string(k + 1) + "__erased.p");
        ok = write_file(path, print_erased(erase_problem(obligation_problem(*p, r.residual[k]))));
        files.push_back(path);
      }
    }
    if (!o.obligations_only && p->conjecture && ok) {
      const fs::path path = dir / (stem + "__erased.p");
      ok = write_file(path, print_erased(erase_problem(*p, r)));
      files.push_back(path);
    }
  } catch (const std::exception& e) {
    std::cerr << o.file << ": error: " << e.what() << "\n";
    return kCheckFailed;
  }
  if (!ok) return kSystem;

  auto verdicts = discharge_all(cfg, files);
  SzsStatus overall = SzsStatus::Theorem;
  for (const fs::path& f : files) {  // report in pipeline order
    const SzsVerdict& v = verdicts.at(f);
    std::cout << "% SZS status " << szs_name(v.status) << " for " << f.filename().string() << " ("
              << v.wall_time << " s)\n";
    if (!v.diagnostic.empty()) std::cerr << f.filename().string() << ": " << v.diagnostic << "\n";
    if (overall == SzsStatus::Theorem && v.status != SzsStatus::Theorem) overall = v.status;
  }
  std::cout << "% SZS status " << szs_name(overall) << " for " << o.file << "\n";
  if (temporary) {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  if (overall == SzsStatus::Theorem) return kOk;
  return overall == SzsStatus::Error ? kSystem : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tools for the DTF form of TPTP"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string file, out, out_dir;
  bool print = false, shallow = false, deep = false, assume = false;
  SolveOptions solve;

  auto* parse = app.add_subcommand("parse", "Parse and report diagnostics");
  parse->add_option("files", files, "Input files")->required();
  parse->add_flag("--print", print, "Re-emit canonical DTF");

  auto* check = app.add_subcommand("check", "Type-check (shallow by default)");
  check->add_option("files", files, "Input files")->required();
  auto* shallow_flag = check->add_flag("--shallow", shallow, "Check the simply typed skeleton");
  check->add_flag("--deep", deep, "Dependent check with proof obligations")->excludes(shallow_flag);

  auto* obligations = app.add_subcommand("obligations", "Export residual obligations");
  obligations->add_option("file", file, "Input file")->required();
  obligations->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* translate = app.add_subcommand("translate", "Deep-check and erase to TH0");
  translate->add_option("file", file, "Input file")->required();
  translate->add_option("-o,--output", out, "Output file or directory (default: stdout)");
  translate->add_flag("--assume-obligations", assume, "Add residual obligations as axioms");

  auto* stats = app.add_subcommand("stats", "Syntactic measures");
  stats->add_option("files", files, "Input files")->required();

  auto* solvecmd = app.add_subcommand("solve", "Check, erase and prove with an external prover");
  solvecmd->add_option("file", solve.file, "Input file")->required();
  solvecmd->add_option("--prover", solve.prover, "Command template with {file} and {timeout}");
  solvecmd->add_option("--timeout", solve.timeout, "Seconds per prover run")
      ->check(CLI::PositiveNumber);
  solvecmd->add_option("--jobs", solve.jobs, "Parallel prover runs")->check(CLI::PositiveNumber);
  auto* ob_only = solvecmd->add_flag("--obligations-only", solve.obligations_only);
  solvecmd->add_flag("--conjecture-only", solve.conjecture_only)->excludes(ob_only);
  solvecmd->add_option("--work-dir", solve.work_dir, "Keep generated files here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*parse) return cmd_parse(files, print);
    if (*check) return cmd_check(files, deep);
    if (*obligations) return cmd_obligations(file, out_dir);
    if (*translate) return cmd_translate(file, out, assume);
    if (*stats) return cmd_stats(files);
    if (*solvecmd) return cmd_solve(solve);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSystem;
  }
  return kUsage;
}
