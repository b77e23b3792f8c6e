// Copyright 2026 The mtlcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mtlcheck command line. Talks to the checker only through the C API.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "mtlcheck/mtlcheck.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitError = 3;

struct RunConfig {
  std::string engine = "cegar";
  int unwind = 1;
  int width = 8;
  uint64_t max_iter = 10000;
  uint64_t seed = 0;
  uint64_t time_limit_ms = 0;
  std::string stats_path;
  std::string witness_path;
  bool no_link_pruning = false;
  bool check_invariants = false;
  bool unwinding_assertions = false;
};

void add_common(CLI::App* app, RunConfig& rc) {
  app->add_option("--engine", rc.engine, "cegar, monolithic or explicit")
      ->check(CLI::IsMember({"cegar", "monolithic", "explicit"}));
  app->add_option("--unwind", rc.unwind, "loop unwinding depth")->check(CLI::PositiveNumber);
  app->add_option("--int-width", rc.width, "integer bit width")->check(CLI::Range(2, 32));
  app->add_option("--max-iter", rc.max_iter, "refinement iteration budget");
  app->add_option("--seed", rc.seed, "solver seed");
  app->add_option("--time-limit-ms", rc.time_limit_ms, "wall-clock budget per program (0: none)");
  app->add_flag("--no-link-pruning", rc.no_link_pruning, "keep links to writers after the reader");
  app->add_flag("--check-invariants", rc.check_invariants, "check progress and model invariants every iteration");
  app->add_flag("--unwinding-assertions", rc.unwinding_assertions, "assert instead of assume after the last copy");
}

struct Options {
  mtl_options* o = mtl_options_new();
  ~Options() { mtl_options_free(o); }
};

bool configure(const RunConfig& rc, Options& opts) {
  mtl_options* o = opts.o;
  if (mtl_options_set_engine(o, rc.engine.c_str()) || mtl_options_set_unwind(o, rc.unwind) ||
      mtl_options_set_int_width(o, rc.width) || mtl_options_set_max_iterations(o, rc.max_iter) ||
      mtl_options_set_seed(o, rc.seed) || mtl_options_set_link_pruning(o, !rc.no_link_pruning) ||
      mtl_options_set_check_invariants(o, rc.check_invariants) ||
      mtl_options_set_unwinding_assertions(o, rc.unwinding_assertions) ||
      mtl_options_set_time_limit_ms(o, rc.time_limit_ms)) {
    std::cerr << "error: " << mtl_last_error() << "\n";
    return false;
  }
  return true;
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return static_cast<bool>(out);
}

const char* verdict_text(mtl_verdict v) {
  switch (v) {
    case MTL_SAFE: return "SAFE";
    case MTL_UNSAFE: return "UNSAFE";
    default: return "UNKNOWN";
  }
}

int cmd_verify(const std::string& file, const RunConfig& rc) {
  Options opts;
  if (!configure(rc, opts)) return kExitError;
  mtl_result* r = nullptr;
  if (mtl_verify_file(file.c_str(), opts.o, &r) != MTL_OK) {
    std::cerr << file << ": " << mtl_last_error() << "\n";
    return kExitError;
  }
  mtl_verdict v = mtl_result_verdict(r);
  std::cout << verdict_text(v) << "\n";
  int code = v == MTL_SAFE ? 0 : v == MTL_UNSAFE ? 1 : 2;
  if (v == MTL_UNKNOWN) std::cerr << "reason: " << mtl_result_unknown_reason(r) << "\n";
  std::string failures = mtl_result_invariant_failures(r);
  if (!failures.empty()) {
    std::cerr << "invariant failures:\n" << failures;
    code = kExitError;
  }
  if (!rc.stats_path.empty() && !write_text(rc.stats_path, mtl_result_stats_json(r))) {
    std::cerr << "cannot write " << rc.stats_path << "\n";
    code = kExitError;
  }
  if (!rc.witness_path.empty() && v == MTL_UNSAFE && !write_text(rc.witness_path, mtl_result_witness_json(r))) {
    std::cerr << "cannot write " << rc.witness_path << "\n";
    code = kExitError;
  }
  mtl_result_free(r);
  return code;
}

// Clause count from a DIMACS header.
long clause_count(const char* dimacs) {
  std::istringstream in(dimacs);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("p cnf", 0) == 0) {
      std::istringstream h(line.substr(5));
      long v = 0, c = 0;
      h >> v >> c;
      return c;
    }
  return -1;
}

int cmd_corpus(std::string dir, const RunConfig& rc) {
  if (const char* env = std::getenv("MTL_CORPUS"); env && *env) dir = env;
  if (!fs::is_directory(dir)) {
    std::cerr << "not a directory: " << dir << "\n";
    return kExitError;
  }
  Options opts;
  if (!configure(rc, opts)) return kExitError;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".mtl") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  nlohmann::ordered_json agg;
  agg["schema_version"] = 1;
  agg["engine"] = rc.engine;
  agg["entries"] = nlohmann::ordered_json::array();
  std::vector<std::string> mismatches;
  bool error = false;
  std::printf("%-32s %-8s %-8s %10s %6s %8s\n", "file", "expected", "verdict", "time_ms", "iters", "ratio");
  for (const auto& f : files) {
    fs::path sidecar = f;
    sidecar.replace_extension(".expected");
    std::ifstream sc(sidecar);
    std::string expected;
    if (!sc || !(sc >> expected) || (expected != "SAFE" && expected != "UNSAFE")) {
      std::cerr << f.filename().string() << ": malformed or missing sidecar " << sidecar.filename().string() << "\n";
      error = true;
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    mtl_result* r = nullptr;
    if (mtl_verify_file(f.string().c_str(), opts.o, &r) != MTL_OK) {
      std::cerr << f.filename().string() << ": " << mtl_last_error() << "\n";
      error = true;
      continue;
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    auto stats = nlohmann::json::parse(mtl_result_stats_json(r));
    std::string verdict = verdict_text(mtl_result_verdict(r));
    std::string failures = mtl_result_invariant_failures(r);
    mtl_result_free(r);

    // Abstraction plus refinements against the monolithic encoding.
    double ratio = 0;
    if (rc.engine != "explicit") {
      std::ifstream in(f);
      std::stringstream src;
      src << in.rdbuf();
      char* dimacs = nullptr;
      char* symbols = nullptr;
      if (mtl_export_dimacs(src.str().c_str(), opts.o, 1, &dimacs, &symbols) == MTL_OK) {
        long mono = clause_count(dimacs);
        double ours = stats["clauses_initial"].get<double>() + stats["clauses_refinement"].get<double>();
        if (mono > 0) ratio = ours / static_cast<double>(mono);
        mtl_string_free(dimacs);
        mtl_string_free(symbols);
      }
    }
    std::printf("%-32s %-8s %-8s %10.1f %6llu %8.3f\n", f.filename().string().c_str(), expected.c_str(),
                verdict.c_str(), ms, static_cast<unsigned long long>(stats["iterations"].get<uint64_t>()), ratio);
    if (verdict != expected) mismatches.push_back(f.filename().string());
    if (!failures.empty()) {
      std::cerr << f.filename().string() << ": invariant failures:\n" << failures;
      error = true;
    }
    nlohmann::ordered_json e;
    e["file"] = f.filename().string();
    e["expected"] = expected;
    e["verdict"] = verdict;
    e["time_ms"] = ms;
    e["clause_ratio"] = ratio;
    e["stats"] = stats;
    agg["entries"].push_back(e);
  }
  agg["mismatches"] = mismatches;
  if (!rc.stats_path.empty() && !write_text(rc.stats_path, agg.dump(2))) error = true;
  for (const auto& m : mismatches) std::cerr << "mismatch: " << m << "\n";
  std::printf("%zu files, %zu mismatches\n", files.size(), mismatches.size());
  if (error) return kExitError;
  return mismatches.empty() ? 0 : 1;
}

int cmd_dimacs(const std::string& file, const RunConfig& rc, bool scheduling, const std::string& out,
               const std::string& symbols_out) {
  Options opts;
  if (!configure(rc, opts)) return kExitError;
  std::ifstream in(file);
  if (!in) {
    std::cerr << "cannot read " << file << "\n";
    return kExitError;
  }
  std::stringstream src;
  src << in.rdbuf();
  char* dimacs = nullptr;
  char* symbols = nullptr;
  if (mtl_export_dimacs(src.str().c_str(), opts.o, scheduling, &dimacs, &symbols) != MTL_OK) {
    std::cerr << file << ": " << mtl_last_error() << "\n";
    return kExitError;
  }
  bool ok = true;
  if (out.empty())
    std::cout << dimacs;
  else
    ok = write_text(out, dimacs);
  if (!symbols_out.empty()) ok = write_text(symbols_out, symbols) && ok;
  mtl_string_free(dimacs);
  mtl_string_free(symbols);
  return ok ? 0 : kExitError;
}

int cmd_eog(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << "cannot read " << file << "\n";
    return kExitError;
  }
  std::stringstream src;
  src << in.rdbuf();
  int closure_infeasible = 0, feasible = 0;
  char* report = nullptr;
  if (mtl_check_eog(src.str().c_str(), &closure_infeasible, &feasible, &report) != MTL_OK) {
    std::cerr << file << ": " << mtl_last_error() << "\n";
    return kExitError;
  }
  std::cout << report << "\n";
  mtl_string_free(report);
  return feasible ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mtlcheck: bounded model checker for MTL programs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mtl_version()));

  RunConfig rc;
  std::string file, dir, out, symbols_out;
  bool scheduling = false;

  auto* verify = app.add_subcommand("verify", "verify one .mtl file");
  verify->add_option("file", file, "program")->required();
  add_common(verify, rc);
  verify->add_option("--stats", rc.stats_path, "write statistics JSON here");
  verify->add_option("--witness", rc.witness_path, "write the witness schedule JSON here");

  auto* corpus = app.add_subcommand("corpus", "run every .mtl file of a directory against its .expected sidecar");
  corpus->add_option("dir", dir, "corpus directory (MTL_CORPUS overrides)");
  add_common(corpus, rc);
  corpus->add_option("--stats", rc.stats_path, "write the aggregate JSON here");

  auto* dimacs = app.add_subcommand("dimacs", "export the CNF encoding");
  dimacs->add_option("file", file, "program")->required();
  add_common(dimacs, rc);
  dimacs->add_flag("--scheduling", scheduling, "include the scheduling constraint");
  dimacs->add_option("-o,--output", out, "DIMACS output path (default stdout)");
  dimacs->add_option("--symbols", symbols_out, "symbol table JSON output path");

  auto* eog = app.add_subcommand("eog", "validate an event order graph JSON file");
  eog->add_option("file", file, "EOG JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }
  if (*verify) return cmd_verify(file, rc);
  if (*corpus) {
    if (dir.empty() && !std::getenv("MTL_CORPUS")) {
      std::cerr << "corpus: no directory given and MTL_CORPUS unset\n";
      return kExitError;
    }
    return cmd_corpus(dir, rc);
  }
  if (*dimacs) return cmd_dimacs(file, rc, scheduling, out, symbols_out);
  if (*eog) return cmd_eog(file);
  return kExitError;
}
