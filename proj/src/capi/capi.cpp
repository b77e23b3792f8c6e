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

#include "mtlcheck/mtlcheck.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "driver/driver.hpp"
#include "exactorder/exactorder.hpp"

struct mtl_options {
  mtl::driver::Config config;
};

struct mtl_result {
  mtl::driver::Result result;
  std::string stats;
  std::string witness;
  std::string failures;
};

namespace {

thread_local std::string g_last_error;

mtl_status fail(mtl_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs `f`, mapping exceptions to status codes.
template <typename F>
mtl_status guarded(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const mtl::FrontendError& e) {
    return fail(MTL_ERR_INPUT, e.what());
  } catch (const mtl::InternalError& e) {
    return fail(MTL_ERR_INTERNAL, std::string("internal error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return fail(MTL_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MTL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MTL_ERR_INTERNAL, e.what());
  }
}

mtl::driver::Config config_of(const mtl_options* o) { return o ? o->config : mtl::driver::Config{}; }

bool read_file(const char* path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

extern "C" {

const char* mtl_version(void) { return "1.0.0"; }

const char* mtl_last_error(void) { return g_last_error.c_str(); }

mtl_options* mtl_options_new(void) { return new (std::nothrow) mtl_options(); }

void mtl_options_free(mtl_options* o) { delete o; }

mtl_status mtl_options_set_engine(mtl_options* o, const char* engine) {
  if (!o || !engine) return fail(MTL_ERR_ARGUMENT, "null argument");
  if (!mtl::driver::parse_engine(engine, o->config.engine))
    return fail(MTL_ERR_ARGUMENT, std::string("unknown engine '") + engine + "'");
  return MTL_OK;
}

mtl_status mtl_options_set_unwind(mtl_options* o, int depth) {
  if (!o) return fail(MTL_ERR_ARGUMENT, "null options");
  if (depth < 1) return fail(MTL_ERR_ARGUMENT, "unwind depth must be at least 1");
  o->config.unwind = depth;
  return MTL_OK;
}

mtl_status mtl_options_set_unwinding_assertions(mtl_options* o, int enabled) {
  if (!o) return fail(MTL_ERR_ARGUMENT, "null options");
  o->config.unwinding_assertions = enabled != 0;
  return MTL_OK;
}

mtl_status mtl_options_set_int_width(mtl_options* o, int width) {
  if (!o) return fail(MTL_ERR_ARGUMENT, "null options");
  if (width < 2 || width > 32) return fail(MTL_ERR_ARGUMENT, "integer width must be in [2, 32]");
  o->config.width = width;
  return MTL_OK;
}

mtl_status mtl_options_set_max_iterations(mtl_options* o, uint64_t n) {
  if (!o) return fail(MTL_ERR_ARGUMENT, "null options");
  o->config.max_iterations = n;
  return MTL_OK;
}

mtl_status mtl_options_set_seed(mtl_options* o, uint64_t seed) {
  if (!o) return fail(MTL_ERR_ARGUMENT, "null options");
  o->config.seed = seed;
  return MTL_OK;
}

mtl_status mtl_options_set_link_pruning(mtl_options* o, int enabled) {
  if (!o) return fail(MTL_ERR_ARGUMENT, "null options");
  o->config.link_pruning = enabled != 0;
  return MTL_OK;
}

mtl_status mtl_options_set_check_invariants(mtl_options* o, int enabled) {
  if (!o) return fail(MTL_ERR_ARGUMENT, "null options");
  o->config.check_invariants = enabled != 0;
  return MTL_OK;
}

mtl_status mtl_options_set_time_limit_ms(mtl_options* o, uint64_t ms) {
  if (!o) return fail(MTL_ERR_ARGUMENT, "null options");
  o->config.time_limit_ms = ms;
  return MTL_OK;
}

mtl_status mtl_verify_source(const char* source, const mtl_options* options, mtl_result** out) {
  if (!source || !out) return fail(MTL_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<mtl_result>();
    r->result = mtl::driver::verify_source(source, config_of(options));
    r->stats = r->result.stats.to_json();
    if (r->result.verdict == mtl::driver::Verdict::Unsafe) r->witness = mtl::oracle::to_json(r->result.witness);
    for (const auto& f : r->result.invariant_failures) r->failures += f + "\n";
    *out = r.release();
    return MTL_OK;
  });
}

mtl_status mtl_verify_file(const char* path, const mtl_options* options, mtl_result** out) {
  if (!path || !out) return fail(MTL_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  std::string text;
  if (!read_file(path, text)) return fail(MTL_ERR_IO, std::string("cannot read '") + path + "'");
  return mtl_verify_source(text.c_str(), options, out);
}

mtl_verdict mtl_result_verdict(const mtl_result* r) {
  if (!r) return MTL_UNKNOWN;
  switch (r->result.verdict) {
    case mtl::driver::Verdict::Safe: return MTL_SAFE;
    case mtl::driver::Verdict::Unsafe: return MTL_UNSAFE;
    case mtl::driver::Verdict::Unknown: return MTL_UNKNOWN;
  }
  return MTL_UNKNOWN;
}

uint64_t mtl_result_iterations(const mtl_result* r) { return r ? r->result.stats.iterations : 0; }

uint64_t mtl_result_fallback_invocations(const mtl_result* r) {
  return r ? r->result.stats.fallback_invocations : 0;
}

const char* mtl_result_stats_json(const mtl_result* r) { return r ? r->stats.c_str() : ""; }

const char* mtl_result_witness_json(const mtl_result* r) { return r ? r->witness.c_str() : ""; }

const char* mtl_result_unknown_reason(const mtl_result* r) { return r ? r->result.unknown_reason.c_str() : ""; }

const char* mtl_result_invariant_failures(const mtl_result* r) { return r ? r->failures.c_str() : ""; }

void mtl_result_free(mtl_result* r) { delete r; }

mtl_status mtl_export_dimacs(const char* source, const mtl_options* options, int with_scheduling, char** dimacs,
                             char** symbols) {
  if (!source || !dimacs || !symbols) return fail(MTL_ERR_ARGUMENT, "null argument");
  *dimacs = *symbols = nullptr;
  return guarded([&] {
    mtl::driver::Config cfg = config_of(options);
    auto prog = mtl::driver::load_program(source, cfg);
    mtl::enc::EncodeOptions eo;
    eo.width = cfg.width;
    eo.link_pruning = cfg.link_pruning;
    mtl::enc::EncodedProgram ep = mtl::enc::encode(*prog, eo);
    if (with_scheduling) mtl::enc::encode_scheduling(ep);
    std::vector<std::string> comments;
    for (int c = 0; c < mtl::enc::kComponentCount; ++c) {
      auto comp = static_cast<mtl::enc::Component>(c);
      comments.push_back(std::string(mtl::enc::component_name(comp)) + " clauses: " +
                         std::to_string(ep.formula.count(comp)));
    }
    *dimacs = dup(mtl::sat::write_dimacs(ep.formula.to_cnf(), comments));
    *symbols = dup(ep.symbols_json());
    return MTL_OK;
  });
}

mtl_status mtl_check_eog(const char* eog_json, int* closure_infeasible, int* exact_feasible, char** report) {
  if (!eog_json || !closure_infeasible || !exact_feasible || !report) return fail(MTL_ERR_ARGUMENT, "null argument");
  *report = nullptr;
  return guarded([&] {
    mtl::eog::Eog g = mtl::eog::eog_from_json(eog_json);
    mtl::eog::ClosureOutcome out = mtl::eog::closure(g);
    mtl::exact::ExactResult ex = mtl::exact::validate_exact(g);
    *closure_infeasible = out.verdict == mtl::eog::ClosureVerdict::Infeasible;
    *exact_feasible = ex.feasible;
    nlohmann::ordered_json j;
    j["closure"] = *closure_infeasible ? "infeasible" : "not-sure";
    j["exact"] = ex.feasible ? "feasible" : "infeasible";
    auto clause_json = [&](const mtl::sat::Clause& c) {
      nlohmann::ordered_json a = nlohmann::ordered_json::array();
      for (auto l : c) a.push_back((l.negative() ? "!" : "") + g.lit_name(l.negative() ? ~l : l));
      return a;
    };
    j["kappa"] = nlohmann::ordered_json::array();
    if (*closure_infeasible)
      for (const auto& c : mtl::eog::refine(out)) j["kappa"].push_back(clause_json(c));
    if (ex.feasible) {
      j["order"] = nlohmann::ordered_json::array();
      for (auto v : ex.order) j["order"].push_back(g.events[v].name);
    } else {
      j["core_clause"] = clause_json(mtl::exact::refine_from_core(ex.core));
    }
    *report = dup(j.dump(2));
    return MTL_OK;
  });
}

void mtl_string_free(char* s) { std::free(s); }

}  // extern "C"
