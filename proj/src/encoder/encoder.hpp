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

#pragma once

#include <string>
#include <vector>

#include "encoder/bitblast.hpp"
#include "frontend/program.hpp"

namespace mtl::enc {

struct EncodeOptions {
  int width = 8;
  bool link_pruning = true;  // drop writers that program order puts after the reader
};

struct EventEnc {
  std::string name;  // SSA name such as x4
  Lit guard;         // truth() for unconditional events
  Bits value;
  std::vector<EventId> candidates;  // reads: writers the read may observe
  std::vector<uint32_t> links;      // reads: indices into links
};

// Read-write link s_{v,i,j}: read v_i observes write v_j.
struct Link {
  SharedId var = 0;
  EventId writer = 0;
  EventId reader = 0;
  Lit sel;
  std::string name;
};

struct StmtEnc {
  Lit guard;
  Bits value;                 // assigned / written value, empty otherwise
  Lit violation = sat::kUndefLit;  // asserts: guard && !cond
};

struct EncodedProgram {
  const NormalizedProgram* program = nullptr;
  EncodeOptions options;
  ProgramOrder po;
  Formula formula;
  std::vector<EventEnc> events;
  std::vector<Link> links;
  std::vector<std::vector<StmtEnc>> stmts;  // [thread][index]
  std::vector<Lit> violations;
  bool has_scheduling = false;

  // Abstraction clause count: phi_init, rho, zeta and phi_err.
  std::size_t abstraction_clauses() const;
  // JSON object mapping DIMACS variable numbers to symbol names.
  std::string symbols_json() const;
};

// Names every event, computes program order and the candidate writers of
// each read. No clauses beyond the constant are emitted.
EncodedProgram ssa_transform(const NormalizedProgram& p, const EncodeOptions& options = {});

// phi_init, rho and zeta.
void encode_abstraction(EncodedProgram& ep);

// phi_err: one clause over the assert violation literals. A program without
// asserts gets the empty clause.
void encode_error(EncodedProgram& ep);

// xi: event clocks and the exact order requirements (monolithic baseline).
void encode_scheduling(EncodedProgram& ep);

// ssa_transform + encode_abstraction + encode_error.
EncodedProgram encode(const NormalizedProgram& p, const EncodeOptions& options = {});

}  // namespace mtl::enc
