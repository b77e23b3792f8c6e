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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "frontend/program.hpp"

namespace mtl::testing {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline NormalizedProgram load(const std::string& src, int depth = 1) {
  UnwindOptions uo;
  uo.depth = depth;
  return normalize(inline_and_unwind(parse(src), uo));
}

struct CorpusEntry {
  std::string name;
  std::string source;
  std::string expected;
};

inline std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  for (const auto& e : std::filesystem::directory_iterator(MTL_CORPUS_DIR)) {
    if (e.path().extension() != ".mtl") continue;
    auto side = e.path();
    side.replace_extension(".expected");
    std::string exp = read_file(side);
    exp.erase(exp.find_last_not_of(" \n\r\t") + 1);
    out.push_back({e.path().stem().string(), read_file(e.path()), exp});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

// Event id by SSA name, or kNone.
inline EventId event_named(const NormalizedProgram& p, const std::string& name) {
  for (EventId e = 0; e < p.events.size(); ++e)
    if (p.event_name(e) == name) return e;
  return kNone;
}

}  // namespace mtl::testing
