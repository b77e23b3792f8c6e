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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mtl {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

std::string to_string(const SourceLoc& loc);

// Raised for malformed input programs (syntax, scoping, handle misuse).
class FrontendError : public std::runtime_error {
 public:
  FrontendError(SourceLoc loc, const std::string& what);
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

// Raised when an internal contract is breached (encoder bug, misuse of an
// API on the wrong outcome). Distinct from input errors so the CLI can map it
// to its own exit code.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Two's complement wraparound of `v` to `width` bits, returned sign-extended.
inline int64_t wrap_int(int64_t v, int width) {
  if (width >= 64) return v;
  const uint64_t mask = (uint64_t{1} << width) - 1;
  uint64_t u = static_cast<uint64_t>(v) & mask;
  if (u & (uint64_t{1} << (width - 1))) u |= ~mask;
  return static_cast<int64_t>(u);
}

}  // namespace mtl
