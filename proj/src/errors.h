// Copyright 2026 The polyvul Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLYVUL_ERRORS_H_
#define POLYVUL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace polyvul {

// Bad input: unknown names, mismatched dimensions, malformed files, guards
// exceeded. Maps to exit code 2 in the CLI.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Failures that are not the caller's fault (I/O, numerical breakdown).
class RuntimeError : public std::runtime_error {
 public:
  explicit RuntimeError(const std::string& what) : std::runtime_error(what) {}
};

#define POLYVUL_CHECK_ARG(cond, msg)              \
  do {                                            \
    if (!(cond)) throw ::polyvul::ValidationError(msg); \
  } while (0)

}  // namespace polyvul

#endif  // POLYVUL_ERRORS_H_
