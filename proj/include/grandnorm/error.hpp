// Copyright 2026 The grandnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef GRANDNORM_ERROR_HPP
#define GRANDNORM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grandnorm {

/// Malformed input file. Carries the 1-based line number of the offending
/// record (0 when the problem is not tied to one line).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

inline void require(bool ok, const char* what) {
  if (!ok) fail(what);
}

}  // namespace detail
}  // namespace grandnorm

#endif  // GRANDNORM_ERROR_HPP
