// Copyright 2026 The kvote Authors.
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

#ifndef KVOTE_ERROR_HPP
#define KVOTE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kvote {

/// Bad user input: malformed configs, out-of-range arguments, impossible
/// requests. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Failure while computing: numerical breakdown, unreadable files, missing
/// cache stages. Maps to CLI exit code 2.
class RuntimeFailure : public std::runtime_error {
 public:
  explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kvote

#endif  // KVOTE_ERROR_HPP
