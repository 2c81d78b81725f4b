// Copyright 2026 The onebit Authors. All Rights Reserved.
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

#ifndef ONEBIT_ERROR_HPP_
#define ONEBIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace onebit {

// Precondition violations on public entry points.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A matrix outside the open box |M_ij| < alpha was handed to a barrier
// evaluation.
class InfeasiblePoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Error bound requested with a non-positive curvature constant.
class BoundUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Every cross-validation fold had an empty training or holdout side.
class CvDegenerate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace onebit

#endif  // ONEBIT_ERROR_HPP_
