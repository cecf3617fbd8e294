// Copyright 2026 The sol Authors.
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

#ifndef SOL_ERRORS_HPP_
#define SOL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sol {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or domain violation in caller-supplied input.
class InputError : public Error {
 public:
  using Error::Error;
};

// An exhaustive computation or a configured cap would be exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A runtime invariant of the game protocol failed (smoothness certificate,
// hint support, x_t not in Z_t).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sol

#endif  // SOL_ERRORS_HPP_
