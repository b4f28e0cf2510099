// Copyright 2026 The persmove Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace persmove {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed, unsorted or otherwise unusable input data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but too small for the requested estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied parameter violates its precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace persmove
