// Copyright 2026 The cqx Authors.
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

#ifndef CQX_ERROR_HPP_
#define CQX_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace cqx {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Input file exists but its contents do not follow the expected format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Model file has the wrong version tag or is truncated/corrupt.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Caller violated an operation's precondition (empty input, bad range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace cqx

#endif  // CQX_ERROR_HPP_
