// Copyright (c) 2026 The finr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
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

namespace finr {

// Base of every library error. The CLI maps InvalidArgument to exit code 2 and
// everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A requested size does not fit the documented limits (or overflows).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf produced during a forward pass or training.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::int64_t iteration = -1)
      : Error(what), iteration_(iteration) {}
  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

enum class ImageErrorCode { io = 1, unsupported_format = 2, corrupt = 3 };

class ImageError : public Error {
 public:
  ImageError(ImageErrorCode code, const std::string& what) : Error(what), code_(code) {}
  ImageErrorCode code() const { return code_; }

 private:
  ImageErrorCode code_;
};

}  // namespace finr
