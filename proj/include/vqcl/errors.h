// Copyright 2026 The VQCL Authors.
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

#ifndef VQCL_ERRORS_H_
#define VQCL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace vqcl {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested size exceeds what the simulator (or exact enumeration) supports.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Argument outside its mathematical domain (non-finite angle, bad label...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Vector or matrix dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

// Input that cannot be turned into a valid state, e.g. an all-zero vector.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqcl

#endif  // VQCL_ERRORS_H_
