// Copyright 2026 The dpbayes Authors
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

#ifndef DPBAYES_ERRORS_H_
#define DPBAYES_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpbayes {

// Base class for every error raised by the library. The C API maps the
// concrete subclasses onto status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A well-formed request that has no mathematical answer: a parameter outside
// the family's parameter space, a posterior with empty support, a metric the
// family has no smoothness result for.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input text (datasets, query files, parameter strings).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpbayes

#endif  // DPBAYES_ERRORS_H_
