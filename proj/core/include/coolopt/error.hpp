// Copyright 2026 The coolopt Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace coolopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value violates a documented precondition (range, finiteness, name).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input that must be Hermitian is not; carries max|a - a^dagger|.
class NotHermitianError : public Error {
 public:
  NotHermitianError(const std::string& what, double defect)
      : Error(what + " (max|a - a^H| = " + std::to_string(defect) + ")"),
        defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// The Lindbladian kernel is not one-dimensional.
class DegenerateKernelError : public Error {
 public:
  DegenerateKernelError(const std::string& what, long dimension)
      : Error(what), dimension_(dimension) {}
  long dimension() const noexcept { return dimension_; }

 private:
  long dimension_;
};

/// A numerical routine produced non-finite values or failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace coolopt
