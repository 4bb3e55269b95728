// Copyright 2026 The Conjunction Authors
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

#ifndef CONJUNCTION_ERROR_HPP_
#define CONJUNCTION_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace conjunction {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Relative velocity too small to define an encounter plane.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// Projected 2x2 covariance is (numerically) singular.
class DegenerateCovariance : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double estimate,
                    double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

// The Wald variance is undefined when the observed position is the origin.
class UndefinedVariance : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class EmptyCatalog : public Error {
 public:
  using Error::Error;
};

class PropertyViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace conjunction

#endif  // CONJUNCTION_ERROR_HPP_
