// Copyright 2026 The lambda-clock authors
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

namespace lambdaclock {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape / input validation.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class TooFewSamples : public Error {
 public:
  using Error::Error;
};

// Classical statistical models.
class NonNormalizedDensity : public Error {
 public:
  using Error::Error;
};
class DegenerateSupport : public Error {
 public:
  using Error::Error;
};
class SingularMetric : public Error {
 public:
  using Error::Error;
};

// Quantum states and operators.
class NotHermitian : public Error {
 public:
  using Error::Error;
};
class TraceNotPreserved : public Error {
 public:
  using Error::Error;
};
class UndersampledTrajectory : public Error {
 public:
  using Error::Error;
};

// Dynamics.
class InvalidParameterization : public Error {
 public:
  using Error::Error;
};
class DegenerateGenerator : public Error {
 public:
  using Error::Error;
};

// Clocks.
class NonMonotoneSamples : public Error {
 public:
  using Error::Error;
};
class OutOfCalibrationRange : public Error {
 public:
  using Error::Error;
};
class InvalidPopulation : public Error {
 public:
  using Error::Error;
};
class TooFewTicks : public Error {
 public:
  using Error::Error;
};

// Records.
class SupportViolation : public Error {
 public:
  explicit SupportViolation(const std::string& msg, long index = -1)
      : Error(msg), index_(index) {}
  /// Index of the offending record pair, or -1 when not applicable.
  long index() const { return index_; }

 private:
  long index_;
};

// Scenario runner.
class ConfigError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lambdaclock
