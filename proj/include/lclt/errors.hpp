// Copyright 2026 The lcltlab Authors
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

namespace lclt {

// Base of every error raised by the library. Callers that only care about
// "something in lclt failed" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Non-integral value pushed into an integer-lattice distribution, or two
// distributions of different kinds merged.
class KindMismatchError : public Error {
 public:
  using Error::Error;
};

class DegenerateDistributionError : public Error {
 public:
  using Error::Error;
};

// Bin width b is not a multiple of the detected span.
class SpanDivisibilityError : public Error {
 public:
  using Error::Error;
};

// Motif larger than the isomorphism tables support.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// A graph component exceeded the configured cap for exact independence
// number computation.
class SupercriticalComponentError : public Error {
 public:
  using Error::Error;
};

class SamplingFailure : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// k-NN query on a sample with at most k points: the k-th neighbour
// distance is infinite.
class InfiniteDistanceError : public Error {
 public:
  using Error::Error;
};

class ResourceCapError : public Error {
 public:
  using Error::Error;
};

}  // namespace lclt
