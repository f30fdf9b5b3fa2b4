/*
 * Copyright 2026 The rounds-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace rounds {

/// Base of every error raised by the library. Precondition violations on
/// plain arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RoundLimitExceeded : public Error {
 public:
  using Error::Error;
};

class MalformedQuery : public Error {
 public:
  using Error::Error;
};

class InconsistentQuery : public Error {
 public:
  using Error::Error;
};

class AlgorithmIncorrect : public Error {
 public:
  using Error::Error;
};

class MalformedAllocation : public Error {
 public:
  using Error::Error;
};

class ProtocolNotPrimitive : public Error {
 public:
  using Error::Error;
};

class NotProportional : public Error {
 public:
  using Error::Error;
};

class SearchSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

class InfeasibleExact : public Error {
 public:
  using Error::Error;
};

class IoFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace rounds
