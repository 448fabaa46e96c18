// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vmh {

enum class ErrorCode {
  InvalidArgument,
  Io,
  MalformedRecord,
  DuplicateId,
  EmptyText,
  InvariantViolation,
  NoDifference,
  NoQuantifier,
  GenerationFailed,
  ValidationFailed,
  ClientError,
  MissingVector,
  ProviderError,
  DimensionMismatch,
  ZeroVector,
  DegenerateInput,
  MissingCovariance,
  TooFewSamples,
  SingularAfterRegularization,
  EmptyInput,
  FormatError,
  ScorerError,
  RangeViolation,
  IncompatibleDumps,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vmh
