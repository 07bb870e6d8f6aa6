// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace shotad {

// Error taxonomy mirrors the CLI exit codes: config = 2, missing artifact = 3,
// backend = 4. Everything else surfaces as a generic failure.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class MissingArtifactError : public Error {
 public:
  MissingArtifactError(const std::string& stage, const std::string& msg)
      : Error(msg), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& msg, int attempts = 1)
      : Error(msg), attempts_(attempts) {}
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_ = 1;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

}  // namespace shotad
