/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <stdexcept>
#include <string>

namespace qitelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Mismatched qubit counts or matrix sizes.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A linear system or overlap matrix is too ill-conditioned to solve.
class ConditioningError : public Error {
public:
  using Error::Error;
};

/// Krylov stabilization left fewer vectors than the solver needs.
class StabilizationError : public Error {
public:
  using Error::Error;
};

/// An iterative fit exhausted its start schedule without a physical root.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Readout calibration produced flip rates the corrected estimator cannot use.
class CalibrationError : public Error {
public:
  using Error::Error;
};

/// Failure while reading an H2 coefficient file. `kind` distinguishes causes.
class CoefficientFileError : public Error {
public:
  enum class Kind {
    Io,
    EmptyTable,
    MissingHeader,
    ColumnCount,
    MalformedNumber,
    NonMonotone,
    MissingBondLength,
  };

  CoefficientFileError(Kind kind, const std::string &what)
      : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Experiment configuration problem, carrying the offending field and line.
class ConfigError : public Error {
public:
  ConfigError(const std::string &field, int line, const std::string &message)
      : Error(format(field, line, message)), field_(field), line_(line),
        message_(message) {}

  const std::string &field() const noexcept { return field_; }
  const std::string &message() const noexcept { return message_; }
  int line() const noexcept { return line_; }

private:
  static std::string format(const std::string &field, int line,
                            const std::string &message) {
    std::string out = "config";
    if (line > 0)
      out += ":" + std::to_string(line);
    if (!field.empty())
      out += ": field '" + field + "'";
    return out + ": " + message;
  }

  std::string field_;
  int line_;
  std::string message_;
};

} // namespace qitelab
