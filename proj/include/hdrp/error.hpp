/*
 * Copyright 2026 The hdrp-model Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HDRP_ERROR_HPP
#define HDRP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdrp
{

// Every failure raised by the library derives from Error. The C API maps the
// kind() of the caught exception onto its status codes.
enum class ErrorKind
{
  Domain,
  Validation,
  Contract,
  Format,
  Unsupported,
  Io,
  Fit,
  Convergence,
  Singular,
  InvalidArgument,
};

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// Argument outside the mathematical domain of a function (e.g. srgb_decode(1.5)).
class DomainError : public Error
{
public:
  explicit DomainError(const std::string &what) : Error(ErrorKind::Domain, what) {}
};

// Type invariant violated at construction or on entry to an operation.
class ValidationError : public Error
{
public:
  explicit ValidationError(const std::string &what) : Error(ErrorKind::Validation, what) {}
};

// A collaborator broke its output contract (e.g. a tonemap returning values > 1).
class ContractError : public Error
{
public:
  explicit ContractError(const std::string &what) : Error(ErrorKind::Contract, what) {}
};

// Malformed text input. line/column are 1-based; 0 means "not applicable".
class FormatError : public Error
{
public:
  FormatError(const std::string &what, std::size_t line = 0, std::size_t column = 0)
    : Error(ErrorKind::Format, decorate(what, line, column)), line_(line), column_(column)
  {
  }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

protected:
  FormatError(ErrorKind kind, const std::string &what, std::size_t line, std::size_t column)
    : Error(kind, decorate(what, line, column)), line_(line), column_(column)
  {
  }

private:
  static std::string decorate(const std::string &what, std::size_t line, std::size_t column)
  {
    if (line == 0)
      return what;
    std::string s = "line " + std::to_string(line);
    if (column != 0)
      s += ", column " + std::to_string(column);
    return s + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

class UnsupportedError : public FormatError
{
public:
  explicit UnsupportedError(const std::string &what, std::size_t line = 0)
    : FormatError(ErrorKind::Unsupported, what, line, 0)
  {
  }
};

class IoError : public Error
{
public:
  explicit IoError(const std::string &what) : Error(ErrorKind::Io, what) {}
};

// Insufficient or degenerate data for a fit.
class FitError : public Error
{
public:
  explicit FitError(const std::string &what) : Error(ErrorKind::Fit, what) {}
};

class ConvergenceError : public Error
{
public:
  explicit ConvergenceError(const std::string &what) : Error(ErrorKind::Convergence, what) {}
};

class SingularMatrixError : public Error
{
public:
  SingularMatrixError(const std::string &what, double condition)
    : Error(ErrorKind::Singular, what), condition_(condition)
  {
  }
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

class InvalidArgument : public Error
{
public:
  explicit InvalidArgument(const std::string &what) : Error(ErrorKind::InvalidArgument, what) {}
};

} // namespace hdrp

#endif // HDRP_ERROR_HPP
