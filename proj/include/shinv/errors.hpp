#pragma once

#include <stdexcept>
#include <string>

namespace shinv {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite input or an argument outside the mathematical domain.
class DomainError : public Error {
public:
  using Error::Error;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// Missing or malformed parameter record.
class SchemaError : public Error {
public:
  using Error::Error;
};

class UsageError : public Error {
public:
  using Error::Error;
};

class SamplingError : public Error {
public:
  using Error::Error;
};

/// Parameter point outside a family's non-singularity region.
class InvalidParameters : public Error {
public:
  InvalidParameters(std::string family, std::string inequality)
      : Error("invalid parameters for " + family + ": violates " + inequality),
        family_(std::move(family)), inequality_(std::move(inequality)) {}

  const std::string &family() const noexcept { return family_; }
  const std::string &inequality() const noexcept { return inequality_; }

private:
  std::string family_;
  std::string inequality_;
};

/// Evaluation too close to (or at) a zero of a declared denominator.
class PoleError : public Error {
public:
  PoleError(double root, std::string denominator)
      : Error("pole of " + denominator + " at x = " + std::to_string(root)),
        root_(root), denominator_(std::move(denominator)) {}

  double root() const noexcept { return root_; }
  const std::string &denominator() const noexcept { return denominator_; }

private:
  double root_;
  std::string denominator_;
};

} // namespace shinv
