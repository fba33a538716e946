#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kcore {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// mu/psi_{k-1}(mu) = lambda has no root because lambda does not exceed the threshold.
class NoSupercriticalRoot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The fixed-point equation does not have the requested root structure.
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection sampling of a simple graph gave up.
class RejectionError : public std::runtime_error {
 public:
  RejectionError(const std::string& what, std::size_t attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  std::size_t attempts() const noexcept { return attempts_; }

 private:
  std::size_t attempts_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An error raised inside one Monte Carlo replicate, tagged with its index.
class RepError : public std::runtime_error {
 public:
  RepError(std::size_t rep, const std::string& what)
      : std::runtime_error("rep " + std::to_string(rep) + ": " + what), rep_(rep) {}
  std::size_t rep() const noexcept { return rep_; }

 private:
  std::size_t rep_;
};

}  // namespace kcore
