#pragma once

// Error types shared by every gplab module. Each failure mode named by the
// public API has its own exception class so callers (and the CLI exit-code
// mapping) can dispatch on type.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gplab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The enclosure of a value still straddles an integer at the maximal
/// precision. `path` locates the offending subexpression when raised from a
/// tree evaluator (child indices from the root); `step` is set by orbit
/// iteration.
class IndeterminateFloor : public Error {
 public:
  explicit IndeterminateFloor(const std::string& what, unsigned bits = 0)
      : Error(what), bits_(bits) {}

  unsigned bits() const noexcept { return bits_; }
  const std::vector<std::size_t>& path() const noexcept { return path_; }
  long step() const noexcept { return step_; }

  IndeterminateFloor with_path_prefix(std::size_t child) const {
    IndeterminateFloor e = *this;
    e.path_.insert(e.path_.begin(), child);
    return e;
  }
  IndeterminateFloor with_step(long step) const {
    IndeterminateFloor e(std::string(what()) + " (at step " + std::to_string(step) + ")", bits_);
    e.path_ = path_;
    e.step_ = step;
    return e;
  }

 private:
  unsigned bits_;
  std::vector<std::size_t> path_;
  long step_ = -1;
};

class IndeterminateComparison : public Error {
 public:
  explicit IndeterminateComparison(const std::string& what, unsigned bits = 0)
      : Error(what), bits_(bits) {}
  unsigned bits() const noexcept { return bits_; }

 private:
  unsigned bits_;
};

/// Arithmetic outside the supported domain (division by zero, even root of
/// a negative number, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownVariable : public Error {
 public:
  UnknownVariable(const std::string& name, std::size_t offset)
      : Error("unknown variable '" + name + "' at offset " + std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

class UnboundedCoefficient : public Error {
 public:
  using Error::Error;
};

class MissingGrade : public Error {
 public:
  using Error::Error;
};

class NotDownwardClosed : public Error {
 public:
  using Error::Error;
};

class InconsistentPair : public Error {
 public:
  using Error::Error;
};

class NotStrictlyLower : public Error {
 public:
  using Error::Error;
};

class NotUnipotent : public Error {
 public:
  using Error::Error;
};

class RepeatedDegreeOnChain : public Error {
 public:
  using Error::Error;
};

class InconsistentDiagonal : public Error {
 public:
  using Error::Error;
};

class ScaleIsOne : public Error {
 public:
  using Error::Error;
};

class EmptyTail : public Error {
 public:
  using Error::Error;
};

class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

class NonConvergentCoefficients : public Error {
 public:
  using Error::Error;
};

class PremiseViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace gplab
