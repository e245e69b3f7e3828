#pragma once

#include <stdexcept>
#include <string>

namespace jwselect {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched register sizes, qubit indices out of range, overlapping operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A fermionic factor pair written with the larger orbital index first.
class CanonicalizationError : public Error {
 public:
  using Error::Error;
};

/// A term touching more distinct orbitals than the Hamiltonian's k allows.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// A Pauli pattern that cannot be represented in the selection register.
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// An orbital or address index outside [0, n).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Selection bits that do not describe a valid selection state.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// A term whose Jordan-Wigner image is not Hermitian, so it has no real LCU form.
class HermiticityError : public Error {
 public:
  using Error::Error;
};

/// A macro gate reached an operation that needs terminal gates only.
class LoweringRequiredError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Simulation request above the hard-coded qubit caps.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The classical-control fast path met a gate that puts a selection qubit
/// into superposition.
class FastPathInvalidError : public Error {
 public:
  using Error::Error;
};

/// Malformed Hamiltonian text; the message carries the line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace jwselect
