#pragma once

#include <stdexcept>
#include <string>

namespace ptkr {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The state norm vanished or became non-finite during renormalization.
class ZeroNorm : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A fit window holds fewer samples than the fitter requires.
class WindowTooShort : public Error {
 public:
  using Error::Error;
};

class NonpositiveWidth : public Error {
 public:
  using Error::Error;
};

/// Dense operators are M^4 entries; refused above the size guard.
class LatticeTooLarge : public Error {
 public:
  using Error::Error;
};

class InconsistentFits : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& msg)
      : Error(key + ": " + msg), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace ptkr
