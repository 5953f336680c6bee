#pragma once

#include <stdexcept>
#include <string>

namespace dmlqu {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: bad parameters, wrong dimensions, non-Hermitian input.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A matrix expected to be positive semidefinite has a clearly negative eigenvalue.
class NotPsdError : public Error {
public:
  NotPsdError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

private:
  double eigenvalue_;
};

/// e^{sM} would overflow a double.
class OverflowError : public Error {
public:
  using Error::Error;
};

/// The closed-form omega route hit a vanishing denominator.
class RankDeficiencyError : public Error {
public:
  RankDeficiencyError(const std::string& what, int block)
      : Error(what), block_(block) {}
  /// 1 for the {|00>,|11>} block, 2 for the {|01>,|10>} block.
  int block() const noexcept { return block_; }

private:
  int block_;
};

/// The Hadamard-conjugated matrix is not of X form.
class NotCentrosymmetricError : public Error {
public:
  NotCentrosymmetricError(const std::string& what, double leakage)
      : Error(what), leakage_(leakage) {}
  double leakage() const noexcept { return leakage_; }

private:
  double leakage_;
};

/// Output file could not be written.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace dmlqu
