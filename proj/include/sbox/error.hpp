#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbox {

enum class ErrorCode {
  NotPrime,
  ReduciblePolynomial,
  UnsupportedSize,
  NoBuiltinModulus,
  BadModulus,
  DivisionByZero,
  MixedFields,
  NotADivisor,
  EvenCharacteristic,
  OddCharacteristic,
  LeadingCoefficientZero,
  ZeroLinearCoefficient,
  NotAPowerMap,
  WrongKind,
  BadParameters,
  WrongLength,
  UnparsableElement,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception type; `code()`
// identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sbox
