#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hypsing {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Series,
  ModelMismatch,
  DegenerateFit,
  HyperbolicMonodromy,
  NegativeTranslation,
  InconsistentInput,
  VerificationFailed,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure in the library is reported as an Error carrying its kind;
/// the CLI maps kinds onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const char* what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace hypsing
