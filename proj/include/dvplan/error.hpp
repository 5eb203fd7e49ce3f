#pragma once

#include <stdexcept>
#include <string>

namespace dvp {

enum class ErrorKind {
  kInvalidInput,
  kDivisionDomain,
  kDegenerateClass,
  kIo,
  kOversizeRecord,
  kInvalidMerge,
  kCalibrationUnderdetermined,
  kInfeasibleSlo,
  kInvalidPlan,
  kPredictionDivergence,
  kUsage,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when no assignment can meet FT < PFT. Carries the best FT the
// catalog could reach so callers can report it.
class InfeasibleSlo : public Error {
 public:
  InfeasibleSlo(double min_achievable_ft, double pft);

  double min_achievable_ft() const { return min_ft_; }
  double pft() const { return pft_; }

 private:
  double min_ft_;
  double pft_;
};

}  // namespace dvp
