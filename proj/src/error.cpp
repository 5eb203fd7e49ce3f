#include "dvplan/error.hpp"

#include <sstream>

namespace dvp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kDivisionDomain: return "division-domain";
    case ErrorKind::kDegenerateClass: return "degenerate-class";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kOversizeRecord: return "oversize-record";
    case ErrorKind::kInvalidMerge: return "invalid-merge";
    case ErrorKind::kCalibrationUnderdetermined: return "calibration-underdetermined";
    case ErrorKind::kInfeasibleSlo: return "infeasible-slo";
    case ErrorKind::kInvalidPlan: return "invalid-plan";
    case ErrorKind::kPredictionDivergence: return "prediction-divergence";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

namespace {

std::string infeasible_message(double min_ft, double pft) {
  std::ostringstream os;
  os << "SLO infeasible: minimum achievable FT " << min_ft
     << " h is not below PFT " << pft << " h";
  return os.str();
}

}  // namespace

InfeasibleSlo::InfeasibleSlo(double min_achievable_ft, double pft)
    : Error(ErrorKind::kInfeasibleSlo, infeasible_message(min_achievable_ft, pft)),
      min_ft_(min_achievable_ft),
      pft_(pft) {}

}  // namespace dvp
