#pragma once

// Closed-form execution of a plan: classes in parallel, portions of a class
// back to back in manifest order. Baselines run everything on one server.

#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dvplan/classifier.hpp"
#include "dvplan/cost_model.hpp"
#include "dvplan/model.hpp"

namespace dvp {

struct ClassRun {
  ServerType server;
  double pt = 0.0;
  Money cost;
};

struct CurvePoint {
  double time = 0.0;
  double cumulative_significance = 0.0;
};

struct SimulationResult {
  std::map<ClassKind, ClassRun> classes;
  double ft = 0.0;
  Money pc;
  std::optional<ClassKind> tcp_class;
  bool feasible = false;
  std::vector<CurvePoint> curve;

  // Earliest time at which `fraction` of the total significance is done.
  double time_to_fraction(double fraction) const;
};

SimulationResult simulate(const ProvisionPlan& plan, const ClassificationResult& classification,
                          const CostCalibration& calibration);

struct Verdict {
  bool ft_match = false;
  bool pc_match = false;
  bool feasible = false;  // simulated FT < PFT
  double predicted_ft = 0.0;
  double simulated_ft = 0.0;
  Money predicted_pc;
  Money simulated_pc;
};

// Throws kPredictionDivergence when the plan's FT or PC disagrees with the
// simulation beyond 1e-9 relative.
Verdict verify_plan(const ProvisionPlan& plan, const SimulationResult& sim, const Slo& slo);

void write_simulation(std::ostream& out, const SimulationResult& sim);
// Two columns: time in hours, cumulative significance.
void write_curve(std::ostream& out, const std::vector<CurvePoint>& curve);

}  // namespace dvp
