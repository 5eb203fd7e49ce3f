#pragma once

// Class-to-server assignment: the DV-aware CPP heuristic, the single-server
// baselines, and an exhaustive oracle used to validate the heuristic.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "dvplan/classifier.hpp"
#include "dvplan/cost_model.hpp"
#include "dvplan/model.hpp"

namespace dvp {

struct BaselineTiers {
  std::string weak = "S1";
  std::string moderate = "S2";
  std::string strong = "S3";
};

struct PlannerInput {
  const ClassificationResult* classification = nullptr;
  Catalog catalog;
  Slo slo;
  CostCalibration calibration;
  BaselineTiers tiers;
};

// Per class, catalog indices sorted by ascending CPP (ties: price, then
// catalog order). Classes without a defined CPP use price order.
struct CppRanking {
  std::array<std::vector<std::size_t>, 3> order;
  std::array<bool, 3> fallback{};

  const std::vector<std::size_t>& at(ClassKind k) const { return order[static_cast<int>(k)]; }
};

std::array<ClassWorkload, 3> build_workloads(const PlannerInput& input);
CppRanking rank_servers(const std::array<ClassWorkload, 3>& workloads, const Catalog& catalog,
                        bool degenerate);

// Starts every class on its minimum-CPP server, then upgrades the time
// critical class until FT < PFT. Throws InfeasibleSlo when the critical
// class already holds the fastest server.
ProvisionPlan plan_dv_aware(const PlannerInput& input);

enum class BaselineTier { kWeak, kModerate, kStrong };

// All portions on one server, back to back. Always returns a plan; the
// feasible flag records whether FT < PFT.
ProvisionPlan plan_baseline(const PlannerInput& input, BaselineTier tier);

// Minimum-PC assignment over all |catalog|^k choices for the k non-empty
// classes, subject to FT < PFT. Ties keep the lexicographically first
// assignment (MSDT index, then MeSDT, then LSDT).
ProvisionPlan plan_oracle(const PlannerInput& input);

inline constexpr std::size_t kOracleMaxCatalog = 6;

void write_plan(std::ostream& out, const ProvisionPlan& plan);
ProvisionPlan read_plan(std::istream& in);

}  // namespace dvp
