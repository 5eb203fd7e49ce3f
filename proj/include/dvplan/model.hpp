#pragma once

// Domain types shared by every stage, plus the cost/performance identities
// the planner and simulator are built on.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dvplan/money.hpp"

namespace dvp {

struct ServerType {
  std::string name;
  int vcpus = 1;
  int memory_gib = 1;
  Money cptu;  // price per hour

  friend bool operator==(const ServerType&, const ServerType&) = default;
};

// Server catalog ordered by strictly ascending price. Index order is the
// "more expensive server" order used when a CPP ranking runs out.
class Catalog {
 public:
  Catalog() = default;
  // Validates the invariants and throws kInvalidInput on violation.
  explicit Catalog(std::vector<ServerType> servers);

  // S1..S5: 4 to 64 vCPUs, each step doubling memory, vCPUs and roughly price.
  static Catalog five_tier();

  std::size_t size() const { return servers_.size(); }
  bool empty() const { return servers_.empty(); }
  const ServerType& operator[](std::size_t i) const { return servers_[i]; }
  std::span<const ServerType> servers() const { return servers_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  const ServerType& by_name(std::string_view name) const;

  auto begin() const { return servers_.begin(); }
  auto end() const { return servers_.end(); }

 private:
  std::vector<ServerType> servers_;
};

struct DataPortion {
  std::uint64_t id = 0;
  std::uint64_t volume_bytes = 0;
  std::uint64_t record_count = 0;
  double significance = 0.0;
  bool significance_is_estimate = false;
  double ef = 0.0;
};

enum class ClassKind { kMsdt = 0, kMesdt = 1, kLsdt = 2 };

inline constexpr std::array<ClassKind, 3> kAllClasses = {
    ClassKind::kMsdt, ClassKind::kMesdt, ClassKind::kLsdt};

std::string_view to_string(ClassKind kind);
ClassKind parse_class_kind(std::string_view text);

struct VarietyClass {
  ClassKind kind = ClassKind::kMsdt;
  std::vector<std::uint64_t> portions;  // ascending id, i.e. manifest order
  std::uint64_t total_volume = 0;
  double total_significance = 0.0;

  bool empty() const { return portions.empty(); }
};

struct Slo {
  double pft_hours = 0.0;
  std::string condition_name;

  // FT < PFT; equality misses the deadline.
  bool met_by(double ft_hours) const { return ft_hours < pft_hours; }
};

Slo make_slo(double pft_hours, std::string condition_name);

enum class Strategy { kDvAware, kStrong, kModerate, kWeak, kOracle };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

struct UpgradeStep {
  int iteration = 0;
  ClassKind upgraded = ClassKind::kMsdt;
  std::string from;
  std::string to;

  friend bool operator==(const UpgradeStep&, const UpgradeStep&) = default;
};

struct ProvisionPlan {
  Strategy strategy = Strategy::kDvAware;
  // Baselines run every portion back to back on one server; DV-aware
  // classes run in parallel, one server each.
  bool sequential = false;
  std::map<ClassKind, ServerType> assignment;
  std::map<ClassKind, double> per_class_pt;
  std::map<ClassKind, Money> per_class_cost;
  double predicted_ft = 0.0;
  Money predicted_pc;
  Slo slo;
  bool feasible = false;
  std::vector<UpgradeStep> upgrade_trace;
};

// Sum of CPTU * PT per server. Each term is rounded to a micro-unit
// before summing so the result decomposes exactly.
struct ServerTime {
  Money cptu;
  double pt_hours = 0.0;
};
Money total_cost(std::span<const ServerTime> per_server_time);
Money cost_of(Money cptu, double pt_hours);

// Result produced per unit of processing time.
double performance(double total_result, double total_pt_hours);

// Cost per performance: CPTU * PT^2 / significance.
double cpp(Money cptu, double total_pt_hours, double total_significance);
double cpp(double cptu, double total_pt_hours, double total_significance);

}  // namespace dvp
