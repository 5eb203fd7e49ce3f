#include "dvplan/model.hpp"

#include <cmath>
#include <set>

#include "dvplan/error.hpp"

namespace dvp {

Catalog::Catalog(std::vector<ServerType> servers) : servers_(std::move(servers)) {
  if (servers_.empty()) {
    throw Error(ErrorKind::kInvalidInput, "server catalog is empty");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < servers_.size(); ++i) {
    const ServerType& s = servers_[i];
    if (s.name.empty()) throw Error(ErrorKind::kInvalidInput, "server with empty name");
    if (!names.insert(s.name).second) {
      throw Error(ErrorKind::kInvalidInput, "duplicate server name '" + s.name + "'");
    }
    if (s.vcpus < 1 || s.memory_gib < 1) {
      throw Error(ErrorKind::kInvalidInput,
                  "server '" + s.name + "' needs vcpus >= 1 and memory_gib >= 1");
    }
    if (s.cptu <= Money{}) {
      throw Error(ErrorKind::kInvalidInput, "server '" + s.name + "' needs cptu > 0");
    }
    if (i > 0 && !(servers_[i - 1].cptu < s.cptu)) {
      throw Error(ErrorKind::kInvalidInput,
                  "catalog must be strictly ascending by cptu at '" + s.name + "'");
    }
  }
}

Catalog Catalog::five_tier() {
  return Catalog({
      {"S1", 4, 4, Money::parse("0.239")},
      {"S2", 8, 8, Money::parse("0.489")},
      {"S3", 16, 16, Money::parse("0.959")},
      {"S4", 32, 32, Money::parse("1.919")},
      {"S5", 64, 64, Money::parse("3.838")},
  });
}

std::optional<std::size_t> Catalog::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < servers_.size(); ++i) {
    if (servers_[i].name == name) return i;
  }
  return std::nullopt;
}

const ServerType& Catalog::by_name(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx) {
    throw Error(ErrorKind::kInvalidInput, "unknown server '" + std::string(name) + "'");
  }
  return servers_[*idx];
}

std::string_view to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::kMsdt: return "MSDT";
    case ClassKind::kMesdt: return "MeSDT";
    case ClassKind::kLsdt: return "LSDT";
  }
  return "?";
}

ClassKind parse_class_kind(std::string_view text) {
  for (ClassKind k : kAllClasses) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown class kind '" + std::string(text) + "'");
}

Slo make_slo(double pft_hours, std::string condition_name) {
  if (!(pft_hours > 0.0) || !std::isfinite(pft_hours)) {
    throw Error(ErrorKind::kInvalidInput, "PFT must be a positive number of hours");
  }
  return Slo{pft_hours, std::move(condition_name)};
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kDvAware: return "DV-aware";
    case Strategy::kStrong: return "STRONG";
    case Strategy::kModerate: return "MODERATE";
    case Strategy::kWeak: return "WEAK";
    case Strategy::kOracle: return "ORACLE";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  for (Strategy s : {Strategy::kDvAware, Strategy::kStrong, Strategy::kModerate,
                     Strategy::kWeak, Strategy::kOracle}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown strategy '" + std::string(text) + "'");
}

Money cost_of(Money cptu, double pt_hours) {
  if (!(pt_hours >= 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "processing time must be >= 0");
  }
  if (cptu <= Money{}) throw Error(ErrorKind::kInvalidInput, "cptu must be > 0");
  return Money::from_double(cptu.to_double() * pt_hours);
}

Money total_cost(std::span<const ServerTime> per_server_time) {
  Money total;
  for (const ServerTime& st : per_server_time) total += cost_of(st.cptu, st.pt_hours);
  return total;
}

double performance(double total_result, double total_pt_hours) {
  if (total_pt_hours == 0.0) {
    throw Error(ErrorKind::kDivisionDomain, "performance undefined for zero processing time");
  }
  if (!(total_pt_hours > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "processing time must be > 0");
  }
  return total_result / total_pt_hours;
}

double cpp(double cptu, double total_pt_hours, double total_significance) {
  if (total_significance == 0.0) {
    throw Error(ErrorKind::kDegenerateClass, "CPP undefined for zero significance");
  }
  if (!(total_significance > 0.0) || !(total_pt_hours >= 0.0) || !(cptu > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "CPP needs cptu > 0, pt >= 0, significance > 0");
  }
  return cptu * total_pt_hours * total_pt_hours / total_significance;
}

double cpp(Money cptu, double total_pt_hours, double total_significance) {
  return cpp(cptu.to_double(), total_pt_hours, total_significance);
}

}  // namespace dvp
