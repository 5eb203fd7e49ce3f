#include "dvplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dvplan/error.hpp"

namespace dvp {

namespace {

int idx(ClassKind k) { return static_cast<int>(k); }

void check_input(const PlannerInput& in) {
  if (in.classification == nullptr) {
    throw Error(ErrorKind::kInvalidInput, "planner needs a classification");
  }
  if (in.catalog.empty()) throw Error(ErrorKind::kInvalidInput, "server catalog is empty");
  if (!(in.slo.pft_hours > 0.0)) throw Error(ErrorKind::kInvalidInput, "PFT must be > 0");
  in.calibration.validate();
}

using Assignment = std::array<std::size_t, 3>;

// Fills per-class PT/cost; FT is the max over parallel classes and PC the
// sum of class costs.
ProvisionPlan assemble(const PlannerInput& in, const std::array<ClassWorkload, 3>& work,
                       const Assignment& asg, Strategy strategy) {
  ProvisionPlan plan;
  plan.strategy = strategy;
  plan.slo = in.slo;
  for (ClassKind k : kAllClasses) {
    const ClassWorkload& w = work[idx(k)];
    if (w.empty()) continue;
    const ServerType& server = in.catalog[asg[idx(k)]];
    const double pt = w.pt[asg[idx(k)]];
    plan.assignment[k] = server;
    plan.per_class_pt[k] = pt;
    plan.per_class_cost[k] = cost_of(server.cptu, pt);
    plan.predicted_ft = std::max(plan.predicted_ft, pt);
    plan.predicted_pc += plan.per_class_cost[k];
  }
  plan.feasible = plan.slo.met_by(plan.predicted_ft);
  return plan;
}

double min_achievable_ft(const std::array<ClassWorkload, 3>& work) {
  double ft = 0.0;
  for (const auto& w : work) {
    if (w.empty()) continue;
    ft = std::max(ft, *std::min_element(w.pt.begin(), w.pt.end()));
  }
  return ft;
}

}  // namespace

std::array<ClassWorkload, 3> build_workloads(const PlannerInput& in) {
  std::array<ClassWorkload, 3> work;
  for (ClassKind k : kAllClasses) {
    work[idx(k)] = ClassWorkload::from_members(in.classification->at(k),
                                               in.classification->portions, in.catalog,
                                               in.calibration);
  }
  return work;
}

CppRanking rank_servers(const std::array<ClassWorkload, 3>& work, const Catalog& catalog,
                        bool degenerate) {
  CppRanking ranking;
  for (ClassKind k : kAllClasses) {
    auto& order = ranking.order[idx(k)];
    order.resize(catalog.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const ClassWorkload& w = work[idx(k)];
    std::vector<double> key(catalog.size());
    bool defined = !degenerate;
    for (std::size_t s = 0; s < catalog.size() && defined; ++s) {
      const auto c = class_cpp(w, s, catalog);
      if (!c) {
        defined = false;
      } else {
        key[s] = *c;
      }
    }
    ranking.fallback[idx(k)] = !defined;
    if (!defined) continue;  // catalog order is price order
    // Catalog order breaks CPP ties, and it is already ascending by price.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  }
  return ranking;
}

ProvisionPlan plan_dv_aware(const PlannerInput& in) {
  check_input(in);
  const auto work = build_workloads(in);
  const CppRanking ranking = rank_servers(work, in.catalog, in.classification->degenerate);

  Assignment asg{};
  for (ClassKind k : kAllClasses) asg[idx(k)] = ranking.at(k).front();

  std::vector<UpgradeStep> trace;
  const std::size_t bound = 3 * in.catalog.size();
  for (int iteration = 1;; ++iteration) {
    double ft = 0.0;
    std::optional<ClassKind> tcp;
    for (ClassKind k : kAllClasses) {  // priority MSDT > MeSDT > LSDT on ties
      const ClassWorkload& w = work[idx(k)];
      if (w.empty()) continue;
      const double pt = w.pt[asg[idx(k)]];
      if (!tcp || pt > ft) {
        ft = pt;
        tcp = k;
      }
    }
    if (!tcp || in.slo.met_by(ft)) break;

    const ClassKind k = *tcp;
    const ClassWorkload& w = work[idx(k)];
    const std::size_t cur = asg[idx(k)];
    const auto& order = ranking.at(k);
    std::optional<std::size_t> next;
    const auto pos = std::find(order.begin(), order.end(), cur);
    for (auto it = pos + 1; it < order.end(); ++it) {
      if (w.pt[*it] < w.pt[cur]) {
        next = *it;
        break;
      }
    }
    if (!next) {
      // CPP list exhausted: move to a more expensive, faster server.
      for (std::size_t s = cur + 1; s < in.catalog.size(); ++s) {
        if (w.pt[s] < w.pt[cur]) {
          next = s;
          break;
        }
      }
    }
    if (!next) throw InfeasibleSlo(min_achievable_ft(work), in.slo.pft_hours);

    trace.push_back({iteration, k, in.catalog[cur].name, in.catalog[*next].name});
    asg[idx(k)] = *next;
    if (trace.size() > bound) {
      throw std::logic_error("upgrade loop exceeded 3 * |catalog| iterations");
    }
  }

  ProvisionPlan plan = assemble(in, work, asg, Strategy::kDvAware);
  plan.upgrade_trace = std::move(trace);
  return plan;
}

ProvisionPlan plan_baseline(const PlannerInput& in, BaselineTier tier) {
  check_input(in);
  const std::string& name = tier == BaselineTier::kWeak       ? in.tiers.weak
                            : tier == BaselineTier::kModerate ? in.tiers.moderate
                                                              : in.tiers.strong;
  const auto server = in.catalog.index_of(name);
  if (!server) {
    throw Error(ErrorKind::kInvalidInput, "baseline server '" + name + "' not in catalog");
  }
  const auto work = build_workloads(in);
  Assignment asg{};
  asg.fill(*server);
  const Strategy strategy = tier == BaselineTier::kWeak       ? Strategy::kWeak
                            : tier == BaselineTier::kModerate ? Strategy::kModerate
                                                              : Strategy::kStrong;
  ProvisionPlan plan = assemble(in, work, asg, strategy);
  plan.sequential = true;
  double ft = 0.0;
  for (const auto& p : in.classification->portions) {
    ft += predict_pt(p, in.catalog[*server], in.calibration);
  }
  plan.predicted_ft = ft;
  plan.feasible = plan.slo.met_by(ft);
  return plan;
}

ProvisionPlan plan_oracle(const PlannerInput& in) {
  check_input(in);
  if (in.catalog.size() > kOracleMaxCatalog) {
    throw Error(ErrorKind::kInvalidInput, "oracle enumeration limited to 6 server types");
  }
  const auto work = build_workloads(in);
  std::vector<ClassKind> active;
  for (ClassKind k : kAllClasses) {
    if (!work[idx(k)].empty()) active.push_back(k);
  }
  const std::size_t m = in.catalog.size();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < active.size(); ++i) combos *= m;

  std::optional<Assignment> best;
  Money best_pc;
  for (std::size_t code = 0; code < combos; ++code) {
    Assignment asg{};
    std::size_t rest = code;
    // Most significant digit is the first active class: lexicographic order.
    for (std::size_t i = active.size(); i-- > 0;) {
      asg[idx(active[i])] = rest % m;
      rest /= m;
    }
    double ft = 0.0;
    Money pc;
    for (ClassKind k : active) {
      const double pt = work[idx(k)].pt[asg[idx(k)]];
      ft = std::max(ft, pt);
      pc += cost_of(in.catalog[asg[idx(k)]].cptu, pt);
    }
    if (!in.slo.met_by(ft)) continue;
    if (!best || pc < best_pc) {
      best = asg;
      best_pc = pc;
    }
  }
  if (!best) throw InfeasibleSlo(min_achievable_ft(work), in.slo.pft_hours);
  return assemble(in, work, *best, Strategy::kOracle);
}

void write_plan(std::ostream& out, const ProvisionPlan& plan) {
  nlohmann::ordered_json j;
  j["strategy"] = to_string(plan.strategy);
  j["sequential"] = plan.sequential;
  j["condition"] = plan.slo.condition_name;
  j["pft_hours"] = plan.slo.pft_hours;
  j["feasible"] = plan.feasible;
  j["predicted_ft_hours"] = plan.predicted_ft;
  j["predicted_pc"] = plan.predicted_pc.to_string();
  auto& classes = j["classes"] = nlohmann::ordered_json::array();
  for (const auto& [kind, server] : plan.assignment) {
    nlohmann::ordered_json c;
    c["class"] = to_string(kind);
    c["server"] = server.name;
    c["vcpus"] = server.vcpus;
    c["memory_gib"] = server.memory_gib;
    c["cptu"] = server.cptu.to_string();
    c["pt_hours"] = plan.per_class_pt.at(kind);
    c["cost"] = plan.per_class_cost.at(kind).to_string();
    classes.push_back(std::move(c));
  }
  auto& trace = j["upgrade_trace"] = nlohmann::ordered_json::array();
  for (const auto& step : plan.upgrade_trace) {
    nlohmann::ordered_json s;
    s["iteration"] = step.iteration;
    s["class"] = to_string(step.upgraded);
    s["from"] = step.from;
    s["to"] = step.to;
    trace.push_back(std::move(s));
  }
  out << j.dump(2) << '\n';
}

ProvisionPlan read_plan(std::istream& in) {
  ProvisionPlan plan;
  try {
    const auto j = nlohmann::json::parse(in);
    plan.strategy = parse_strategy(j.at("strategy").get<std::string>());
    plan.sequential = j.value("sequential", false);
    plan.slo = make_slo(j.at("pft_hours").get<double>(), j.value("condition", std::string{}));
    plan.feasible = j.at("feasible").get<bool>();
    plan.predicted_ft = j.at("predicted_ft_hours").get<double>();
    plan.predicted_pc = Money::parse(j.at("predicted_pc").get<std::string>());
    for (const auto& c : j.at("classes")) {
      const ClassKind k = parse_class_kind(c.at("class").get<std::string>());
      plan.assignment[k] = ServerType{c.at("server").get<std::string>(), c.at("vcpus").get<int>(),
                                      c.at("memory_gib").get<int>(),
                                      Money::parse(c.at("cptu").get<std::string>())};
      plan.per_class_pt[k] = c.at("pt_hours").get<double>();
      plan.per_class_cost[k] = Money::parse(c.at("cost").get<std::string>());
    }
    for (const auto& s : j.at("upgrade_trace")) {
      plan.upgrade_trace.push_back({s.at("iteration").get<int>(),
                                    parse_class_kind(s.at("class").get<std::string>()),
                                    s.at("from").get<std::string>(), s.at("to").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad plan: ") + ex.what());
  }
  return plan;
}

}  // namespace dvp
