#include "dvplan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dvplan/error.hpp"

namespace dvp {

namespace {

struct Completion {
  double time;
  int class_rank;
  std::uint64_t id;
  double significance;
};

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

}  // namespace

double SimulationResult::time_to_fraction(double fraction) const {
  if (curve.empty()) return 0.0;
  const double target = fraction * curve.back().cumulative_significance;
  for (const auto& p : curve) {
    if (p.cumulative_significance >= target) return p.time;
  }
  return curve.back().time;
}

SimulationResult simulate(const ProvisionPlan& plan, const ClassificationResult& cls,
                          const CostCalibration& cal) {
  SimulationResult r;
  std::vector<Completion> done;
  done.reserve(cls.portions.size());

  for (ClassKind k : kAllClasses) {
    const VarietyClass& vc = cls.at(k);
    if (vc.empty()) continue;
    const auto it = plan.assignment.find(k);
    if (it == plan.assignment.end()) {
      throw Error(ErrorKind::kInvalidPlan,
                  std::string("class ") + std::string(to_string(k)) + " has portions but no server");
    }
    ClassRun run;
    run.server = it->second;
    for (auto id : vc.portions) {
      run.pt += predict_pt(cls.portions[id], run.server, cal);
      if (!plan.sequential) {
        done.push_back({run.pt, static_cast<int>(k), id, cls.portions[id].significance});
      }
    }
    run.cost = cost_of(run.server.cptu, run.pt);
    r.pc += run.cost;
    r.classes[k] = run;
  }

  if (plan.sequential) {
    // One server for everything, manifest order.
    const ServerType* server = nullptr;
    for (const auto& [k, s] : plan.assignment) {
      if (server != nullptr && !(*server == s)) {
        throw Error(ErrorKind::kInvalidPlan, "sequential plan uses more than one server");
      }
      server = &s;
    }
    double t = 0.0;
    for (const auto& p : cls.portions) {
      if (server == nullptr) {
        throw Error(ErrorKind::kInvalidPlan, "portions present but plan assigns no server");
      }
      t += predict_pt(p, *server, cal);
      done.push_back({t, 0, p.id, p.significance});
    }
    r.ft = t;
  }
  double max_pt = 0.0;
  for (const auto& [k, run] : r.classes) {
    if (!r.tcp_class || run.pt > max_pt) {
      max_pt = run.pt;
      r.tcp_class = k;
    }
  }
  if (!plan.sequential) r.ft = max_pt;

  std::stable_sort(done.begin(), done.end(), [](const Completion& a, const Completion& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.class_rank != b.class_rank) return a.class_rank < b.class_rank;
    return a.id < b.id;
  });
  double cum = 0.0;
  r.curve.reserve(done.size());
  for (const auto& c : done) {
    cum += c.significance;
    r.curve.push_back({c.time, cum});
  }
  r.feasible = plan.slo.met_by(r.ft);
  return r;
}

Verdict verify_plan(const ProvisionPlan& plan, const SimulationResult& sim, const Slo& slo) {
  constexpr double kTol = 1e-9;
  Verdict v;
  v.predicted_ft = plan.predicted_ft;
  v.simulated_ft = sim.ft;
  v.predicted_pc = plan.predicted_pc;
  v.simulated_pc = sim.pc;
  v.ft_match = close_rel(plan.predicted_ft, sim.ft, kTol);
  v.pc_match = close_rel(plan.predicted_pc.to_double(), sim.pc.to_double(), kTol);
  v.feasible = slo.met_by(sim.ft);
  if (!v.ft_match || !v.pc_match) {
    std::ostringstream os;
    os.precision(17);
    os << "plan prediction diverges from simulation: FT " << plan.predicted_ft << " vs "
       << sim.ft << ", PC " << plan.predicted_pc.to_string() << " vs " << sim.pc.to_string();
    throw Error(ErrorKind::kPredictionDivergence, os.str());
  }
  return v;
}

void write_simulation(std::ostream& out, const SimulationResult& sim) {
  nlohmann::ordered_json j;
  j["ft_hours"] = sim.ft;
  j["pc"] = sim.pc.to_string();
  j["tcp_class"] = sim.tcp_class ? std::string(to_string(*sim.tcp_class)) : std::string();
  j["feasible"] = sim.feasible;
  auto& classes = j["classes"] = nlohmann::ordered_json::array();
  for (const auto& [k, run] : sim.classes) {
    nlohmann::ordered_json c;
    c["class"] = to_string(k);
    c["server"] = run.server.name;
    c["pt_hours"] = run.pt;
    c["cost"] = run.cost.to_string();
    classes.push_back(std::move(c));
  }
  j["curve_points"] = sim.curve.size();
  out << j.dump(2) << '\n';
}

void write_curve(std::ostream& out, const std::vector<CurvePoint>& curve) {
  char buf[96];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%.9g\t%.9g\n", p.time, p.cumulative_significance);
    out << buf;
  }
}

}  // namespace dvp
