#include "dvplan/cost_model.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "dvplan/error.hpp"

namespace dvp {

namespace {
constexpr double kBytesPerGib = 1024.0 * 1024.0 * 1024.0;
}

void CostCalibration::validate() const {
  if (!(c_v >= 0.0) || !(c_s >= 0.0) || !(c_v + c_s > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "calibration needs c_v >= 0, c_s >= 0, c_v + c_s > 0");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "calibration gamma must be in (0, 1]");
  }
  if (reference_vcpus < 1) throw Error(ErrorKind::kInvalidInput, "reference_vcpus must be >= 1");
  if (!(memory_penalty_per_gib >= 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "memory penalty must be >= 0");
  }
}

double speed_factor(const ServerType& server, const CostCalibration& cal) {
  return std::pow(static_cast<double>(server.vcpus) / cal.reference_vcpus, cal.gamma);
}

double predict_pt(double volume_bytes, double significance, const ServerType& server,
                  const CostCalibration& cal) {
  const double gib = volume_bytes / kBytesPerGib;
  double work = cal.c_v * gib + cal.c_s * significance;
  if (cal.memory_penalty_per_gib > 0.0 && gib > server.memory_gib) {
    work *= 1.0 + cal.memory_penalty_per_gib * (gib - server.memory_gib);
  }
  return work / speed_factor(server, cal);
}

double predict_pt(const DataPortion& portion, const ServerType& server,
                  const CostCalibration& cal) {
  return predict_pt(static_cast<double>(portion.volume_bytes), portion.significance, server, cal);
}

ClassWorkload ClassWorkload::from_members(const VarietyClass& cls,
                                          std::span<const DataPortion> portions,
                                          const Catalog& catalog, const CostCalibration& cal) {
  ClassWorkload w;
  w.kind = cls.kind;
  w.total_volume = cls.total_volume;
  w.total_significance = cls.total_significance;
  w.member_count = cls.portions.size();
  w.pt.assign(catalog.size(), 0.0);
  for (std::size_t s = 0; s < catalog.size(); ++s) {
    double sum = 0.0;
    for (auto id : cls.portions) sum += predict_pt(portions[id], catalog[s], cal);
    w.pt[s] = sum;
  }
  return w;
}

ClassWorkload ClassWorkload::from_totals(ClassKind kind, std::uint64_t volume_bytes,
                                         double significance, const Catalog& catalog,
                                         const CostCalibration& cal) {
  ClassWorkload w;
  w.kind = kind;
  w.total_volume = volume_bytes;
  w.total_significance = significance;
  w.member_count = (volume_bytes > 0 || significance > 0.0) ? 1 : 0;
  w.pt.reserve(catalog.size());
  for (const auto& s : catalog) {
    w.pt.push_back(predict_pt(static_cast<double>(volume_bytes), significance, s, cal));
  }
  return w;
}

std::optional<double> class_cpp(const ClassWorkload& workload, std::size_t server,
                                const Catalog& catalog) {
  if (workload.empty() || workload.total_significance <= 0.0) return std::nullopt;
  return cpp(catalog[server].cptu, workload.pt.at(server), workload.total_significance);
}

namespace {

struct Fit {
  double c_v = 0.0;
  double c_s = 0.0;
  double ssr = std::numeric_limits<double>::infinity();
};

double ssr_of(std::span<const ProfileRun> runs, const std::vector<double>& speed, double c_v,
              double c_s) {
  constexpr double kG = kBytesPerGib;
  double ssr = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const double pred = (c_v * runs[i].volume_bytes / kG + c_s * runs[i].significance) / speed[i];
    const double r = pred - runs[i].measured_pt;
    ssr += r * r;
  }
  return ssr;
}

// Non-negative least squares in two unknowns: the unconstrained solution if
// it is non-negative, otherwise the better single-coefficient fit.
Fit fit_at(std::span<const ProfileRun> runs, const std::vector<double>& speed) {
  double aa = 0, ab = 0, bb = 0, ay = 0, by = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const double a = runs[i].volume_bytes / kBytesPerGib / speed[i];
    const double b = runs[i].significance / speed[i];
    const double y = runs[i].measured_pt;
    aa += a * a;
    ab += a * b;
    bb += b * b;
    ay += a * y;
    by += b * y;
  }
  Fit best;
  const double det = aa * bb - ab * ab;
  if (det > 1e-12 * aa * bb) {
    const double c_v = (ay * bb - by * ab) / det;
    const double c_s = (by * aa - ay * ab) / det;
    if (c_v >= 0.0 && c_s >= 0.0) {
      return {c_v, c_s, ssr_of(runs, speed, c_v, c_s)};
    }
  }
  if (aa > 0.0) {
    const double c_v = std::max(0.0, ay / aa);
    const Fit f{c_v, 0.0, ssr_of(runs, speed, c_v, 0.0)};
    if (f.ssr < best.ssr) best = f;
  }
  if (bb > 0.0) {
    const double c_s = std::max(0.0, by / bb);
    const Fit f{0.0, c_s, ssr_of(runs, speed, 0.0, c_s)};
    if (f.ssr < best.ssr) best = f;
  }
  return best;
}

}  // namespace

CostCalibration calibrate(std::span<const ProfileRun> runs, int reference_vcpus) {
  if (runs.size() < 3) {
    throw Error(ErrorKind::kCalibrationUnderdetermined,
                "calibration needs at least 3 profile runs, got " + std::to_string(runs.size()));
  }
  std::set<int> servers;
  for (const auto& r : runs) {
    if (r.vcpus < 1 || !(r.measured_pt > 0.0) || r.volume_bytes < 0 || r.significance < 0) {
      throw Error(ErrorKind::kInvalidInput, "profile run with invalid values");
    }
    servers.insert(r.vcpus);
  }
  if (servers.size() < 2) {
    throw Error(ErrorKind::kCalibrationUnderdetermined,
                "profile runs cover only one server size; the speedup exponent needs at least two");
  }
  // (volume, significance) must span two dimensions.
  double vv = 0, vs = 0, ss = 0;
  for (const auto& r : runs) {
    const double v = r.volume_bytes / kBytesPerGib;
    vv += v * v;
    vs += v * r.significance;
    ss += r.significance * r.significance;
  }
  if (!(vv * ss - vs * vs > 1e-9 * vv * ss) || vv == 0.0 || ss == 0.0) {
    throw Error(ErrorKind::kCalibrationUnderdetermined,
                "profile runs have collinear (volume, significance) pairs; vary significance "
                "independently of volume");
  }

  CostCalibration best_cal;
  best_cal.reference_vcpus = reference_vcpus;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (double gamma : kGammaGrid) {
    std::vector<double> speed;
    speed.reserve(runs.size());
    for (const auto& r : runs) {
      speed.push_back(std::pow(static_cast<double>(r.vcpus) / reference_vcpus, gamma));
    }
    const Fit f = fit_at(runs, speed);
    if (f.ssr < best_ssr && f.c_v + f.c_s > 0.0) {
      best_ssr = f.ssr;
      best_cal.c_v = f.c_v;
      best_cal.c_s = f.c_s;
      best_cal.gamma = gamma;
    }
  }
  if (!std::isfinite(best_ssr)) {
    throw Error(ErrorKind::kCalibrationUnderdetermined, "no admissible fit for the profile runs");
  }
  return best_cal;
}

void write_calibration(std::ostream& out, const CostCalibration& cal) {
  nlohmann::ordered_json j;
  j["c_v"] = cal.c_v;
  j["c_s"] = cal.c_s;
  j["gamma"] = cal.gamma;
  j["reference_vcpus"] = cal.reference_vcpus;
  if (cal.memory_penalty_per_gib > 0.0) j["memory_penalty_per_gib"] = cal.memory_penalty_per_gib;
  out << j.dump(2) << '\n';
}

CostCalibration read_calibration(std::istream& in) {
  try {
    const auto j = nlohmann::json::parse(in);
    CostCalibration cal;
    cal.c_v = j.at("c_v").get<double>();
    cal.c_s = j.at("c_s").get<double>();
    cal.gamma = j.value("gamma", 1.0);
    cal.reference_vcpus = j.value("reference_vcpus", 4);
    cal.memory_penalty_per_gib = j.value("memory_penalty_per_gib", 0.0);
    cal.validate();
    return cal;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad calibration: ") + ex.what());
  }
}

std::vector<ProfileRun> read_profile_runs(std::istream& in) {
  std::vector<ProfileRun> runs;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto j = nlohmann::json::parse(line);
      runs.push_back({j.at("volume_bytes").get<double>(), j.at("significance").get<double>(),
                      j.at("vcpus").get<int>(), j.at("pt_hours").get<double>()});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad profile runs: ") + ex.what());
  }
  return runs;
}

}  // namespace dvp
