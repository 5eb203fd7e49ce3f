#pragma once

// Processing-time model: PT = (c_v * GiB + c_s * significance) / speed,
// speed = (vcpus / reference_vcpus)^gamma.

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dvplan/classifier.hpp"
#include "dvplan/model.hpp"

namespace dvp {

struct CostCalibration {
  double c_v = 1.0;      // hours per GiB at reference speed
  double c_s = 0.0;      // hours per significance unit at reference speed
  double gamma = 1.0;    // speedup exponent in (0, 1]
  int reference_vcpus = 4;
  // Optional slowdown per GiB of portion volume above server memory.
  // Zero disables it.
  double memory_penalty_per_gib = 0.0;

  void validate() const;
  friend bool operator==(const CostCalibration&, const CostCalibration&) = default;
};

double speed_factor(const ServerType& server, const CostCalibration& cal);

double predict_pt(double volume_bytes, double significance, const ServerType& server,
                  const CostCalibration& cal);
double predict_pt(const DataPortion& portion, const ServerType& server,
                  const CostCalibration& cal);

// A class's totals and its processing time on every catalog entry. PTs sum
// member portions in manifest order, the same order the simulator uses.
struct ClassWorkload {
  ClassKind kind = ClassKind::kMsdt;
  std::uint64_t total_volume = 0;
  double total_significance = 0.0;
  std::size_t member_count = 0;
  std::vector<double> pt;  // indexed like the catalog

  bool empty() const { return member_count == 0; }

  static ClassWorkload from_members(const VarietyClass& cls,
                                    std::span<const DataPortion> portions,
                                    const Catalog& catalog, const CostCalibration& cal);
  static ClassWorkload from_totals(ClassKind kind, std::uint64_t volume_bytes,
                                   double significance, const Catalog& catalog,
                                   const CostCalibration& cal);
};

// CPP of running the class on catalog[server]; nullopt for an empty or
// zero-significance class, whose ranking falls back to price order.
std::optional<double> class_cpp(const ClassWorkload& workload, std::size_t server,
                                const Catalog& catalog);

struct ProfileRun {
  double volume_bytes = 0.0;
  double significance = 0.0;
  int vcpus = 4;
  double measured_pt = 0.0;
};

inline constexpr std::array<double, 11> kGammaGrid = {0.50, 0.55, 0.60, 0.65, 0.70, 0.75,
                                                      0.80, 0.85, 0.90, 0.95, 1.00};

// Least squares for (c_v, c_s) at each gamma of kGammaGrid; keeps the gamma
// with the smallest squared PT residual.
CostCalibration calibrate(std::span<const ProfileRun> runs, int reference_vcpus = 4);

void write_calibration(std::ostream& out, const CostCalibration& cal);
CostCalibration read_calibration(std::istream& in);
std::vector<ProfileRun> read_profile_runs(std::istream& in);

}  // namespace dvp
