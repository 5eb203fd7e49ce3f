#pragma once

// End-to-end pipeline (chunk, profile, classify, plan, simulate) and the
// comparison report it produces.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dvplan/classifier.hpp"
#include "dvplan/model.hpp"
#include "dvplan/sampling.hpp"
#include "dvplan/scenario.hpp"
#include "dvplan/simulator.hpp"
#include "dvplan/synthetic.hpp"

namespace dvp {

struct ReportRow {
  std::string condition;
  double pft_hours = 0.0;
  Strategy strategy = Strategy::kDvAware;
  bool feasible = false;
  // For an infeasible DV-aware plan: the minimum achievable FT.
  double time_hours = 0.0;
  std::optional<Money> cost;  // absent when no DV-aware plan exists
  std::optional<double> norm_time;  // relative to STRONG
  std::optional<double> norm_cost;
  std::vector<std::string> servers;  // catalog order

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ComparisonReport {
  std::string scenario;
  std::vector<std::string> catalog;
  std::vector<ReportRow> rows;

  const ReportRow* find(std::string_view condition, Strategy s) const;
  std::vector<std::string> conditions() const;
  // 1 - PC_DV / PC_other, or nullopt when either cost is missing.
  std::optional<double> improvement(std::string_view condition, Strategy other) const;
  bool dv_infeasible() const;

  friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

struct CurveSeries {
  std::string condition;
  Strategy strategy = Strategy::kDvAware;
  std::vector<CurvePoint> points;
};

struct PipelineResult {
  ComparisonReport report;
  std::vector<CurveSeries> curves;
  std::vector<SignificanceEstimate> estimates;
  ClassificationResult classification;
  std::vector<ProvisionPlan> plans;  // in report row order, DV-aware omitted if infeasible
};

struct CorpusInput {
  std::vector<std::filesystem::path> paths;
  std::optional<SyntheticSpec> synthetic;
};

PipelineResult run_pipeline(const Scenario& scenario, const CorpusInput& corpus,
                            unsigned threads = 0);

// Report built from a finished classification (shared by run_pipeline and
// the stage-wise CLI).
PipelineResult compare_strategies(const Scenario& scenario, ClassificationResult classification);

enum class ReportFormat { kTable, kCsv, kPlot };
ReportFormat parse_report_format(std::string_view text);

std::string emit_report(const PipelineResult& result, ReportFormat format);

// Inverse of the csv format.
ComparisonReport parse_report_csv(std::string_view csv);

inline constexpr std::string_view kReportCsvVersion = "# dvplan-report v1";

}  // namespace dvp
