#include "dvplan/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "dvplan/error.hpp"
#include "dvplan/planner.hpp"

namespace dvp {

namespace {

constexpr Strategy kRowOrder[] = {Strategy::kDvAware, Strategy::kStrong, Strategy::kModerate,
                                  Strategy::kWeak};

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split(std::string_view s, char d) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(d, start);
    out.emplace_back(s.substr(start, at == std::string_view::npos ? at : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& v, char d) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += d;
    s += v[i];
  }
  return s;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kInvalidInput, "bad number '" + s + "' in report csv");
  }
  return v;
}

std::vector<std::string> servers_of(const ProvisionPlan& plan, const Catalog& catalog) {
  std::vector<std::string> out;
  for (const auto& s : catalog) {
    for (const auto& [k, used] : plan.assignment) {
      if (used.name == s.name) {
        out.push_back(s.name);
        break;
      }
    }
  }
  return out;
}

void normalise(ComparisonReport& report) {
  for (const auto& cond : report.conditions()) {
    const ReportRow* strong = report.find(cond, Strategy::kStrong);
    for (auto& row : report.rows) {
      if (row.condition != cond || strong == nullptr) continue;
      if (strong->time_hours > 0.0) row.norm_time = row.time_hours / strong->time_hours;
      if (row.cost && strong->cost && strong->cost->micros() > 0) {
        row.norm_cost = row.cost->to_double() / strong->cost->to_double();
      }
    }
  }
}

}  // namespace

const ReportRow* ComparisonReport::find(std::string_view condition, Strategy s) const {
  for (const auto& r : rows) {
    if (r.condition == condition && r.strategy == s) return &r;
  }
  return nullptr;
}

std::vector<std::string> ComparisonReport::conditions() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.condition) == out.end()) out.push_back(r.condition);
  }
  return out;
}

std::optional<double> ComparisonReport::improvement(std::string_view condition,
                                                    Strategy other) const {
  const ReportRow* dv = find(condition, Strategy::kDvAware);
  const ReportRow* x = find(condition, other);
  if (!dv || !x || !dv->cost || !x->cost || x->cost->micros() == 0) return std::nullopt;
  return 1.0 - dv->cost->to_double() / x->cost->to_double();
}

bool ComparisonReport::dv_infeasible() const {
  return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) {
    return r.strategy == Strategy::kDvAware && !r.feasible;
  });
}

PipelineResult compare_strategies(const Scenario& scenario, ClassificationResult classification) {
  PipelineResult out;
  out.classification = std::move(classification);
  out.report.scenario = scenario.name;
  for (const auto& s : scenario.catalog) out.report.catalog.push_back(s.name);
  if (out.classification.portions.empty()) return out;

  for (const Slo& slo : scenario.slos) {
    PlannerInput input{&out.classification, scenario.catalog, slo, scenario.calibration,
                       scenario.tiers};
    for (Strategy strategy : kRowOrder) {
      ReportRow row;
      row.condition = slo.condition_name;
      row.pft_hours = slo.pft_hours;
      row.strategy = strategy;
      ProvisionPlan plan;
      try {
        switch (strategy) {
          case Strategy::kDvAware: plan = plan_dv_aware(input); break;
          case Strategy::kStrong: plan = plan_baseline(input, BaselineTier::kStrong); break;
          case Strategy::kModerate: plan = plan_baseline(input, BaselineTier::kModerate); break;
          default: plan = plan_baseline(input, BaselineTier::kWeak); break;
        }
      } catch (const InfeasibleSlo& e) {
        row.feasible = false;
        row.time_hours = e.min_achievable_ft();
        out.report.rows.push_back(std::move(row));
        continue;
      }
      const SimulationResult sim = simulate(plan, out.classification, scenario.calibration);
      const Verdict verdict = verify_plan(plan, sim, slo);
      row.feasible = verdict.feasible;
      row.time_hours = sim.ft;
      row.cost = sim.pc;
      row.servers = servers_of(plan, scenario.catalog);
      out.report.rows.push_back(std::move(row));
      out.curves.push_back({slo.condition_name, strategy, sim.curve});
      out.plans.push_back(std::move(plan));
    }
  }
  normalise(out.report);
  return out;
}

PipelineResult run_pipeline(const Scenario& scenario, const CorpusInput& corpus,
                            unsigned threads) {
  const SamplingSpec spec = scenario.sampling_spec();
  PortionManifest manifest;
  std::vector<SignificanceEstimate> estimates;
  if (corpus.synthetic) {
    const SyntheticCorpus synth(*corpus.synthetic, scenario.rng_seed);
    manifest = synth.manifest("synthetic:" + corpus.synthetic->to_string());
    estimates = estimate_all(
        synth.size(),
        [&](std::size_t i) {
          return estimate_significance(synth.portion(i), i, scenario.measure, spec);
        },
        threads);
  } else {
    manifest = chunk(corpus.paths, scenario.portion_size_bytes, '\n');
    estimates = profile_manifest(manifest, scenario.measure, spec, threads);
  }

  std::vector<DataPortion> portions;
  portions.reserve(manifest.portions.size());
  for (std::size_t i = 0; i < manifest.portions.size(); ++i) {
    const auto& e = manifest.portions[i];
    portions.push_back({e.id, e.length, e.records, estimates[i].estimate, true, 0.0});
  }
  ClassificationResult classification;
  if (!portions.empty()) classification = classify_portions(portions, scenario.boundaries);
  PipelineResult out = compare_strategies(scenario, std::move(classification));
  out.estimates = std::move(estimates);
  return out;
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "table") return ReportFormat::kTable;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "plot") return ReportFormat::kPlot;
  throw Error(ErrorKind::kUsage, "unknown report format '" + std::string(text) +
                                     "' (expected table, csv or plot)");
}

namespace {

std::string emit_table(const ComparisonReport& r) {
  std::ostringstream os;
  os << "Scenario: " << r.scenario << '\n';
  if (r.rows.empty()) {
    os << "(no portions; nothing to plan)\n";
    return os.str();
  }
  for (const auto& cond : r.conditions()) {
    const ReportRow* any = nullptr;
    for (const auto& row : r.rows) {
      if (row.condition == cond) {
        any = &row;
        break;
      }
    }
    os << "\nCondition " << cond << " (PFT " << shortest(any->pft_hours) << " h)\n";
    char line[160];
    std::snprintf(line, sizeof line, "  %-10s %12s %14s %9s %10s %10s  %s\n", "strategy",
                  "time_h", "cost", "feasible", "norm_time", "norm_cost", "servers");
    os << line;
    for (const auto& row : r.rows) {
      if (row.condition != cond) continue;
      std::snprintf(line, sizeof line, "  %-10s %12s %14s %9s %10s %10s  %s\n",
                    std::string(to_string(row.strategy)).c_str(),
                    fixed(row.time_hours, 4).c_str(),
                    row.cost ? row.cost->to_string().c_str() : "-",
                    row.feasible ? "yes" : "no",
                    row.norm_time ? fixed(*row.norm_time, 3).c_str() : "-",
                    row.norm_cost ? fixed(*row.norm_cost, 3).c_str() : "-",
                    join(row.servers, ',').c_str());
      os << line;
    }
    os << "  DV-aware cost improvement:";
    for (Strategy s : {Strategy::kStrong, Strategy::kModerate, Strategy::kWeak}) {
      const auto imp = r.improvement(cond, s);
      os << "  vs " << to_string(s) << ' ' << (imp ? fixed(*imp * 100.0, 1) + "%" : "-");
    }
    os << '\n';
  }
  os << "\nServer types used (DV-aware)\n  " << std::string(10, ' ');
  for (const auto& name : r.catalog) os << ' ' << name;
  os << '\n';
  for (const auto& cond : r.conditions()) {
    const ReportRow* dv = r.find(cond, Strategy::kDvAware);
    char head[32];
    std::snprintf(head, sizeof head, "  %-10s", cond.c_str());
    os << head;
    for (const auto& name : r.catalog) {
      const bool used =
          dv && std::find(dv->servers.begin(), dv->servers.end(), name) != dv->servers.end();
      os << ' ' << std::string(name.size() - 1, ' ') << (used ? '*' : '.');
    }
    os << '\n';
  }
  return os.str();
}

std::string emit_csv(const ComparisonReport& r) {
  std::ostringstream os;
  os << kReportCsvVersion << '\n';
  os << "scenario," << r.scenario << '\n';
  os << "catalog," << join(r.catalog, ';') << '\n';
  os << "condition,pft_hours,strategy,time_hours,cost,feasible,norm_time,norm_cost,servers\n";
  for (const auto& row : r.rows) {
    os << row.condition << ',' << shortest(row.pft_hours) << ',' << to_string(row.strategy)
       << ',' << shortest(row.time_hours) << ',' << (row.cost ? row.cost->to_string() : "")
       << ',' << (row.feasible ? "true" : "false") << ','
       << (row.norm_time ? shortest(*row.norm_time) : "") << ','
       << (row.norm_cost ? shortest(*row.norm_cost) : "") << ',' << join(row.servers, ';')
       << '\n';
  }
  return os.str();
}

std::string emit_plot(const PipelineResult& result) {
  std::ostringstream os;
  for (const auto& series : result.curves) {
    os << "# condition=" << series.condition << " strategy=" << to_string(series.strategy)
       << '\n';
    write_curve(os, series.points);
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string emit_report(const PipelineResult& result, ReportFormat format) {
  switch (format) {
    case ReportFormat::kTable: return emit_table(result.report);
    case ReportFormat::kCsv: return emit_csv(result.report);
    case ReportFormat::kPlot: return emit_plot(result);
  }
  throw Error(ErrorKind::kUsage, "unknown report format");
}

ComparisonReport parse_report_csv(std::string_view csv) {
  ComparisonReport r;
  std::istringstream in{std::string(csv)};
  std::string line;
  auto next = [&](std::string_view what) {
    if (!std::getline(in, line)) {
      throw Error(ErrorKind::kInvalidInput, "report csv truncated before " + std::string(what));
    }
  };
  next("version");
  if (line != kReportCsvVersion) {
    throw Error(ErrorKind::kInvalidInput, "unsupported report csv version '" + line + "'");
  }
  next("scenario");
  if (line.rfind("scenario,", 0) != 0) throw Error(ErrorKind::kInvalidInput, "missing scenario line");
  r.scenario = line.substr(9);
  next("catalog");
  if (line.rfind("catalog,", 0) != 0) throw Error(ErrorKind::kInvalidInput, "missing catalog line");
  if (line.size() > 8) r.catalog = split(line.substr(8), ';');
  next("header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw Error(ErrorKind::kInvalidInput, "report csv row needs 9 fields");
    ReportRow row;
    row.condition = f[0];
    row.pft_hours = parse_double(f[1]);
    row.strategy = parse_strategy(f[2]);
    row.time_hours = parse_double(f[3]);
    if (!f[4].empty()) row.cost = Money::parse(f[4]);
    row.feasible = f[5] == "true";
    if (!f[6].empty()) row.norm_time = parse_double(f[6]);
    if (!f[7].empty()) row.norm_cost = parse_double(f[7]);
    if (!f[8].empty()) row.servers = split(f[8], ';');
    r.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace dvp
