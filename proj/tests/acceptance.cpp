// Acceptance run: one PASS/FAIL line per criterion, diagnostics indented
// underneath. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dvplan/classifier.hpp"
#include "dvplan/planner.hpp"
#include "dvplan/report.hpp"
#include "dvplan/sampling.hpp"
#include "dvplan/scenario.hpp"
#include "dvplan/synthetic.hpp"
#include "properties.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using dvp::Strategy;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failed = 0;

void verdict(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("criterion %d %s: %s (%s)\n", id, pass ? "PASS" : "FAIL", title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failed;
}

void note(const std::string& text) { std::printf("    %s\n", text.c_str()); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

dvp::Scenario fixture(const std::string& name) {
  std::ifstream in(std::string(DVPLAN_FIXTURES) + "/" + name + ".json");
  if (!in) throw std::runtime_error("missing fixture " + name);
  return dvp::read_scenario(in);
}

dvp::PipelineResult run_fixture(const dvp::Scenario& s) {
  dvp::CorpusInput corpus;
  corpus.synthetic = dvp::SyntheticSpec::parse(s.synthetic.value());
  return dvp::run_pipeline(s, corpus);
}

void baseline_ratios(const dvp::ComparisonReport& r, const std::string& cond) {
  const double weak = r.find(cond, Strategy::kWeak)->time_hours;
  note(fmt("baseline FT WEAK:MODERATE:STRONG = 1:%.3f:%.3f (reference shape 1:0.600:0.419, "
           "not reachable with this fixture's speedup exponent)",
           r.find(cond, Strategy::kModerate)->time_hours / weak,
           r.find(cond, Strategy::kStrong)->time_hours / weak));
}

void oracle_note(const dvp::Scenario& s, const dvp::PipelineResult& res) {
  const dvp::PlannerInput in{&res.classification, s.catalog, s.slos.at(0), s.calibration,
                             s.tiers};
  const auto dv = dvp::plan_dv_aware(in);
  const auto oracle = dvp::plan_oracle(in);
  note(fmt("DV-aware PC %s with %zu upgrade(s); oracle PC %s", dv.predicted_pc.to_string().c_str(),
           dv.upgrade_trace.size(), oracle.predicted_pc.to_string().c_str()));
}

void criterion1() {
  const auto t0 = Clock::now();
  const auto s = fixture("paper-shape-strict");
  const auto res = run_fixture(s);
  const double secs = seconds_since(t0);
  const auto& r = res.report;
  const bool pattern = r.find("strict", Strategy::kDvAware)->feasible &&
                       r.find("strict", Strategy::kStrong)->feasible &&
                       !r.find("strict", Strategy::kModerate)->feasible &&
                       !r.find("strict", Strategy::kWeak)->feasible;
  const double imp = r.improvement("strict", Strategy::kStrong).value_or(-1.0);
  const bool band = imp >= 0.13 && imp <= 0.27;
  verdict(1, "strict-condition pattern", pattern && band && secs < 10.0,
          fmt("only DV-aware and STRONG feasible: %s; PC %.1f%% below STRONG, band 13-27%%; "
              "%.2f s",
              pattern ? "yes" : "no", imp * 100, secs));
  baseline_ratios(r, "strict");
  oracle_note(s, res);
}

void criterion2() {
  const auto t0 = Clock::now();
  const auto s = fixture("paper-shape-normal");
  const auto res = run_fixture(s);
  const double secs = seconds_since(t0);
  const auto& r = res.report;
  const bool pattern = r.find("normal", Strategy::kDvAware)->feasible &&
                       r.find("normal", Strategy::kModerate)->feasible &&
                       r.find("normal", Strategy::kStrong)->feasible;
  const double vs_strong = r.improvement("normal", Strategy::kStrong).value_or(-1.0);
  const double vs_mod = r.improvement("normal", Strategy::kModerate).value_or(-1.0);
  const bool band = vs_strong >= 0.25 && vs_strong <= 0.35 && vs_mod >= 0.01 && vs_mod <= 0.09;
  verdict(2, "normal-condition pattern", pattern && band && secs < 10.0,
          fmt("DV-aware, MODERATE, STRONG feasible: %s; PC %.1f%% below STRONG (25-35%%), "
              "%.1f%% below MODERATE (1-9%%); %.2f s",
              pattern ? "yes" : "no", vs_strong * 100, vs_mod * 100, secs));
  baseline_ratios(r, "normal");
}

// Small instance on a given catalog: 3 to 12 portions with log-uniform
// significance, so all three classes are populated.
struct Small {
  dvp::ClassificationResult cls;
  dvp::PlannerInput in;
};

Small small_instance(std::mt19937_64& rng, dvp::Catalog catalog, double gamma_lo,
                     double gamma_hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(3, 12);
  const int n = count(rng);
  std::vector<dvp::DataPortion> ps;
  for (int i = 0; i < n; ++i) {
    const auto vol = static_cast<std::uint64_t>((0.5 + u(rng)) * (1ull << 30));
    ps.push_back({static_cast<std::uint64_t>(i), vol, 1, std::pow(10.0, 2.0 + 3.0 * u(rng)),
                  false, 0.0});
  }
  Small s;
  s.cls = dvp::classify_portions(ps);
  s.in.catalog = std::move(catalog);
  s.in.calibration.c_v = 0.5 * u(rng);
  s.in.calibration.c_s = 1e-4 * (0.2 + u(rng));
  s.in.calibration.gamma = gamma_lo + (gamma_hi - gamma_lo) * u(rng);
  // Deadline between the best achievable FT and the all-S1 class maximum.
  const auto work = [&] {
    dvp::PlannerInput probe = s.in;
    probe.classification = &s.cls;
    probe.slo = dvp::make_slo(1.0, "probe");
    return dvp::build_workloads(probe);
  }();
  double lo = 0.0, hi = 0.0;
  for (const auto& w : work) {
    if (w.empty()) continue;
    lo = std::max(lo, *std::min_element(w.pt.begin(), w.pt.end()));
    hi = std::max(hi, w.pt[0]);
  }
  s.in.slo = dvp::make_slo(lo * 0.9 + (hi * 1.1 - lo * 0.9) * u(rng), "generated");
  return s;
}

struct OracleTally {
  int instances = 0;
  int feasibility_disagreements = 0;
  int over_ratio = 0;
  int both_feasible = 0;
  double worst = 1.0;
};

OracleTally oracle_trial(std::uint64_t seed, int n,
                         const std::function<Small(std::mt19937_64&)>& gen) {
  OracleTally t;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    Small s = gen(rng);
    s.in.classification = &s.cls;
    std::optional<dvp::ProvisionPlan> dv, oracle;
    try {
      dv = dvp::plan_dv_aware(s.in);
    } catch (const dvp::InfeasibleSlo&) {
    }
    try {
      oracle = dvp::plan_oracle(s.in);
    } catch (const dvp::InfeasibleSlo&) {
    }
    ++t.instances;
    if (dv.has_value() != oracle.has_value()) {
      ++t.feasibility_disagreements;
      continue;
    }
    if (!dv) continue;
    ++t.both_feasible;
    const double ratio = dv->predicted_pc.to_double() / oracle->predicted_pc.to_double();
    t.worst = std::max(t.worst, ratio);
    if (ratio > 1.15) ++t.over_ratio;
  }
  return t;
}

dvp::Catalog jittered_five_tier(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> j(-0.05, 0.05);
  const auto base = dvp::Catalog::five_tier();
  std::vector<dvp::ServerType> servers(base.begin(), base.end());
  for (auto& s : servers) s.cptu = dvp::Money::from_double(s.cptu.to_double() * (1.0 + j(rng)));
  return dvp::Catalog(servers);  // +/-5% keeps the doubling prices ascending
}

void criterion3() {
  const auto t0 = Clock::now();
  const auto t = oracle_trial(3, 100, [](std::mt19937_64& rng) {
    return small_instance(rng, dvp::Catalog::five_tier(), 0.30, 0.48);
  });
  const double secs = seconds_since(t0);
  verdict(3, "oracle equivalence", t.feasibility_disagreements == 0 && t.over_ratio == 0 &&
                                       secs < 30.0,
          fmt("%d instances, %d both feasible, %d feasibility disagreements, %d above 1.15x, "
              "worst ratio %.4f; %.2f s",
              t.instances, t.both_feasible, t.feasibility_disagreements, t.over_ratio, t.worst,
              secs));
  const auto jitter = oracle_trial(33, 1000, [](std::mt19937_64& rng) {
    return small_instance(rng, jittered_five_tier(rng), 0.30, 0.48);
  });
  note(fmt("diagnostic, prices jittered +/-5%%: %d of %d feasible instances above 1.15x "
           "(worst %.3f), %d feasibility disagreements",
           jitter.over_ratio, jitter.both_feasible, jitter.worst,
           jitter.feasibility_disagreements));
  const auto steep = oracle_trial(34, 1000, [](std::mt19937_64& rng) {
    return small_instance(rng, dvp::Catalog::five_tier(), 0.50, 1.00);
  });
  note(fmt("diagnostic, speedup exponent in [0.5, 1]: %d of %d feasible instances above 1.15x "
           "(worst %.3f), %d feasibility disagreements",
           steep.over_ratio, steep.both_feasible, steep.worst, steep.feasibility_disagreements));
}

void criterion4() {
  const auto t0 = Clock::now();
  const auto words = dvp::SignificanceMeasure::word_count();
  int within = 0;
  double worst = 0.0;
  constexpr int kTrials = 200;
  for (int trial = 0; trial < kTrials; ++trial) {
    const dvp::SyntheticCorpus corpus(dvp::SyntheticSpec::parse("uniform:1:10:1:100000"),
                                      1000 + trial);
    const auto& portion = corpus.portion(0);
    double exact = 0.0;
    for (std::uint64_t i = 0; i < portion.record_count(); ++i) exact += portion.words_in(i);
    dvp::SamplingSpec spec;
    spec.seed = 7000 + trial;
    const auto est = dvp::estimate_significance(portion, 0, words, spec);
    const double err = std::fabs(est.estimate - exact) / exact;
    worst = std::max(worst, err);
    if (err <= 0.05) ++within;
  }
  const double secs = seconds_since(t0);
  verdict(4, "sampling accuracy", within >= 180 && secs < 60.0,
          fmt("%d of %d trials within 5%% (need 180), worst error %.2f%%; %.2f s", within,
              kTrials, worst * 100, secs));
}

class Constant : public dvp::RecordSource {
 public:
  explicit Constant(std::uint64_t n) : n_(n) {}
  std::uint64_t record_count() const override { return n_; }
  std::string_view record(std::uint64_t, std::string&) const override { return "a b"; }

 private:
  std::uint64_t n_;
};

void criterion5() {
  const dvp::SamplingSpec spec;
  std::uint64_t violations = 0, largest_n = 0;
  // Every population size from 10^5 to 2*10^6, then decades up to 10^12.
  for (std::uint64_t n = 100'000; n <= 2'000'000; ++n) {
    const auto s = dvp::cochran_sample_size(spec, n);
    largest_n = std::max(largest_n, s);
    if (s > 385 || !(static_cast<double>(s) / static_cast<double>(n) < 0.01)) ++violations;
  }
  for (std::uint64_t n = 10'000'000; n <= 1'000'000'000'000ull; n *= 10) {
    const auto s = dvp::cochran_sample_size(spec, n);
    largest_n = std::max(largest_n, s);
    if (s > 385 || !(static_cast<double>(s) / static_cast<double>(n) < 0.01)) ++violations;
  }
  // And through the estimator itself.
  double max_overhead = 0.0;
  for (std::uint64_t n : {100'000ull, 250'000ull, 1'000'000ull, 5'000'000ull}) {
    const auto e = dvp::estimate_significance(Constant(n), 0,
                                              dvp::SignificanceMeasure::word_count(), spec);
    max_overhead = std::max(max_overhead, e.overhead_fraction());
    if (!(e.overhead_fraction() < 0.01)) ++violations;
  }
  verdict(5, "sampling overhead below 1%", violations == 0,
          fmt("%llu violations; largest sample %llu; estimator overhead at most %.4f%%",
              static_cast<unsigned long long>(violations),
              static_cast<unsigned long long>(largest_n), max_overhead * 100));
}

void criterion6() {
  const auto t0 = Clock::now();
  const auto outcomes = props::invariant_suite(20240611, 1000);
  bool ok = true;
  int min_cases = 1 << 30;
  for (const auto& o : outcomes) {
    ok = ok && o.ok() && o.cases >= 1000;
    min_cases = std::min(min_cases, o.cases);
  }
  verdict(6, "invariant suite", ok,
          fmt("%zu properties, at least %d cases each; %.2f s", outcomes.size(), min_cases,
              seconds_since(t0)));
  for (const auto& o : outcomes) {
    note(fmt("%s: %d cases, %d failures%s%s", o.name.c_str(), o.cases, o.failures,
             o.failures ? "; first " : "", o.first_failure.c_str()));
  }
}

double plan_seconds(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<dvp::DataPortion> ps;
  for (std::size_t i = 0; i < n; ++i) {
    ps.push_back({i, 1ull << 27, 100, 1000.0 * std::pow(u(rng), 3.0), false, 0.0});
  }
  const auto cls = dvp::classify_portions(ps);
  dvp::PlannerInput in;
  in.classification = &cls;
  in.catalog = dvp::Catalog::five_tier();
  in.calibration.c_v = 0.0;
  in.calibration.c_s = 19.2 / (250.0 * static_cast<double>(n));
  in.calibration.gamma = 0.48;
  in.slo = dvp::make_slo(10.0, "strict");
  double best = 1e300;
  for (int rep = 0; rep < 15; ++rep) {
    const auto t0 = Clock::now();
    const auto plan = dvp::plan_dv_aware(in);
    const double s = seconds_since(t0);
    if (plan.assignment.empty()) return -1.0;
    best = std::min(best, s);
  }
  return best;
}

void criterion7() {
  plan_seconds(2000);  // warm-up
  const double small = plan_seconds(5000);
  const double large = plan_seconds(10000);
  const double ratio = large / small;
  verdict(7, "planner scales linearly", small > 0 && ratio <= 2.5,
          fmt("n=5000 %.3f ms, n=10000 %.3f ms, ratio %.2f (limit 2.5)", small * 1e3, large * 1e3,
              ratio));
}

void criterion8() {
  const dvp::SamplingSpec spec;
  const auto big = dvp::cochran_sample_size(spec, 1'000'000'000);
  const auto hundred = dvp::cochran_sample_size(spec, 100);
  verdict(8, "Cochran sample sizes", big == 385 && hundred == 80,
          fmt("N=10^9 gives %llu (expect 385), N=100 gives %llu (expect 80)",
              static_cast<unsigned long long>(big), static_cast<unsigned long long>(hundred)));
}

}  // namespace

int main() {
  const std::vector<void (*)()> criteria = {criterion1, criterion2, criterion3, criterion4,
                                            criterion5, criterion6, criterion7, criterion8};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(static_cast<int>(i + 1), "aborted", false, e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
