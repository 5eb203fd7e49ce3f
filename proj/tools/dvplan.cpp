// dvplan: data-variety-aware provisioning planner.
//
// Stages: chunk -> profile -> classify -> plan -> simulate, each reading the
// previous stage's file; `compare` runs the whole pipeline and `calibrate`
// fits the processing-time model from measured runs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dvplan/classifier.hpp"
#include "dvplan/corpus.hpp"
#include "dvplan/cost_model.hpp"
#include "dvplan/error.hpp"
#include "dvplan/planner.hpp"
#include "dvplan/report.hpp"
#include "dvplan/sampling.hpp"
#include "dvplan/scenario.hpp"
#include "dvplan/simulator.hpp"
#include "dvplan/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dvp::Error(dvp::ErrorKind::kIo, "cannot open '" + path + "'");
  return in;
}

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw dvp::Error(dvp::ErrorKind::kIo, "cannot write '" + path + "'");
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream os;
  w(os);
  return os.str();
}

dvp::Scenario load_scenario(const std::string& path) {
  if (path.empty()) return dvp::Scenario{};
  auto in = open_in(path);
  return dvp::read_scenario(in);
}

char parse_delimiter(const std::string& text) {
  if (text == "\\n" || text == "newline") return '\n';
  if (text == "\\t" || text == "tab") return '\t';
  if (text.size() != 1) {
    throw dvp::Error(dvp::ErrorKind::kUsage, "delimiter must be a single character");
  }
  return text[0];
}

int exit_code_for(const dvp::Error& e) {
  switch (e.kind()) {
    case dvp::ErrorKind::kUsage: return kExitUsage;
    case dvp::ErrorKind::kIo: return kExitIo;
    case dvp::ErrorKind::kInfeasibleSlo: return kExitInfeasible;
    default: return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-variety-aware server provisioning planner and cost simulator"};
  app.require_subcommand(1);

  // chunk
  auto* chunk_cmd = app.add_subcommand("chunk", "Split input files into record-aligned portions");
  std::vector<std::string> chunk_inputs;
  std::string chunk_synthetic;
  std::string chunk_corpus_out;
  std::uint64_t chunk_size = dvp::kDefaultPortionSize;
  std::string chunk_delim = "\\n";
  std::uint64_t chunk_seed = 0;
  std::string chunk_out;
  chunk_cmd->add_option("-i,--input", chunk_inputs, "Input files, split one after another");
  chunk_cmd->add_option("--synthetic", chunk_synthetic,
                        "Generate a corpus instead: zipf:<s>:<portions>:<records> or "
                        "uniform:<lo>:<hi>:<portions>:<records>");
  chunk_cmd->add_option("--corpus-out", chunk_corpus_out,
                        "Where --synthetic writes the generated corpus");
  chunk_cmd->add_option("--portion-size", chunk_size, "Portion size, e.g. 134217728 or 128MiB")
      ->transform(CLI::AsSizeValue(false))
      ->capture_default_str();
  chunk_cmd->add_option("--delimiter", chunk_delim, "Record delimiter (default newline)");
  chunk_cmd->add_option("--seed", chunk_seed, "Seed for --synthetic");
  chunk_cmd->add_option("-o,--out", chunk_out, "Manifest output (JSON lines), default stdout");

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "Estimate per-portion significance by sampling");
  std::string profile_manifest_path;
  std::string profile_scenario;
  std::string profile_measure;
  std::optional<std::uint64_t> profile_seed;
  unsigned profile_threads = 0;
  std::string profile_out;
  profile_cmd->add_option("-m,--manifest", profile_manifest_path, "Manifest from `chunk`")->required();
  profile_cmd->add_option("-s,--scenario", profile_scenario,
                          "Scenario file (measure, sampling spec, seed)");
  profile_cmd->add_option("--measure", profile_measure, "Override the scenario's measure");
  profile_cmd->add_option("--seed", profile_seed, "Override the scenario's seed");
  profile_cmd->add_option("-j,--threads", profile_threads, "Worker threads (0: all cores)");
  profile_cmd->add_option("-o,--out", profile_out, "Profile output (JSON lines)");

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Compute EF and split portions into classes");
  std::string classify_manifest;
  std::string classify_profile;
  std::string classify_scenario;
  std::string classify_out;
  classify_cmd->add_option("-m,--manifest", classify_manifest, "Manifest from `chunk`")->required();
  classify_cmd->add_option("-p,--profile", classify_profile, "Profile from `profile`")->required();
  classify_cmd->add_option("-s,--scenario", classify_scenario, "Scenario (class boundaries)");
  classify_cmd->add_option("-o,--out", classify_out, "Classification output (JSON)");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Assign servers to classes");
  std::string plan_classification;
  std::string plan_scenario;
  std::string plan_condition;
  std::string plan_strategy = "dv";
  std::string plan_out;
  plan_cmd->add_option("-c,--classification", plan_classification, "Output of `classify`")
      ->required();
  plan_cmd->add_option("-s,--scenario", plan_scenario, "Scenario file")->required();
  plan_cmd->add_option("--condition", plan_condition,
                       "SLO condition name (default: first in scenario)");
  plan_cmd->add_option("--strategy", plan_strategy, "dv, weak, moderate, strong or oracle")
      ->check(CLI::IsMember({"dv", "weak", "moderate", "strong", "oracle"}))
      ->capture_default_str();
  plan_cmd->add_option("-o,--out", plan_out, "Plan output (JSON)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a plan and check its predictions");
  std::string sim_plan;
  std::string sim_classification;
  std::string sim_scenario;
  std::string sim_out;
  std::string sim_curve;
  sim_cmd->add_option("--plan", sim_plan, "Output of `plan`")->required();
  sim_cmd->add_option("-c,--classification", sim_classification, "Output of `classify`")
      ->required();
  sim_cmd->add_option("-s,--scenario", sim_scenario, "Scenario file (calibration)")->required();
  sim_cmd->add_option("-o,--out", sim_out, "Simulation result (JSON)");
  sim_cmd->add_option("--curve", sim_curve, "Write the progress curve as two columns");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Run the full pipeline and compare strategies");
  std::string cmp_scenario;
  std::vector<std::string> cmp_inputs;
  std::string cmp_synthetic;
  std::string cmp_format = "table";
  unsigned cmp_threads = 0;
  std::string cmp_out;
  cmp_cmd->add_option("-s,--scenario", cmp_scenario, "Scenario file")->required();
  cmp_cmd->add_option("-i,--input", cmp_inputs, "Corpus files");
  cmp_cmd->add_option("--synthetic", cmp_synthetic,
                      "Synthetic corpus spec; overrides the scenario's `synthetic` key");
  cmp_cmd->add_option("-f,--format", cmp_format, "table, csv or plot")
      ->check(CLI::IsMember({"table", "csv", "plot"}))
      ->capture_default_str();
  cmp_cmd->add_option("-j,--threads", cmp_threads, "Profiling threads (0: all cores)");
  cmp_cmd->add_option("-o,--out", cmp_out, "Report output, default stdout");

  // calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit the processing-time model to measured runs");
  std::string cal_runs;
  int cal_reference = 4;
  std::string cal_out;
  cal_cmd->add_option("-r,--runs", cal_runs,
                      "JSON lines {volume_bytes, significance, vcpus, pt_hours}")
      ->required();
  cal_cmd->add_option("--reference-vcpus", cal_reference, "vCPUs of the unit-speed server")
      ->capture_default_str();
  cal_cmd->add_option("-o,--out", cal_out, "Calibration output (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*chunk_cmd) {
      dvp::PortionManifest manifest;
      if (!chunk_synthetic.empty()) {
        if (!chunk_inputs.empty() || chunk_corpus_out.empty()) {
          throw dvp::Error(dvp::ErrorKind::kUsage,
                           "--synthetic needs --corpus-out and no --input");
        }
        const dvp::SyntheticCorpus corpus(dvp::SyntheticSpec::parse(chunk_synthetic), chunk_seed);
        corpus.write_to(chunk_corpus_out);
        manifest = dvp::chunk({chunk_corpus_out},
                              corpus.spec().records * dvp::kSyntheticRecordBytes, '\n');
      } else {
        if (chunk_inputs.empty()) {
          throw dvp::Error(dvp::ErrorKind::kUsage, "chunk needs --input or --synthetic");
        }
        std::vector<std::filesystem::path> paths(chunk_inputs.begin(), chunk_inputs.end());
        manifest = dvp::chunk(paths, chunk_size, parse_delimiter(chunk_delim));
      }
      emit(chunk_out, render([&](std::ostream& os) { dvp::write_manifest(os, manifest); }));
      return kExitOk;
    }

    if (*profile_cmd) {
      dvp::Scenario scenario = load_scenario(profile_scenario);
      if (!profile_measure.empty()) {
        scenario.measure = dvp::SignificanceMeasure::parse(profile_measure);
      }
      if (profile_seed) scenario.rng_seed = *profile_seed;
      auto in = open_in(profile_manifest_path);
      const auto manifest = dvp::read_manifest(in);
      const auto estimates = dvp::profile_manifest(manifest, scenario.measure,
                                                   scenario.sampling_spec(), profile_threads);
      emit(profile_out, render([&](std::ostream& os) { dvp::write_profile(os, estimates); }));
      std::fprintf(stderr, "sampling overhead: %.6f%%\n",
                   dvp::sampling_overhead(estimates) * 100.0);
      return kExitOk;
    }

    if (*classify_cmd) {
      const dvp::Scenario scenario = load_scenario(classify_scenario);
      auto min = open_in(classify_manifest);
      const auto manifest = dvp::read_manifest(min);
      auto pin = open_in(classify_profile);
      const auto estimates = dvp::read_profile(pin);
      if (estimates.size() != manifest.portions.size()) {
        throw dvp::Error(dvp::ErrorKind::kInvalidInput, "profile and manifest disagree on portions");
      }
      std::vector<dvp::DataPortion> portions;
      for (std::size_t i = 0; i < manifest.portions.size(); ++i) {
        const auto& e = manifest.portions[i];
        if (estimates[i].portion_id != e.id) {
          throw dvp::Error(dvp::ErrorKind::kInvalidInput, "profile is not in manifest order");
        }
        portions.push_back({e.id, e.length, e.records, estimates[i].estimate, true, 0.0});
      }
      dvp::ClassificationResult result;
      if (!portions.empty()) result = dvp::classify_portions(portions, scenario.boundaries);
      emit(classify_out, render([&](std::ostream& os) { dvp::write_classification(os, result); }));
      return kExitOk;
    }

    if (*plan_cmd) {
      const dvp::Scenario scenario = load_scenario(plan_scenario);
      auto cin = open_in(plan_classification);
      const auto classification = dvp::read_classification(cin);
      const dvp::Slo slo =
          plan_condition.empty() ? scenario.slos.at(0) : scenario.slo(plan_condition);
      const dvp::PlannerInput input{&classification, scenario.catalog, slo,
                                    scenario.calibration, scenario.tiers};
      dvp::ProvisionPlan plan;
      if (plan_strategy == "dv") {
        plan = dvp::plan_dv_aware(input);
      } else if (plan_strategy == "oracle") {
        plan = dvp::plan_oracle(input);
      } else {
        plan = dvp::plan_baseline(input, plan_strategy == "weak"       ? dvp::BaselineTier::kWeak
                                         : plan_strategy == "moderate" ? dvp::BaselineTier::kModerate
                                                                       : dvp::BaselineTier::kStrong);
      }
      emit(plan_out, render([&](std::ostream& os) { dvp::write_plan(os, plan); }));
      return kExitOk;
    }

    if (*sim_cmd) {
      const dvp::Scenario scenario = load_scenario(sim_scenario);
      auto pin = open_in(sim_plan);
      const auto plan = dvp::read_plan(pin);
      auto cin = open_in(sim_classification);
      const auto classification = dvp::read_classification(cin);
      const auto sim = dvp::simulate(plan, classification, scenario.calibration);
      dvp::verify_plan(plan, sim, plan.slo);
      emit(sim_out, render([&](std::ostream& os) { dvp::write_simulation(os, sim); }));
      if (!sim_curve.empty()) {
        emit(sim_curve, render([&](std::ostream& os) { dvp::write_curve(os, sim.curve); }));
      }
      return kExitOk;
    }

    if (*cmp_cmd) {
      const dvp::Scenario scenario = load_scenario(cmp_scenario);
      dvp::CorpusInput corpus;
      if (!cmp_synthetic.empty()) {
        corpus.synthetic = dvp::SyntheticSpec::parse(cmp_synthetic);
      } else if (!cmp_inputs.empty()) {
        corpus.paths.assign(cmp_inputs.begin(), cmp_inputs.end());
      } else if (scenario.synthetic) {
        corpus.synthetic = dvp::SyntheticSpec::parse(*scenario.synthetic);
      } else {
        throw dvp::Error(dvp::ErrorKind::kUsage,
                         "compare needs --input, --synthetic or a scenario `synthetic` key");
      }
      const auto result = dvp::run_pipeline(scenario, corpus, cmp_threads);
      emit(cmp_out, dvp::emit_report(result, dvp::parse_report_format(cmp_format)));
      return result.report.dv_infeasible() ? kExitInfeasible : kExitOk;
    }

    if (*cal_cmd) {
      auto in = open_in(cal_runs);
      const auto runs = dvp::read_profile_runs(in);
      const auto cal = dvp::calibrate(runs, cal_reference);
      emit(cal_out, render([&](std::ostream& os) { dvp::write_calibration(os, cal); }));
      return kExitOk;
    }
  } catch (const dvp::Error& e) {
    std::fprintf(stderr, "dvplan: %s error: %s\n", dvp::to_string(e.kind()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dvplan: %s\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
