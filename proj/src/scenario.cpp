#include "dvplan/scenario.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "dvplan/error.hpp"

namespace dvp {

const Slo& Scenario::slo(std::string_view condition) const {
  for (const auto& s : slos) {
    if (s.condition_name == condition) return s;
  }
  throw Error(ErrorKind::kUsage, "scenario has no SLO condition '" + std::string(condition) + "'");
}

SamplingSpec Scenario::sampling_spec() const {
  SamplingSpec spec = sampling;
  spec.seed = rng_seed;
  return spec;
}

Scenario read_scenario(std::istream& in) {
  Scenario s;
  try {
    const auto j = nlohmann::json::parse(in);
    s.name = j.value("name", s.name);
    if (j.contains("measure")) {
      s.measure = SignificanceMeasure::parse(j.at("measure").get<std::string>());
    }
    s.measure.set_case_fold(j.value("case_fold", false));
    const std::string delim = j.value("field_delimiter", std::string(","));
    if (delim.size() != 1) throw Error(ErrorKind::kInvalidInput, "field_delimiter must be one character");
    s.measure.set_field_delimiter(delim[0]);

    if (j.contains("catalog")) {
      std::vector<ServerType> servers;
      for (const auto& e : j.at("catalog")) {
        const auto& cptu = e.at("cptu");
        servers.push_back({e.at("name").get<std::string>(), e.at("vcpus").get<int>(),
                           e.at("memory_gib").get<int>(),
                           cptu.is_string() ? Money::parse(cptu.get<std::string>())
                                            : Money::from_double(cptu.get<double>())});
      }
      s.catalog = Catalog(std::move(servers));
    }
    if (j.contains("slos")) {
      s.slos.clear();
      for (const auto& e : j.at("slos")) {
        s.slos.push_back(
            make_slo(e.at("pft_hours").get<double>(), e.at("condition").get<std::string>()));
      }
    }
    if (j.contains("calibration")) {
      const auto& c = j.at("calibration");
      s.calibration.c_v = c.at("c_v").get<double>();
      s.calibration.c_s = c.at("c_s").get<double>();
      s.calibration.gamma = c.value("gamma", 1.0);
      s.calibration.reference_vcpus = c.value("reference_vcpus", 4);
      s.calibration.memory_penalty_per_gib = c.value("memory_penalty_per_gib", 0.0);
    }
    s.calibration.validate();
    s.portion_size_bytes = j.value("portion_size_bytes", s.portion_size_bytes);
    if (s.portion_size_bytes == 0) throw Error(ErrorKind::kInvalidInput, "portion_size_bytes must be > 0");
    s.rng_seed = j.value("seed", s.rng_seed);
    if (j.contains("sampling")) {
      const auto& c = j.at("sampling");
      s.sampling.confidence_z = c.value("z", s.sampling.confidence_z);
      s.sampling.margin_e = c.value("margin", s.sampling.margin_e);
      s.sampling.p = c.value("p", s.sampling.p);
    }
    s.sampling.validate();
    if (j.contains("class_boundaries")) {
      const auto& b = j.at("class_boundaries");
      s.boundaries = {b.at(0).get<double>(), b.at(1).get<double>()};
    }
    s.boundaries.validate();
    if (j.contains("baseline_tiers")) {
      const auto& t = j.at("baseline_tiers");
      s.tiers.weak = t.value("weak", s.tiers.weak);
      s.tiers.moderate = t.value("moderate", s.tiers.moderate);
      s.tiers.strong = t.value("strong", s.tiers.strong);
    }
    for (const auto& name : {s.tiers.weak, s.tiers.moderate, s.tiers.strong}) {
      s.catalog.by_name(name);
    }
    if (j.contains("synthetic")) s.synthetic = j.at("synthetic").get<std::string>();
    s.num_servers = j.value("num_servers", s.num_servers);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad scenario: ") + ex.what());
  }
  return s;
}

void write_scenario(std::ostream& out, const Scenario& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["measure"] = s.measure.to_string();
  if (s.measure.case_fold()) j["case_fold"] = true;
  j["field_delimiter"] = std::string(1, s.measure.field_delimiter());
  auto& cat = j["catalog"] = nlohmann::ordered_json::array();
  for (const auto& srv : s.catalog) {
    cat.push_back({{"name", srv.name},
                   {"vcpus", srv.vcpus},
                   {"memory_gib", srv.memory_gib},
                   {"cptu", srv.cptu.to_string()}});
  }
  auto& slos = j["slos"] = nlohmann::ordered_json::array();
  for (const auto& slo : s.slos) {
    slos.push_back({{"condition", slo.condition_name}, {"pft_hours", slo.pft_hours}});
  }
  j["calibration"] = {{"c_v", s.calibration.c_v},
                      {"c_s", s.calibration.c_s},
                      {"gamma", s.calibration.gamma},
                      {"reference_vcpus", s.calibration.reference_vcpus}};
  j["portion_size_bytes"] = s.portion_size_bytes;
  j["seed"] = s.rng_seed;
  j["sampling"] = {{"z", s.sampling.confidence_z},
                   {"margin", s.sampling.margin_e},
                   {"p", s.sampling.p}};
  j["class_boundaries"] = {s.boundaries.msdt, s.boundaries.mesdt};
  j["baseline_tiers"] = {
      {"weak", s.tiers.weak}, {"moderate", s.tiers.moderate}, {"strong", s.tiers.strong}};
  if (s.synthetic) j["synthetic"] = *s.synthetic;
  j["num_servers"] = s.num_servers;
  out << j.dump(2) << '\n';
}

}  // namespace dvp
