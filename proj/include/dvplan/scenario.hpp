#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dvplan/classifier.hpp"
#include "dvplan/corpus.hpp"
#include "dvplan/cost_model.hpp"
#include "dvplan/model.hpp"
#include "dvplan/planner.hpp"
#include "dvplan/sampling.hpp"

namespace dvp {

// A job description. Missing keys in the JSON file take these defaults: the
// five-server catalog, the WordCount strict/normal deadlines (10 h / 11 h),
// word_count significance and 128 MiB portions.
struct Scenario {
  std::string name = "scenario";
  SignificanceMeasure measure = SignificanceMeasure::word_count();
  Catalog catalog = Catalog::five_tier();
  std::vector<Slo> slos = {Slo{10.0, "strict"}, Slo{11.0, "normal"}};
  CostCalibration calibration;
  std::uint64_t portion_size_bytes = kDefaultPortionSize;
  std::uint64_t rng_seed = 0;
  SamplingSpec sampling;
  ClassBoundaries boundaries;
  BaselineTiers tiers;
  std::optional<std::string> synthetic;
  int num_servers = 3;  // recorded only; the planner uses one server per class

  const Slo& slo(std::string_view condition) const;
  SamplingSpec sampling_spec() const;
};

Scenario read_scenario(std::istream& in);
void write_scenario(std::ostream& out, const Scenario& s);

}  // namespace dvp
