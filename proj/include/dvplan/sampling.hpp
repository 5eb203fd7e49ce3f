#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "dvplan/corpus.hpp"

namespace dvp {

// Defaults give the 95% confidence / 5% margin sizing with the
// maximum-variance prior p = 0.5.
struct SamplingSpec {
  double confidence_z = 1.96;
  double margin_e = 0.05;
  double p = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SignificanceEstimate {
  std::uint64_t portion_id = 0;
  double estimate = 0.0;
  std::uint64_t records_sampled = 0;
  std::uint64_t records_total = 0;
  bool empty_portion = false;

  double overhead_fraction() const {
    return records_total == 0 ? 0.0
                              : static_cast<double>(records_sampled) /
                                    static_cast<double>(records_total);
  }
};

// Cochran: n0 = z^2 p (1-p) / e^2, then n = n0 / (1 + (n0 - 1) / N),
// rounded up and clamped to [1, N].
std::uint64_t cochran_sample_size(const SamplingSpec& spec, std::uint64_t population_n);

// Uniform sample without replacement, seeded from (spec.seed, portion_id),
// scaled up by N / n.
SignificanceEstimate estimate_significance(const RecordSource& portion,
                                           std::uint64_t portion_id,
                                           const SignificanceMeasure& measure,
                                           const SamplingSpec& spec);

// Runs estimate_one(i) for i in [0, count) over `threads` workers (0: one
// per hardware thread). Output is indexed by i regardless of completion order.
std::vector<SignificanceEstimate> estimate_all(
    std::size_t count, const std::function<SignificanceEstimate(std::size_t)>& estimate_one,
    unsigned threads = 0);

std::vector<SignificanceEstimate> estimate_all(std::span<const RecordSource* const> portions,
                                               const SignificanceMeasure& measure,
                                               const SamplingSpec& spec,
                                               unsigned threads = 0);

// Loads each manifest portion from disk inside the worker that samples it.
std::vector<SignificanceEstimate> profile_manifest(const PortionManifest& manifest,
                                                   const SignificanceMeasure& measure,
                                                   const SamplingSpec& spec,
                                                   unsigned threads = 0);

// Sum of sampled records over sum of total records.
double sampling_overhead(std::span<const SignificanceEstimate> estimates);

// JSON lines {id, estimate, records_sampled, records_total}.
void write_profile(std::ostream& out, std::span<const SignificanceEstimate> estimates);
std::vector<SignificanceEstimate> read_profile(std::istream& in);

}  // namespace dvp
