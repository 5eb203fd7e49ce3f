#include "dvplan/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <ranges>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "dvplan/error.hpp"
#include "dvplan/synthetic.hpp"

namespace dvp {

void SamplingSpec::validate() const {
  if (!(confidence_z > 0.0)) throw Error(ErrorKind::kInvalidInput, "confidence z must be > 0");
  if (!(margin_e > 0.0 && margin_e <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "margin of error must be in (0, 1]");
  }
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::kInvalidInput, "p must be in (0, 1)");
}

std::uint64_t cochran_sample_size(const SamplingSpec& spec, std::uint64_t population_n) {
  spec.validate();
  if (population_n < 1) throw Error(ErrorKind::kInvalidInput, "population must be >= 1");
  const double n0 =
      spec.confidence_z * spec.confidence_z * spec.p * (1.0 - spec.p) /
      (spec.margin_e * spec.margin_e);
  const double big_n = static_cast<double>(population_n);
  const double n = n0 / (1.0 + (n0 - 1.0) / big_n);
  const double rounded = std::ceil(n);
  if (rounded <= 1.0) return 1;
  if (rounded >= big_n) return population_n;
  return static_cast<std::uint64_t>(rounded);
}

SignificanceEstimate estimate_significance(const RecordSource& portion,
                                           std::uint64_t portion_id,
                                           const SignificanceMeasure& measure,
                                           const SamplingSpec& spec) {
  SignificanceEstimate est;
  est.portion_id = portion_id;
  est.records_total = portion.record_count();
  if (est.records_total == 0) {
    spec.validate();
    est.empty_portion = true;
    return est;
  }
  const std::uint64_t n = cochran_sample_size(spec, est.records_total);

  std::vector<std::uint64_t> picked(n);
  std::mt19937_64 rng(mix_seed(spec.seed, portion_id));
  auto all = std::views::iota(std::uint64_t{0}, est.records_total);
  // iota over uint64 is only an input range here, so sample() fills a
  // random-access output in reservoir order; sort for sequential reads.
  const auto end = std::ranges::sample(all, picked.begin(), static_cast<std::ptrdiff_t>(n), rng);
  picked.erase(end, picked.end());
  std::ranges::sort(picked);

  double sum = 0.0;
  std::string scratch;
  for (std::uint64_t idx : picked) {
    const auto c = measure.evaluate(portion.record(idx, scratch));
    if (!c.malformed) sum += c.value;
  }
  est.records_sampled = picked.size();
  if (est.records_sampled == est.records_total) {
    est.estimate = sum;
  } else {
    est.estimate = sum * static_cast<double>(est.records_total) /
                   static_cast<double>(est.records_sampled);
  }
  return est;
}

std::vector<SignificanceEstimate> estimate_all(
    std::size_t count, const std::function<SignificanceEstimate(std::size_t)>& estimate_one,
    unsigned threads) {
  std::vector<SignificanceEstimate> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) out[i] = estimate_one(i);
  };
  if (threads <= 1) {
    work();
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          work();
        } catch (...) {
          errors[t] = std::current_exception();
          next = count;
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<SignificanceEstimate> estimate_all(std::span<const RecordSource* const> portions,
                                               const SignificanceMeasure& measure,
                                               const SamplingSpec& spec, unsigned threads) {
  spec.validate();
  return estimate_all(
      portions.size(),
      [&](std::size_t i) { return estimate_significance(*portions[i], i, measure, spec); },
      threads);
}

std::vector<SignificanceEstimate> profile_manifest(const PortionManifest& manifest,
                                                   const SignificanceMeasure& measure,
                                                   const SamplingSpec& spec, unsigned threads) {
  spec.validate();
  return estimate_all(
      manifest.portions.size(),
      [&](std::size_t i) {
        const FilePortion portion(manifest.portions[i], manifest.delimiter);
        return estimate_significance(portion, manifest.portions[i].id, measure, spec);
      },
      threads);
}

double sampling_overhead(std::span<const SignificanceEstimate> estimates) {
  std::uint64_t sampled = 0;
  std::uint64_t total = 0;
  for (const auto& e : estimates) {
    sampled += e.records_sampled;
    total += e.records_total;
  }
  if (total == 0) return 0.0;
  return static_cast<double>(sampled) / static_cast<double>(total);
}

void write_profile(std::ostream& out, std::span<const SignificanceEstimate> estimates) {
  for (const auto& e : estimates) {
    nlohmann::ordered_json j;
    j["id"] = e.portion_id;
    j["estimate"] = e.estimate;
    j["records_sampled"] = e.records_sampled;
    j["records_total"] = e.records_total;
    out << j.dump() << '\n';
  }
}

std::vector<SignificanceEstimate> read_profile(std::istream& in) {
  std::vector<SignificanceEstimate> out;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto j = nlohmann::json::parse(line);
      SignificanceEstimate e;
      e.portion_id = j.at("id").get<std::uint64_t>();
      e.estimate = j.at("estimate").get<double>();
      e.records_sampled = j.at("records_sampled").get<std::uint64_t>();
      e.records_total = j.at("records_total").get<std::uint64_t>();
      e.empty_portion = e.records_total == 0;
      if (e.records_sampled > e.records_total) {
        throw Error(ErrorKind::kInvalidInput, "profile line samples more records than exist");
      }
      out.push_back(e);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad profile: ") + ex.what());
  }
  return out;
}

}  // namespace dvp
