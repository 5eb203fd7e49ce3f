#include "dvplan/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "dvplan/error.hpp"

namespace dvp {

EfValues compute_ef(std::span<const DataPortion> portions) {
  double total_sig = 0.0;
  double total_vol = 0.0;
  for (const auto& p : portions) {
    if (!(p.significance >= 0.0)) {
      throw Error(ErrorKind::kInvalidInput, "significance must be >= 0");
    }
    total_sig += p.significance;
    total_vol += static_cast<double>(p.volume_bytes);
  }
  if (total_vol <= 0.0) throw Error(ErrorKind::kInvalidInput, "total volume is zero");

  EfValues out;
  out.ef.reserve(portions.size());
  if (total_sig == 0.0) {
    out.degenerate = true;
    out.ef.assign(portions.size(), 1.0);
    return out;
  }
  for (const auto& p : portions) {
    if (p.volume_bytes == 0) {
      // A zero-volume portion has no share to normalise by. It carries no
      // work either, so it is treated as average.
      out.ef.push_back(1.0);
      continue;
    }
    out.ef.push_back((p.significance / total_sig) /
                     (static_cast<double>(p.volume_bytes) / total_vol));
  }
  return out;
}

void ClassBoundaries::validate() const {
  if (!(msdt >= 0.0 && msdt <= mesdt && mesdt <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "class boundaries must satisfy 0 <= msdt <= mesdt <= 1");
  }
}

ClassKind ClassificationResult::class_of(std::uint64_t portion_id) const {
  for (const auto& c : classes) {
    if (std::binary_search(c.portions.begin(), c.portions.end(), portion_id)) return c.kind;
  }
  throw Error(ErrorKind::kInvalidInput, "portion " + std::to_string(portion_id) + " unclassified");
}

ClassificationResult classify(std::span<const DataPortion> portions,
                              std::span<const double> ef_values,
                              const ClassBoundaries& boundaries, bool degenerate) {
  boundaries.validate();
  if (ef_values.size() != portions.size()) {
    throw Error(ErrorKind::kInvalidInput, "EF values not aligned with portions");
  }
  ClassificationResult r;
  r.boundaries = boundaries;
  r.degenerate = degenerate;
  r.portions.assign(portions.begin(), portions.end());
  for (std::size_t i = 0; i < r.portions.size(); ++i) {
    if (r.portions[i].id != i) {
      throw Error(ErrorKind::kInvalidInput, "portions must be indexed by id");
    }
    r.portions[i].ef = ef_values[i];
  }
  for (ClassKind k : kAllClasses) r.classes[static_cast<int>(k)].kind = k;

  std::vector<std::size_t> order(portions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ef_values[a] > ef_values[b]; });

  double total_vol = 0.0;
  for (const auto& p : portions) total_vol += static_cast<double>(p.volume_bytes);
  // Cuts landing on a portion edge up to rounding count as reached.
  constexpr double kEdge = 1.0 - 1e-12;
  const double cut_ms = boundaries.msdt * total_vol * kEdge;
  const double cut_me = boundaries.mesdt * total_vol * kEdge;

  double before = 0.0;
  for (std::size_t idx : order) {
    const DataPortion& p = r.portions[idx];
    ClassKind k = ClassKind::kLsdt;
    if (before < cut_ms) {
      k = ClassKind::kMsdt;
    } else if (before < cut_me) {
      k = ClassKind::kMesdt;
    }
    VarietyClass& c = r.classes[static_cast<int>(k)];
    c.portions.push_back(p.id);
    before += static_cast<double>(p.volume_bytes);
  }
  for (auto& c : r.classes) {
    std::sort(c.portions.begin(), c.portions.end());
    for (auto id : c.portions) {
      c.total_volume += r.portions[id].volume_bytes;
      c.total_significance += r.portions[id].significance;
    }
  }
  return r;
}

ClassificationResult classify_portions(std::span<const DataPortion> portions,
                                       const ClassBoundaries& boundaries) {
  const EfValues ef = compute_ef(portions);
  return classify(portions, ef.ef, boundaries, ef.degenerate);
}

void write_classification(std::ostream& out, const ClassificationResult& r) {
  nlohmann::ordered_json j;
  j["degenerate"] = r.degenerate;
  j["boundaries"] = {r.boundaries.msdt, r.boundaries.mesdt};
  auto& arr = j["portions"] = nlohmann::ordered_json::array();
  for (const auto& p : r.portions) {
    nlohmann::ordered_json e;
    e["id"] = p.id;
    e["ef"] = p.ef;
    e["class"] = to_string(r.class_of(p.id));
    e["volume_bytes"] = p.volume_bytes;
    e["record_count"] = p.record_count;
    e["significance"] = p.significance;
    e["estimated"] = p.significance_is_estimate;
    arr.push_back(std::move(e));
  }
  out << j.dump(2) << '\n';
}

ClassificationResult read_classification(std::istream& in) {
  ClassificationResult r;
  try {
    const auto j = nlohmann::json::parse(in);
    r.degenerate = j.at("degenerate").get<bool>();
    const auto b = j.at("boundaries");
    r.boundaries = {b.at(0).get<double>(), b.at(1).get<double>()};
    r.boundaries.validate();
    for (ClassKind k : kAllClasses) r.classes[static_cast<int>(k)].kind = k;
    for (const auto& e : j.at("portions")) {
      DataPortion p;
      p.id = e.at("id").get<std::uint64_t>();
      p.ef = e.at("ef").get<double>();
      p.volume_bytes = e.at("volume_bytes").get<std::uint64_t>();
      p.record_count = e.at("record_count").get<std::uint64_t>();
      p.significance = e.at("significance").get<double>();
      p.significance_is_estimate = e.at("estimated").get<bool>();
      if (p.id != r.portions.size()) {
        throw Error(ErrorKind::kInvalidInput, "classification portions must be listed by id");
      }
      const ClassKind k = parse_class_kind(e.at("class").get<std::string>());
      VarietyClass& c = r.classes[static_cast<int>(k)];
      c.portions.push_back(p.id);
      c.total_volume += p.volume_bytes;
      c.total_significance += p.significance;
      r.portions.push_back(p);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad classification: ") + ex.what());
  }
  return r;
}

}  // namespace dvp
