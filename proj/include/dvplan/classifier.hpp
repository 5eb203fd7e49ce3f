#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "dvplan/model.hpp"

namespace dvp {

struct EfValues {
  std::vector<double> ef;
  bool degenerate = false;  // total significance was zero; every EF set to 1
};

// EF_i = (sig_i / sum sig) / (vol_i / sum vol).
EfValues compute_ef(std::span<const DataPortion> portions);

struct ClassBoundaries {
  double msdt = 1.0 / 3.0;   // cumulative volume fraction closing MSDT
  double mesdt = 2.0 / 3.0;  // cumulative volume fraction closing MeSDT

  void validate() const;
};

struct ClassificationResult {
  std::vector<DataPortion> portions;  // by id, with ef filled in
  std::array<VarietyClass, 3> classes;
  ClassBoundaries boundaries;
  bool degenerate = false;

  const VarietyClass& at(ClassKind k) const { return classes[static_cast<int>(k)]; }
  ClassKind class_of(std::uint64_t portion_id) const;
};

// Sort by EF descending (ties: ascending id) and cut by cumulative volume:
// a portion joins MSDT while the volume ahead of it is below
// boundaries.msdt of the total, then MeSDT below boundaries.mesdt, else LSDT.
// Portions must be indexed by id (portions[i].id == i).
ClassificationResult classify(std::span<const DataPortion> portions,
                              std::span<const double> ef_values,
                              const ClassBoundaries& boundaries = {},
                              bool degenerate = false);

// compute_ef + classify.
ClassificationResult classify_portions(std::span<const DataPortion> portions,
                                       const ClassBoundaries& boundaries = {});

void write_classification(std::ostream& out, const ClassificationResult& result);
ClassificationResult read_classification(std::istream& in);

}  // namespace dvp
