#include "doctest.h"

#include <sstream>

#include "dvplan/classifier.hpp"
#include "support.hpp"

using dvp::ClassKind;
using testsupport::kind_of;

namespace {

std::vector<dvp::DataPortion> portions(std::vector<double> sig,
                                       std::vector<std::uint64_t> vol = {}) {
  std::vector<dvp::DataPortion> out;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    out.push_back({i, vol.empty() ? 100 : vol[i], 10, sig[i], false, 0.0});
  }
  return out;
}

using Ids = std::vector<std::uint64_t>;

}  // namespace

TEST_CASE("compute_ef") {
  const auto e = dvp::compute_ef(portions({50, 30, 15, 5}));
  REQUIRE(e.ef.size() == 4);
  CHECK(e.ef[0] == doctest::Approx(2.0));
  CHECK(e.ef[1] == doctest::Approx(1.2));
  CHECK(e.ef[2] == doctest::Approx(0.6));
  CHECK(e.ef[3] == doctest::Approx(0.2));
  CHECK_FALSE(e.degenerate);

  for (double v : dvp::compute_ef(portions({7, 7, 7})).ef) CHECK(v == doctest::Approx(1.0));

  const auto z = dvp::compute_ef(portions({0, 0, 0}));
  CHECK(z.degenerate);
  CHECK(z.ef == std::vector<double>{1, 1, 1});

  CHECK(kind_of([] { dvp::compute_ef(portions({1, 2}, {0, 0})); }) ==
        dvp::ErrorKind::kInvalidInput);
}

TEST_CASE("classify by volume tertiles") {
  const auto r = dvp::classify_portions(portions({50, 30, 15, 5}));
  CHECK(r.at(ClassKind::kMsdt).portions == Ids{0, 1});
  CHECK(r.at(ClassKind::kMesdt).portions == Ids{2});
  CHECK(r.at(ClassKind::kLsdt).portions == Ids{3});
  CHECK(r.class_of(1) == ClassKind::kMsdt);
  CHECK(r.at(ClassKind::kMsdt).total_volume == 200);
  CHECK(r.at(ClassKind::kMsdt).total_significance == 80);
  CHECK(r.portions[0].ef == doctest::Approx(2.0));
}

TEST_CASE("single portion") {
  const auto r = dvp::classify_portions(portions({3}));
  CHECK(r.at(ClassKind::kMsdt).portions == Ids{0});
  CHECK(r.at(ClassKind::kMesdt).empty());
  CHECK(r.at(ClassKind::kLsdt).empty());
}

TEST_CASE("nine equal portions split three ways") {
  const auto r = dvp::classify_portions(portions({9, 1, 8, 2, 7, 3, 6, 4, 5}));
  CHECK(r.at(ClassKind::kMsdt).portions == Ids{0, 2, 4});
  CHECK(r.at(ClassKind::kMesdt).portions == Ids{6, 7, 8});
  CHECK(r.at(ClassKind::kLsdt).portions == Ids{1, 3, 5});
}

TEST_CASE("ties break by ascending id") {
  const auto r = dvp::classify_portions(portions({5, 5, 5, 5, 5, 5}));
  CHECK(r.at(ClassKind::kMsdt).portions == Ids{0, 1});
  CHECK(r.at(ClassKind::kLsdt).portions == Ids{4, 5});
}

TEST_CASE("uneven volumes") {
  // EF order is 0,1,2; portion 0 alone holds 60% of volume, so MeSDT gets
  // portion 1 (60% ahead of it) and LSDT portion 2 (70% ahead).
  const auto r = dvp::classify_portions(portions({600, 100, 10}, {600, 100, 300}));
  CHECK(r.at(ClassKind::kMsdt).portions == Ids{0});
  CHECK(r.at(ClassKind::kMesdt).portions == Ids{1});
  CHECK(r.at(ClassKind::kLsdt).portions == Ids{2});
}

TEST_CASE("custom boundaries") {
  dvp::ClassBoundaries b{0.5, 0.75};
  const auto r = dvp::classify_portions(portions({4, 3, 2, 1}), b);
  CHECK(r.at(ClassKind::kMsdt).portions == Ids{0, 1});
  CHECK(r.at(ClassKind::kMesdt).portions == Ids{2});
  dvp::ClassBoundaries bad{0.8, 0.5};
  CHECK(kind_of([&] { bad.validate(); }) == dvp::ErrorKind::kInvalidInput);
}

TEST_CASE("degenerate classification keeps id order") {
  const auto r = dvp::classify_portions(portions({0, 0, 0}));
  CHECK(r.degenerate);
  CHECK(r.at(ClassKind::kMsdt).portions == Ids{0});
  CHECK(r.at(ClassKind::kLsdt).portions == Ids{2});
}

TEST_CASE("classification round-trips") {
  auto ps = portions({50, 30.25, 15, 5});
  ps[1].significance_is_estimate = true;
  const auto r = dvp::classify_portions(ps);
  std::stringstream ss;
  dvp::write_classification(ss, r);
  const auto back = dvp::read_classification(ss);
  CHECK(back.degenerate == r.degenerate);
  for (auto k : dvp::kAllClasses) {
    CHECK(back.at(k).portions == r.at(k).portions);
    CHECK(back.at(k).total_volume == r.at(k).total_volume);
    CHECK(back.at(k).total_significance == r.at(k).total_significance);
  }
  CHECK(back.portions[1].significance == 30.25);
  CHECK(back.portions[1].significance_is_estimate);
  CHECK(back.portions[2].ef == r.portions[2].ef);
}
