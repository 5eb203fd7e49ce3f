#include "doctest.h"

#include <sstream>

#include "dvplan/corpus.hpp"
#include "support.hpp"

using testsupport::kind_of;
using testsupport::TempDir;
using testsupport::VectorSource;

namespace {

std::vector<std::uint64_t> record_counts(const dvp::PortionManifest& m) {
  std::vector<std::uint64_t> out;
  for (const auto& p : m.portions) out.push_back(p.records);
  return out;
}

double word_count(std::vector<std::string> records, const char* measure = "word_count") {
  const VectorSource src(std::move(records));
  return dvp::exact_significance(src, dvp::SignificanceMeasure::parse(measure)).value.sum;
}

}  // namespace

TEST_CASE("chunk is record aligned") {
  TempDir dir("chunk");
  std::string data;
  for (int i = 0; i < 10; ++i) data += "record-" + std::to_string(i) + "!\n";  // 9 + 1 bytes
  const auto path = dir.write("ten.txt", data);
  const auto m = dvp::chunk({path}, 35);
  CHECK(record_counts(m) == std::vector<std::uint64_t>{3, 3, 3, 1});
  CHECK(m.portions[1].offset == 30);
  CHECK(m.portions[3].length == 10);
  CHECK(m.total_bytes() == 100);

  const dvp::FilePortion p(m.portions[1], '\n');
  std::string scratch;
  REQUIRE(p.record_count() == 3);
  CHECK(p.record(0, scratch) == "record-3!");
}

TEST_CASE("chunk splits into equal portions at scale") {
  TempDir dir("chunk4");
  const std::string rec(63, 'x');
  std::string data;
  for (int i = 0; i < 64; ++i) data += rec + "\n";  // 4 KiB
  const auto m = dvp::chunk({dir.write("big.txt", data)}, 1024);
  CHECK(m.portions.size() == 4);
  for (const auto& p : m.portions) CHECK(p.length == 1024);
}

TEST_CASE("chunk edge cases") {
  TempDir dir("chunk-edge");
  CHECK(dvp::chunk({dir.write("empty.txt", "")}, 64).portions.empty());
  // No trailing delimiter: the last record still counts.
  CHECK(record_counts(dvp::chunk({dir.write("tail.txt", "a\nb")}, 64)) ==
        std::vector<std::uint64_t>{2});
  CHECK(kind_of([&] { dvp::chunk({dir.write("long.txt", std::string(100, 'x') + "\n")}, 64); }) ==
        dvp::ErrorKind::kOversizeRecord);
  CHECK(kind_of([&] { dvp::chunk({dir.path() / "missing.txt"}, 64); }) == dvp::ErrorKind::kIo);
  // Files are split independently, ids continue.
  const auto m = dvp::chunk({dir.write("a.txt", "aa\nbb\n"), dir.write("b.txt", "cc\n")}, 4);
  REQUIRE(m.portions.size() == 3);
  CHECK(m.portions[2].id == 2);
  CHECK(m.portions[2].offset == 0);
}

TEST_CASE("manifest round-trips") {
  TempDir dir("manifest");
  const auto m = dvp::chunk({dir.write("x.txt", "a b\nc\nd e f\n")}, 6, '\n');
  std::stringstream ss;
  dvp::write_manifest(ss, m);
  CHECK(dvp::read_manifest(ss) == m);
  std::istringstream bad("{\"manifest\":1}\n{\"id\":1}\n");
  CHECK(kind_of([&] { dvp::read_manifest(bad); }) == dvp::ErrorKind::kInvalidInput);
}

TEST_CASE("word and pattern measures") {
  CHECK(word_count({"a b c", "d e"}) == 5);
  CHECK(word_count({"  a\tb  ", ""}) == 2);
  CHECK(word_count({"the theater the"}, "pattern_count(the)") == 2);
  CHECK(word_count({"the theater the", "The end"}, "pattern_count(the)") == 2);
  auto folded = dvp::SignificanceMeasure::parse("pattern_count(the)");
  folded.set_case_fold(true);
  const VectorSource src({"The end the"});
  CHECK(dvp::exact_significance(src, folded).value.sum == 2);
  CHECK(word_count({"new york new york city"}, "pattern_count(new york)") == 2);
  CHECK(word_count({"a b a", "b b"}, "inverted_index_size") == 3);
  CHECK(word_count({"GET http://x.org/a", "http://x.org/ab"}, "url_count(http://x.org/a)") == 1);
}

TEST_CASE("field measures") {
  CHECK(word_count({"x,1", "y,2", "z,3"}, "field_sum(1)") == 6);
  CHECK(word_count({"x,5", "y,20", "z,7"}, "predicate_count(1>6)") == 2);
  CHECK(word_count({"x,5", "y,20", "z,7"}, "predicate_count(1<=7)") == 2);

  const VectorSource src({"a,4", "b,oops", "c", "d,8"});
  const auto avg = dvp::SignificanceMeasure::parse("field_avg(1)");
  const auto r = dvp::exact_significance(src, avg);
  CHECK(r.skipped == 2);
  CHECK(r.value.sum == 12);
  CHECK(r.value.count == 2);
  CHECK(r.value.reported_value() == 6.0);

  auto tabbed = dvp::SignificanceMeasure::parse("field_sum(0)");
  tabbed.set_field_delimiter('\t');
  const VectorSource tsv({"2\tx", "3\ty"});
  CHECK(dvp::exact_significance(tsv, tabbed).value.sum == 5);
}

TEST_CASE("measure parsing") {
  for (const char* text : {"word_count", "inverted_index_size", "pattern_count(the)",
                           "url_count(http://a/b)", "field_sum(3)", "field_avg(0)",
                           "predicate_count(2>=1.5)"}) {
    CHECK(dvp::SignificanceMeasure::parse(text).to_string() == text);
  }
  for (const char* text : {"", "nope", "field_sum(x)", "pattern_count()", "predicate_count(1~2)",
                           "word_count(3)"}) {
    CAPTURE(text);
    CHECK(kind_of([&] { dvp::SignificanceMeasure::parse(text); }) ==
          dvp::ErrorKind::kInvalidInput);
  }
}

TEST_CASE("merge significance") {
  const auto wc = dvp::zero_significance(dvp::SignificanceMeasure::word_count());
  auto a = wc, b = wc;
  a.sum = 5;
  b.sum = 7;
  CHECK(dvp::merge_significance(a, b).sum == 12);
  CHECK(dvp::merge_significance(a, wc).sum == 5);

  auto s = dvp::zero_significance(dvp::SignificanceMeasure::parse("field_avg(1)"));
  auto x = s, y = s;
  x.sum = 10;
  x.count = 2;
  y.sum = 20;
  y.count = 3;
  const auto xy = dvp::merge_significance(x, y);
  CHECK(xy.sum == 30);
  CHECK(xy.count == 5);
  CHECK(xy.reported_value() == 6.0);
  CHECK(kind_of([&] { dvp::merge_significance(a, x); }) == dvp::ErrorKind::kInvalidMerge);
}
