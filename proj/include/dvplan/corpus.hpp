#pragma once

// Splitting inputs into record-aligned portions, record access, and the
// significance measures of the supported accumulative applications.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dvp {

inline constexpr std::uint64_t kDefaultPortionSize = 128ull << 20;

struct ManifestEntry {
  std::uint64_t id = 0;
  std::string path;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::uint64_t records = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct PortionManifest {
  std::vector<std::string> sources;
  std::uint64_t portion_size_bytes = kDefaultPortionSize;
  char delimiter = '\n';
  std::vector<ManifestEntry> portions;

  std::uint64_t total_bytes() const;
  friend bool operator==(const PortionManifest&, const PortionManifest&) = default;
};

// Greedy record-aligned split: a portion takes records while it stays within
// portion_size_bytes. Each file is split on its own.
PortionManifest chunk(const std::vector<std::filesystem::path>& paths,
                      std::uint64_t portion_size_bytes, char delimiter = '\n');

// JSON lines: a header object, then one {id,path,offset,length,records} per
// portion in that field order.
void write_manifest(std::ostream& out, const PortionManifest& manifest);
PortionManifest read_manifest(std::istream& in);

// Random access to the records of one portion. Records exclude the delimiter.
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual std::uint64_t record_count() const = 0;
  // May render into scratch; the view is valid until the next call.
  virtual std::string_view record(std::uint64_t index, std::string& scratch) const = 0;
};

class FilePortion : public RecordSource {
 public:
  FilePortion(const ManifestEntry& entry, char delimiter);

  std::uint64_t record_count() const override { return starts_.size(); }
  std::string_view record(std::uint64_t index, std::string& scratch) const override;

 private:
  std::string bytes_;
  std::vector<std::uint64_t> starts_;
  char delimiter_;
};

enum class MergeKind { kAdditive, kSumCount };

enum class MeasureKind {
  kWordCount,
  kPatternCount,
  kInvertedIndexSize,
  kPredicateCount,
  kFieldSum,
  kFieldAvg,
  kUrlCount,
};

struct FieldPredicate {
  enum class Op { kLt, kLe, kGt, kGe, kEq, kNe };
  std::size_t field = 0;
  Op op = Op::kGt;
  double value = 0.0;

  bool holds(double x) const;
  friend bool operator==(const FieldPredicate&, const FieldPredicate&) = default;
};

class SignificanceMeasure {
 public:
  // word_count | inverted_index_size | pattern_count(<words>) | url_count(<url>)
  // field_sum(<col>) | field_avg(<col>) | predicate_count(<col><op><number>)
  static SignificanceMeasure parse(std::string_view text);
  static SignificanceMeasure word_count();

  MeasureKind kind() const { return kind_; }
  MergeKind merge_kind() const;
  std::string to_string() const;

  bool case_fold() const { return case_fold_; }
  SignificanceMeasure& set_case_fold(bool on) {
    case_fold_ = on;
    return *this;
  }
  char field_delimiter() const { return field_delim_; }
  SignificanceMeasure& set_field_delimiter(char d) {
    field_delim_ = d;
    return *this;
  }

  struct Contribution {
    double value = 0.0;
    std::uint64_t count = 0;
    bool malformed = false;
  };
  Contribution evaluate(std::string_view record) const;

  friend bool operator==(const SignificanceMeasure&, const SignificanceMeasure&) = default;

 private:
  MeasureKind kind_ = MeasureKind::kWordCount;
  std::vector<std::string> pattern_;
  std::size_t field_ = 0;
  FieldPredicate predicate_;
  bool case_fold_ = false;
  char field_delim_ = ',';
};

// Partial result of a measure. Additive measures only use sum; sum-count
// measures (averages) carry the pair so partials merge exactly.
struct SigValue {
  std::string measure;
  MergeKind merge = MergeKind::kAdditive;
  double sum = 0.0;
  std::uint64_t count = 0;

  // The number used for EF and CPP: the progress contributed.
  double planning_value() const { return sum; }
  // What the application reports: the sum, or the mean for sum-count.
  double reported_value() const;
};

SigValue zero_significance(const SignificanceMeasure& measure);
SigValue merge_significance(const SigValue& a, const SigValue& b);

struct ScanResult {
  SigValue value;
  std::uint64_t skipped = 0;  // malformed records under field measures
};

ScanResult exact_significance(const RecordSource& portion,
                              const SignificanceMeasure& measure);

}  // namespace dvp
