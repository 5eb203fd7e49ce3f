#include "dvplan/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dvplan/error.hpp"

namespace dvp {

using ojson = nlohmann::ordered_json;

std::uint64_t PortionManifest::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& p : portions) total += p.length;
  return total;
}

namespace {

class PortionBuilder {
 public:
  PortionBuilder(PortionManifest& m, std::string path) : m_(m), path_(std::move(path)) {}

  void add_record(std::uint64_t len) {
    if (len > m_.portion_size_bytes) {
      throw Error(ErrorKind::kOversizeRecord,
                  "record of " + std::to_string(len) + " bytes at offset " +
                      std::to_string(offset_) + " in " + path_ +
                      " exceeds portion size " + std::to_string(m_.portion_size_bytes));
    }
    if (length_ + len > m_.portion_size_bytes) flush();
    length_ += len;
    ++records_;
  }

  void flush() {
    if (records_ == 0) return;
    m_.portions.push_back({m_.portions.size(), path_, offset_, length_, records_});
    offset_ += length_;
    length_ = 0;
    records_ = 0;
  }

 private:
  PortionManifest& m_;
  std::string path_;
  std::uint64_t offset_ = 0;
  std::uint64_t length_ = 0;
  std::uint64_t records_ = 0;
};

void chunk_file(PortionManifest& m, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  PortionBuilder builder(m, path.string());
  std::vector<char> buf(1 << 20);
  std::uint64_t record_len = 0;
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    const char* p = buf.data();
    const char* end = p + got;
    while (p < end) {
      const void* hit = std::memchr(p, m.delimiter, static_cast<std::size_t>(end - p));
      if (hit == nullptr) {
        record_len += static_cast<std::uint64_t>(end - p);
        break;
      }
      const char* d = static_cast<const char*>(hit);
      record_len += static_cast<std::uint64_t>(d - p) + 1;
      builder.add_record(record_len);
      record_len = 0;
      p = d + 1;
    }
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read failure on '" + path.string() + "'");
  if (record_len > 0) builder.add_record(record_len);
  builder.flush();
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

template <typename Fn>
void for_each_token(std::string_view s, Fn&& fn) {
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) fn(s.substr(i, j - i));
    i = j;
  }
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  for_each_token(s, [&](std::string_view t) { out.emplace_back(t); });
  return out;
}

bool token_equal(std::string_view a, std::string_view b, bool fold) {
  if (a.size() != b.size()) return false;
  if (!fold) return a == b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool field_value(std::string_view record, std::size_t field, char delim, double& out) {
  std::size_t col = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t next = record.find(delim, start);
    if (col == field) {
      const auto cell = record.substr(start, next == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : next - start);
      return parse_number(cell, out);
    }
    if (next == std::string_view::npos) return false;
    start = next + 1;
    ++col;
  }
}

std::size_t parse_index(std::string_view s, std::string_view what) {
  s = trim(s);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kInvalidInput,
                "expected a column index in " + std::string(what) + ", got '" +
                    std::string(s) + "'");
  }
  return v;
}

const char* op_text(FieldPredicate::Op op) {
  switch (op) {
    case FieldPredicate::Op::kLt: return "<";
    case FieldPredicate::Op::kLe: return "<=";
    case FieldPredicate::Op::kGt: return ">";
    case FieldPredicate::Op::kGe: return ">=";
    case FieldPredicate::Op::kEq: return "==";
    case FieldPredicate::Op::kNe: return "!=";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

PortionManifest chunk(const std::vector<std::filesystem::path>& paths,
                      std::uint64_t portion_size_bytes, char delimiter) {
  if (portion_size_bytes == 0) {
    throw Error(ErrorKind::kInvalidInput, "portion size must be at least one byte");
  }
  PortionManifest m;
  m.portion_size_bytes = portion_size_bytes;
  m.delimiter = delimiter;
  for (const auto& p : paths) {
    m.sources.push_back(p.string());
    chunk_file(m, p);
  }
  return m;
}

void write_manifest(std::ostream& out, const PortionManifest& m) {
  ojson header;
  header["manifest"] = 1;
  header["portion_size_bytes"] = m.portion_size_bytes;
  header["delimiter"] = static_cast<int>(static_cast<unsigned char>(m.delimiter));
  header["sources"] = m.sources;
  out << header.dump() << '\n';
  for (const auto& p : m.portions) {
    ojson line;
    line["id"] = p.id;
    line["path"] = p.path;
    line["offset"] = p.offset;
    line["length"] = p.length;
    line["records"] = p.records;
    out << line.dump() << '\n';
  }
}

PortionManifest read_manifest(std::istream& in) {
  PortionManifest m;
  std::string line;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      const auto j = ojson::parse(line);
      if (!have_header) {
        if (!j.contains("manifest")) {
          throw Error(ErrorKind::kInvalidInput, "manifest header line missing");
        }
        m.portion_size_bytes = j.at("portion_size_bytes").get<std::uint64_t>();
        m.delimiter = static_cast<char>(j.at("delimiter").get<int>());
        m.sources = j.at("sources").get<std::vector<std::string>>();
        have_header = true;
        continue;
      }
      m.portions.push_back({j.at("id").get<std::uint64_t>(), j.at("path").get<std::string>(),
                            j.at("offset").get<std::uint64_t>(),
                            j.at("length").get<std::uint64_t>(),
                            j.at("records").get<std::uint64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad manifest: ") + e.what());
  }
  if (!have_header) throw Error(ErrorKind::kInvalidInput, "empty manifest");
  return m;
}

FilePortion::FilePortion(const ManifestEntry& entry, char delimiter) : delimiter_(delimiter) {
  std::ifstream in(entry.path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + entry.path + "'");
  bytes_.resize(entry.length);
  in.seekg(static_cast<std::streamoff>(entry.offset));
  in.read(bytes_.data(), static_cast<std::streamsize>(entry.length));
  if (static_cast<std::uint64_t>(in.gcount()) != entry.length) {
    throw Error(ErrorKind::kIo, "short read on '" + entry.path + "' portion " +
                                    std::to_string(entry.id));
  }
  std::uint64_t start = 0;
  while (start < bytes_.size()) {
    starts_.push_back(start);
    const auto d = bytes_.find(delimiter_, start);
    if (d == std::string::npos) break;
    start = d + 1;
  }
}

std::string_view FilePortion::record(std::uint64_t index, std::string&) const {
  const std::uint64_t begin = starts_.at(index);
  std::uint64_t end = index + 1 < starts_.size() ? starts_[index + 1] : bytes_.size();
  std::string_view r(bytes_.data() + begin, end - begin);
  if (!r.empty() && r.back() == delimiter_) r.remove_suffix(1);
  return r;
}

bool FieldPredicate::holds(double x) const {
  switch (op) {
    case Op::kLt: return x < value;
    case Op::kLe: return x <= value;
    case Op::kGt: return x > value;
    case Op::kGe: return x >= value;
    case Op::kEq: return x == value;
    case Op::kNe: return x != value;
  }
  return false;
}

SignificanceMeasure SignificanceMeasure::word_count() { return SignificanceMeasure{}; }

SignificanceMeasure SignificanceMeasure::parse(std::string_view text) {
  text = trim(text);
  SignificanceMeasure m;
  std::string_view name = text;
  std::string_view arg;
  bool has_arg = false;
  if (const auto open = text.find('('); open != std::string_view::npos) {
    if (text.back() != ')') {
      throw Error(ErrorKind::kInvalidInput, "unbalanced measure '" + std::string(text) + "'");
    }
    name = text.substr(0, open);
    arg = text.substr(open + 1, text.size() - open - 2);
    has_arg = true;
  }
  auto need_arg = [&](bool need) {
    if (need != has_arg) {
      throw Error(ErrorKind::kInvalidInput,
                  "measure '" + std::string(name) +
                      (need ? "' needs an argument" : "' takes no argument"));
    }
  };
  if (name == "word_count") {
    need_arg(false);
    m.kind_ = MeasureKind::kWordCount;
  } else if (name == "inverted_index_size") {
    need_arg(false);
    m.kind_ = MeasureKind::kInvertedIndexSize;
  } else if (name == "pattern_count" || name == "url_count") {
    need_arg(true);
    m.kind_ = name == "url_count" ? MeasureKind::kUrlCount : MeasureKind::kPatternCount;
    m.pattern_ = tokenize(arg);
    if (m.pattern_.empty()) throw Error(ErrorKind::kInvalidInput, "empty pattern");
    if (m.kind_ == MeasureKind::kUrlCount && m.pattern_.size() != 1) {
      throw Error(ErrorKind::kInvalidInput, "url_count takes a single URL");
    }
  } else if (name == "field_sum" || name == "field_avg") {
    need_arg(true);
    m.kind_ = name == "field_sum" ? MeasureKind::kFieldSum : MeasureKind::kFieldAvg;
    m.field_ = parse_index(arg, name);
  } else if (name == "predicate_count") {
    need_arg(true);
    m.kind_ = MeasureKind::kPredicateCount;
    static constexpr std::pair<std::string_view, FieldPredicate::Op> kOps[] = {
        {"<=", FieldPredicate::Op::kLe}, {">=", FieldPredicate::Op::kGe},
        {"==", FieldPredicate::Op::kEq}, {"!=", FieldPredicate::Op::kNe},
        {"<", FieldPredicate::Op::kLt},  {">", FieldPredicate::Op::kGt},
    };
    bool found = false;
    for (const auto& [tok, op] : kOps) {
      if (const auto at = arg.find(tok); at != std::string_view::npos) {
        m.predicate_.field = parse_index(arg.substr(0, at), name);
        m.predicate_.op = op;
        if (!parse_number(arg.substr(at + tok.size()), m.predicate_.value)) {
          throw Error(ErrorKind::kInvalidInput, "predicate needs a numeric right-hand side");
        }
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorKind::kInvalidInput,
                  "predicate '" + std::string(arg) + "' has no comparison operator");
    }
  } else {
    throw Error(ErrorKind::kInvalidInput, "unknown measure '" + std::string(name) + "'");
  }
  return m;
}

MergeKind SignificanceMeasure::merge_kind() const {
  return kind_ == MeasureKind::kFieldAvg ? MergeKind::kSumCount : MergeKind::kAdditive;
}

std::string SignificanceMeasure::to_string() const {
  auto joined = [&] {
    std::string s;
    for (const auto& t : pattern_) {
      if (!s.empty()) s += ' ';
      s += t;
    }
    return s;
  };
  switch (kind_) {
    case MeasureKind::kWordCount: return "word_count";
    case MeasureKind::kInvertedIndexSize: return "inverted_index_size";
    case MeasureKind::kPatternCount: return "pattern_count(" + joined() + ")";
    case MeasureKind::kUrlCount: return "url_count(" + joined() + ")";
    case MeasureKind::kFieldSum: return "field_sum(" + std::to_string(field_) + ")";
    case MeasureKind::kFieldAvg: return "field_avg(" + std::to_string(field_) + ")";
    case MeasureKind::kPredicateCount:
      return "predicate_count(" + std::to_string(predicate_.field) + op_text(predicate_.op) +
             format_double(predicate_.value) + ")";
  }
  return "?";
}

SignificanceMeasure::Contribution SignificanceMeasure::evaluate(std::string_view record) const {
  Contribution c;
  switch (kind_) {
    case MeasureKind::kWordCount: {
      std::uint64_t n = 0;
      for_each_token(record, [&](std::string_view) { ++n; });
      c.value = static_cast<double>(n);
      break;
    }
    case MeasureKind::kInvertedIndexSize: {
      // One index entry per distinct term of the record (term -> record).
      std::unordered_set<std::string> terms;
      for_each_token(record, [&](std::string_view t) {
        std::string key(t);
        if (case_fold_) {
          std::transform(key.begin(), key.end(), key.begin(),
                         [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        }
        terms.insert(std::move(key));
      });
      c.value = static_cast<double>(terms.size());
      break;
    }
    case MeasureKind::kPatternCount:
    case MeasureKind::kUrlCount: {
      const bool fold = kind_ == MeasureKind::kPatternCount && case_fold_;
      std::vector<std::string_view> toks;
      for_each_token(record, [&](std::string_view t) { toks.push_back(t); });
      std::uint64_t n = 0;
      const std::size_t k = pattern_.size();
      for (std::size_t i = 0; i + k <= toks.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < k && match; ++j) {
          match = token_equal(toks[i + j], pattern_[j], fold);
        }
        if (match) ++n;
      }
      c.value = static_cast<double>(n);
      break;
    }
    case MeasureKind::kFieldSum:
    case MeasureKind::kFieldAvg: {
      double v = 0.0;
      if (!field_value(record, field_, field_delim_, v)) {
        c.malformed = true;
        break;
      }
      c.value = v;
      c.count = 1;
      break;
    }
    case MeasureKind::kPredicateCount: {
      double v = 0.0;
      if (!field_value(record, predicate_.field, field_delim_, v)) {
        c.malformed = true;
        break;
      }
      c.value = predicate_.holds(v) ? 1.0 : 0.0;
      c.count = 1;
      break;
    }
  }
  return c;
}

double SigValue::reported_value() const {
  if (merge == MergeKind::kSumCount) {
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
  }
  return sum;
}

SigValue zero_significance(const SignificanceMeasure& measure) {
  return SigValue{measure.to_string(), measure.merge_kind(), 0.0, 0};
}

SigValue merge_significance(const SigValue& a, const SigValue& b) {
  if (a.measure != b.measure || a.merge != b.merge) {
    throw Error(ErrorKind::kInvalidMerge,
                "cannot merge '" + a.measure + "' with '" + b.measure + "'");
  }
  return SigValue{a.measure, a.merge, a.sum + b.sum, a.count + b.count};
}

ScanResult exact_significance(const RecordSource& portion, const SignificanceMeasure& measure) {
  ScanResult r{zero_significance(measure), 0};
  std::string scratch;
  const std::uint64_t n = portion.record_count();
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto c = measure.evaluate(portion.record(i, scratch));
    if (c.malformed) {
      ++r.skipped;
      continue;
    }
    r.value.sum += c.value;
    r.value.count += c.count;
  }
  return r;
}

}  // namespace dvp
