#pragma once

// Seeded synthetic corpora for desk-scale runs. Every record is padded to a
// fixed width, so portions have equal byte volume while their word counts
// (significance) differ.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dvplan/corpus.hpp"

namespace dvp {

// zipf:<s>:<portions>:<records>        mean words of portion k ~ (k+1)^-s
// uniform:<lo>:<hi>:<portions>:<records>  words per record uniform in [lo, hi]
struct SyntheticSpec {
  enum class Shape { kZipf, kUniform };
  Shape shape = Shape::kZipf;
  double zipf_s = 1.0;
  int lo = 1;
  int hi = 10;
  std::uint64_t portions = 0;
  std::uint64_t records = 0;

  static SyntheticSpec parse(std::string_view text);
  std::string to_string() const;
};

inline constexpr int kSyntheticMaxWords = 32;
inline constexpr std::uint64_t kSyntheticRecordBytes = 160;  // incl. newline

class SyntheticPortion : public RecordSource {
 public:
  SyntheticPortion(const SyntheticSpec& spec, std::uint64_t portion, std::uint64_t seed);

  std::uint64_t record_count() const override { return words_.size(); }
  std::string_view record(std::uint64_t index, std::string& scratch) const override;

  int words_in(std::uint64_t index) const { return words_[index]; }

 private:
  std::vector<std::uint8_t> words_;
  std::uint64_t portion_;
  std::uint64_t seed_;
};

class SyntheticCorpus {
 public:
  SyntheticCorpus(const SyntheticSpec& spec, std::uint64_t seed);

  const SyntheticSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return portions_.size(); }
  const SyntheticPortion& portion(std::size_t i) const { return *portions_[i]; }

  // Manifest describing the corpus as if written to `path` by write_to().
  PortionManifest manifest(const std::string& path) const;
  void write_to(const std::filesystem::path& path) const;

 private:
  SyntheticSpec spec_;
  std::uint64_t seed_;
  std::vector<std::unique_ptr<SyntheticPortion>> portions_;
};

// splitmix64 finalizer; used to derive independent per-portion seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace dvp
