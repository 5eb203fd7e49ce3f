#include "dvplan/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "dvplan/error.hpp"

namespace dvp {

namespace {

constexpr std::string_view kVocabulary[] = {
    "alfa", "bark", "cove", "dune", "echo", "fern", "gale", "hail", "iris", "jade",
    "kelp", "lark", "mist", "node", "opal", "pine", "quay", "reef", "sage", "tide",
    "vale", "wren", "yarn", "zinc", "the",  "data", "word", "film", "plot", "star",
    "cast", "cine",
};
constexpr std::size_t kVocabularySize = sizeof(kVocabulary) / sizeof(kVocabulary[0]);

std::vector<std::string_view> split(std::string_view s, char d) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(d, start);
    out.push_back(s.substr(start, at == std::string_view::npos ? at : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

template <typename T>
T parse_num(std::string_view s, std::string_view full) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kUsage, "bad synthetic spec '" + std::string(full) + "'");
  }
  return v;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

SyntheticSpec SyntheticSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  SyntheticSpec spec;
  if (parts[0] == "zipf" && parts.size() == 4) {
    spec.shape = Shape::kZipf;
    spec.zipf_s = parse_num<double>(parts[1], text);
    spec.portions = parse_num<std::uint64_t>(parts[2], text);
    spec.records = parse_num<std::uint64_t>(parts[3], text);
    if (!(spec.zipf_s >= 0.0)) throw Error(ErrorKind::kUsage, "zipf exponent must be >= 0");
  } else if (parts[0] == "uniform" && parts.size() == 5) {
    spec.shape = Shape::kUniform;
    spec.lo = parse_num<int>(parts[1], text);
    spec.hi = parse_num<int>(parts[2], text);
    spec.portions = parse_num<std::uint64_t>(parts[3], text);
    spec.records = parse_num<std::uint64_t>(parts[4], text);
    if (spec.lo < 0 || spec.hi < spec.lo || spec.hi > kSyntheticMaxWords) {
      throw Error(ErrorKind::kUsage, "uniform word range must satisfy 0 <= lo <= hi <= 32");
    }
  } else {
    throw Error(ErrorKind::kUsage,
                "synthetic spec must be zipf:<s>:<portions>:<records> or "
                "uniform:<lo>:<hi>:<portions>:<records>, got '" + std::string(text) + "'");
  }
  return spec;
}

std::string SyntheticSpec::to_string() const {
  std::ostringstream os;
  if (shape == Shape::kZipf) {
    os << "zipf:" << zipf_s << ':' << portions << ':' << records;
  } else {
    os << "uniform:" << lo << ':' << hi << ':' << portions << ':' << records;
  }
  return os.str();
}

SyntheticPortion::SyntheticPortion(const SyntheticSpec& spec, std::uint64_t portion,
                                   std::uint64_t seed)
    : words_(spec.records), portion_(portion), seed_(seed) {
  std::mt19937_64 rng(mix_seed(seed, portion));
  if (spec.shape == SyntheticSpec::Shape::kZipf) {
    // 1 + Binomial(31, p) words, p = (k+1)^-s; built from raw draws so the
    // corpus does not depend on the standard library's distributions.
    const double p = std::pow(static_cast<double>(portion + 1), -spec.zipf_s);
    const std::uint64_t threshold =
        p >= 1.0 ? ~0ull : static_cast<std::uint64_t>(std::ldexp(p, 64));
    for (auto& w : words_) {
      int n = 1;
      for (int j = 1; j < kSyntheticMaxWords; ++j) n += rng() < threshold ? 1 : 0;
      w = static_cast<std::uint8_t>(n);
    }
  } else {
    const std::uint64_t span = static_cast<std::uint64_t>(spec.hi - spec.lo + 1);
    for (auto& w : words_) w = static_cast<std::uint8_t>(spec.lo + static_cast<int>(rng() % span));
  }
}

std::string_view SyntheticPortion::record(std::uint64_t index, std::string& scratch) const {
  const int n = words_.at(index);
  scratch.clear();
  for (int j = 0; j < n; ++j) {
    if (j > 0) scratch += ' ';
    const std::uint64_t h = mix_seed(mix_seed(seed_, portion_), index * kSyntheticMaxWords + j);
    scratch += kVocabulary[h % kVocabularySize];
  }
  scratch.resize(kSyntheticRecordBytes - 1, ' ');
  return scratch;
}

SyntheticCorpus::SyntheticCorpus(const SyntheticSpec& spec, std::uint64_t seed)
    : spec_(spec), seed_(seed) {
  portions_.reserve(spec.portions);
  for (std::uint64_t k = 0; k < spec.portions; ++k) {
    portions_.push_back(std::make_unique<SyntheticPortion>(spec, k, seed));
  }
}

PortionManifest SyntheticCorpus::manifest(const std::string& path) const {
  PortionManifest m;
  m.sources = {path};
  m.portion_size_bytes = spec_.records * kSyntheticRecordBytes;
  if (m.portion_size_bytes == 0) m.portion_size_bytes = kSyntheticRecordBytes;
  for (std::uint64_t k = 0; k < portions_.size(); ++k) {
    if (spec_.records == 0) break;
    m.portions.push_back({k, path, k * m.portion_size_bytes, m.portion_size_bytes, spec_.records});
  }
  return m;
}

void SyntheticCorpus::write_to(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  std::string scratch;
  for (const auto& p : portions_) {
    for (std::uint64_t i = 0; i < p->record_count(); ++i) {
      out << p->record(i, scratch) << '\n';
    }
  }
  if (!out) throw Error(ErrorKind::kIo, "write failure on '" + path.string() + "'");
}

}  // namespace dvp
