#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dvplan/corpus.hpp"
#include "dvplan/error.hpp"

namespace testsupport {

class VectorSource : public dvp::RecordSource {
 public:
  explicit VectorSource(std::vector<std::string> records) : records_(std::move(records)) {}
  std::uint64_t record_count() const override { return records_.size(); }
  std::string_view record(std::uint64_t i, std::string&) const override { return records_[i]; }

 private:
  std::vector<std::string> records_;
};

// Per-test scratch directory under the system temp dir, removed on exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("dvplan-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, std::string_view bytes) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << bytes;
    return p;
  }

 private:
  std::filesystem::path path_;
};

template <typename F>
dvp::ErrorKind kind_of(F&& fn) {
  try {
    fn();
  } catch (const dvp::Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected dvp::Error");
}

}  // namespace testsupport
