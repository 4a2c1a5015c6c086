#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace bartree::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(BARTREE_FIXTURE_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fixture(const std::string& name) { return read_file(fixture_path(name)); }

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << body;
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static int serial = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("bartree-test-" + std::to_string(::getpid()) + "-" + std::to_string(serial++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Per-depth node counts of the publication fixture, counted by hand from
// its markup (head/title and links count as layout: unlisted tags are
// structural).
//   d0 html | d1 head body | d2 title #page | d3 #header #main #footer
//   d4 h1 ul#nav #content #sidebar footer-p
//   d5 li li .record sidebar-ul            (record is the 3rd node)
//   d6 a a table li li | d7 tbody a a | d8 tr tr | d9 td td td
//   d10 h2 (opened before the RoI text starts)
inline const std::vector<std::size_t> kPublicationP = {1, 2, 2, 3, 5, 4, 5, 3, 2, 3, 1};

// Unpaired vs paired tags on each side of the publication RoI, by hand:
// upper keeps 11 ancestors open and closes head(2) + header(7) + first
// row(3) = 12 pairs; lower closes 11 ancestors (the stray </p> included)
// and holds sidebar(6) + footer(2) = 8 pairs.
inline constexpr std::int64_t kPublicationSigmaUpper = 11 - 12;
inline constexpr std::int64_t kPublicationSigmaLower = 11 - 8;

}  // namespace bartree::testing
