#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace inspectra::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

struct FileDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> flags;  ///< sorted by name
  std::vector<std::uint64_t> seeds;
  std::string version = kToolVersion;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  double wall_time_s = 0.0;

  std::string to_json() const;
};

}  // namespace inspectra::cli
