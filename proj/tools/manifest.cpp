#include "manifest.hpp"

#include <array>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "inspectra/error.hpp"

namespace inspectra::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["flags"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : flags) j["flags"][k] = v;
  j["seeds"] = seeds;
  j["version"] = version;
  auto digests = [](const std::vector<FileDigest>& files) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& f : files) a.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return a;
  };
  j["inputs"] = digests(inputs);
  j["outputs"] = digests(outputs);
  j["wall_time_s"] = wall_time_s;
  return j.dump(2) + "\n";
}

}  // namespace inspectra::cli
