#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace exoverse {

/// Record of one CLI run: the fully resolved configuration plus input
/// digests, sufficient to replay the run byte-identically.
struct RunManifest {
  std::string subcommand;
  std::string resolved;  // JSON object, all defaults materialized
  std::map<std::string, std::string> input_digests;
  std::vector<std::string> outputs;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

void save_manifest(const RunManifest& m, const std::string& path);
RunManifest load_manifest(const std::string& path);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace exoverse
