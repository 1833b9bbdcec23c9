#include "exoverse/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exoverse/errors.hpp"

namespace exoverse {

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["tool"] = "exoverse";
  j["tool_version"] = m.tool_version;
  j["subcommand"] = m.subcommand;
  j["resolved"] = nlohmann::json::parse(m.resolved.empty() ? "{}" : m.resolved);
  j["inputs"] = m.input_digests;
  j["outputs"] = m.outputs;
  j["seed"] = m.seed;
  j["warnings"] = m.warnings;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid manifest JSON: ") + e.what());
  }
  RunManifest m;
  try {
    m.subcommand = j.at("subcommand").get<std::string>();
    m.resolved = j.at("resolved").dump();
    m.tool_version = j.value("tool_version", "");
    m.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("inputs")) {
      m.input_digests = j["inputs"].get<std::map<std::string, std::string>>();
    }
    if (j.contains("outputs")) m.outputs = j["outputs"].get<std::vector<std::string>>();
    if (j.contains("warnings")) m.warnings = j["warnings"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest missing fields: ") + e.what());
  }
  return m;
}

void save_manifest(const RunManifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << manifest_to_json(m);
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return manifest_from_json(buf.str());
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for digest: " + path);
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a offset basis
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

}  // namespace exoverse
