#include "polytherm/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace polytherm {

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for digest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return fnv1a64(buf.str());
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

void RunManifest::add_output(const std::string& path) {
  outputs.push_back({path, digest_hex(fnv1a64_file(path))});
}

void RunManifest::add_result(const std::string& name, const std::string& status) {
  results.push_back({name, status});
}

bool RunManifest::all_pass() const {
  for (const auto& r : results)
    if (r.status != "PASS" && r.status != "EXPECTED-FAIL") return false;
  return true;
}

void RunManifest::write(const std::string& path) const {
  nlohmann::json j;
  j["command"] = command;
  j["config_digest"] = config_digest;
  j["seed"] = seed;
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : outputs) j["outputs"].push_back({{"path", o.path}, {"digest", o.digest}});
  j["results"] = nlohmann::json::array();
  for (const auto& r : results) j["results"].push_back({{"name", r.name}, {"status", r.status}});
  j["all_pass"] = all_pass();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace polytherm
