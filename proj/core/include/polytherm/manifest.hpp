#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace polytherm {

/// FNV-1a 64-bit content digest.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64(const std::string& s);
std::uint64_t fnv1a64_file(const std::string& path);
std::string digest_hex(std::uint64_t digest);

/// Reproducibility record for one CLI command: config digest, seed, the
/// produced files with content digests, and per-check results. EXPECTED-FAIL
/// marks a deliberately violated hypothesis and counts as success.
struct RunManifest {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;

  struct Output {
    std::string path;
    std::string digest;
  };
  struct Result {
    std::string name;
    std::string status;  // PASS | FAIL | EXPECTED-FAIL
  };
  std::vector<Output> outputs;
  std::vector<Result> results;

  void add_output(const std::string& path);
  void add_result(const std::string& name, const std::string& status);
  bool all_pass() const;
  void write(const std::string& path) const;
};

}  // namespace polytherm
