#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "polytherm/errors.hpp"

namespace polytherm {

/// Plain-text experiment configuration.
///
/// Grammar: '[section]' headers, 'key = value' entries, '#' or ';' comments,
/// blank lines ignored. One file fully determines an experiment; the raw text
/// is retained for digesting into the run manifest.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  /// Comma-separated list of numbers.
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

  const std::string& raw_text() const { return raw_; }
  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::string raw_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace polytherm
