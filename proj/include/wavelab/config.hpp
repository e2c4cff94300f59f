#pragma once

// INI-style configuration: [section] headers, key = value lines, '#' or ';'
// comments, blank lines ignored. Keys are looked up as section/key; typed
// getters throw with the offending name. The canonical dump (sections and
// keys sorted) feeds the reproducibility hash.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wavelab {

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  // comma- or whitespace-separated list of reals
  std::vector<double> get_list(const std::string& section, const std::string& key) const;
  std::vector<double> get_list_or(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  std::vector<std::string> sections() const;

  std::string canonical_dump() const;
  std::uint64_t hash() const;  // FNV-1a of the canonical dump

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
  std::string origin_;
  [[noreturn]] void missing(const std::string& section, const std::string& key) const;
};

}  // namespace wavelab
