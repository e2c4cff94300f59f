#include "wavelab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavelab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section.empty())
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty section name");
      cfg.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
    if (section.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": key line before any [section] header");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.data_[section][key] = value;
  }
  return cfg;
}

void Config::missing(const std::string& section, const std::string& key) const {
  throw std::runtime_error("config " + origin_ + ": missing required key [" + section + "] " +
                           key);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = data_.find(lower(section));
  return s != data_.end() && s->second.count(lower(key)) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const auto s = data_.find(lower(section));
  if (s == data_.end()) missing(section, key);
  const auto k = s->second.find(lower(key));
  if (k == s->second.end()) missing(section, key);
  return k->second;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("config: [" + section + "] " + key + " = '" + v + "' is not a real");
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long long Config::get_int(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (trim(v.substr(pos)).empty()) return i;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("config: [" + section + "] " + key + " = '" + v +
                           "' is not an integer");
}

long long Config::get_int_or(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  try {
    std::size_t pos = 0;
    const unsigned long long i = std::stoull(v, &pos, 0);
    if (trim(v.substr(pos)).empty()) return i;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("config: [" + section + "] " + key + " = '" + v +
                           "' is not an unsigned integer");
}

bool Config::get_bool_or(const std::string& section, const std::string& key,
                         bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = lower(get_string(section, key));
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::runtime_error("config: [" + section + "] " + key + " = '" + v +
                           "' is not a boolean");
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
  std::string v = get_string(section, key);
  for (char& c : v)
    if (c == ',') c = ' ';
  std::istringstream in(v);
  std::vector<double> out;
  double d = 0;
  while (in >> d) out.push_back(d);
  if (!in.eof())
    throw std::runtime_error("config: [" + section + "] " + key + " is not a list of reals");
  return out;
}

std::vector<double> Config::get_list_or(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
  return has(section, key) ? get_list(section, key) : fallback;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  data_[lower(section)][lower(key)] = value;
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& s : data_) out.push_back(s.first);
  return out;
}

std::string Config::canonical_dump() const {
  std::ostringstream out;
  for (const auto& s : data_) {
    out << '[' << s.first << "]\n";
    for (const auto& kv : s.second) out << kv.first << " = " << kv.second << '\n';
  }
  return out.str();
}

std::uint64_t Config::hash() const {
  const std::string d = canonical_dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : d) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace wavelab
