#include "lfhybrid/kv_file.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lfhybrid {

namespace {
std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

KvFile KvFile::parse_text(const std::string& text) {
  KvFile kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("malformed key=value line: " + t);
    kv.entries_.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return kv;
}

KvFile KvFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

void KvFile::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void KvFile::set_int(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

void KvFile::set_double(const std::string& key, double value) {
  std::ostringstream ss;
  ss.precision(17);
  ss << value;
  set(key, ss.str());
}

bool KvFile::has(const std::string& key) const { return find(key).has_value(); }

std::optional<std::string> KvFile::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string KvFile::get(const std::string& key) const {
  auto v = find(key);
  if (!v) throw std::runtime_error("missing key: " + key);
  return *v;
}

long long KvFile::get_int(const std::string& key) const {
  const std::string s = get(key);
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error("key '" + key + "' is not an integer: " + s);
  return v;
}

double KvFile::get_double(const std::string& key) const {
  const std::string s = get(key);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error("key '" + key + "' is not a number: " + s);
  return v;
}

std::string KvFile::get_or(const std::string& key, const std::string& dflt) const {
  auto v = find(key);
  return v ? *v : dflt;
}

long long KvFile::get_int_or(const std::string& key, long long dflt) const {
  return has(key) ? get_int(key) : dflt;
}

double KvFile::get_double_or(const std::string& key, double dflt) const {
  return has(key) ? get_double(key) : dflt;
}

std::string KvFile::to_text() const {
  std::ostringstream ss;
  for (const auto& [k, v] : entries_) ss << k << "=" << v << "\n";
  return ss.str();
}

void KvFile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << to_text();
}

}  // namespace lfhybrid
