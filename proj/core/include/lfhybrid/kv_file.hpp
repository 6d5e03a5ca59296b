#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lfhybrid {

/// Line-based `key=value` file: blank lines and lines starting with '#' are
/// skipped; keys may repeat (order preserved). Used by manifests, scene
/// descriptions, and training configs.
class KvFile {
 public:
  KvFile() = default;

  static KvFile parse_text(const std::string& text);
  static KvFile load(const std::string& path);  // throws std::runtime_error

  void set(const std::string& key, const std::string& value);
  void set_int(const std::string& key, long long value);
  void set_double(const std::string& key, double value);

  bool has(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;

  // Throwing accessors (std::runtime_error names the missing/bad key).
  std::string get(const std::string& key) const;
  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;

  // Defaulted accessors.
  std::string get_or(const std::string& key, const std::string& dflt) const;
  long long get_int_or(const std::string& key, long long dflt) const;
  double get_double_or(const std::string& key, double dflt) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  std::string to_text() const;
  void save(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace lfhybrid
