#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace selfsim {

// "key = value" lines; '#' starts a comment. Keys keep file order for
// generator listings.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  const std::vector<std::string>& keys() const { return order_; }
  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

// "1 2; 3 4" -> {{1,2},{3,4}}
std::vector<std::vector<long long>> parse_rows(std::string_view text);

}  // namespace selfsim
