#pragma once

// Resolved key/value parameters of one CLI run: built-in defaults, then the
// config file, then command-line flags.

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace noisy_amp::cli {

/// Bad user input: unknown key, malformed value, failed range check. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParamType { Real, Integer, Text };

struct ParamSpec {
  std::string key;  // snake_case; the flag is --key with '-' for '_'
  ParamType type;
  std::string default_value;
  std::string help;
  /// Returns an error message, or empty if the value is acceptable.
  std::function<std::string(const std::string&)> check;
};

/// Predicates for ParamSpec::check.
namespace checks {
std::function<std::string(const std::string&)> positive();
std::function<std::string(const std::string&)> non_negative();
std::function<std::string(const std::string&)> at_least(double lo);
std::function<std::string(const std::string&)> greater_than(double lo);
std::function<std::string(const std::string&)> in_range(double lo, double hi);
std::function<std::string(const std::string&)> one_of(std::vector<std::string> choices);
}  // namespace checks

std::string flag_name(const std::string& key);

/// Flat "key = value" lines; '#' starts a comment, blank lines are skipped.
/// Throws ConfigError naming the line on malformed input.
std::map<std::string, std::string> parse_config(std::istream& in, const std::string& source);

class Params {
 public:
  Params(const std::vector<ParamSpec>& specs, const std::map<std::string, std::string>& file_values,
         const std::map<std::string, std::string>& flag_values);

  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  const std::string& text(const std::string& key) const;

  /// All resolved values in key order.
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace noisy_amp::cli
