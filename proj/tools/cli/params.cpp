#include "cli/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace noisy_amp::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_real(const std::string& text, double& out) {
  if (text == "inf") {
    out = INFINITY;
    return true;
  }
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_integer(const std::string& text, long& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::function<std::string(const std::string&)> numeric(std::function<bool(double)> ok, std::string what) {
  return [ok = std::move(ok), what = std::move(what)](const std::string& v) -> std::string {
    double x = 0.0;
    if (!parse_real(v, x) || !std::isfinite(x)) return "expected a finite number";
    return ok(x) ? std::string() : what;
  };
}

}  // namespace

namespace checks {

std::function<std::string(const std::string&)> positive() {
  return numeric([](double x) { return x > 0.0; }, "must be > 0");
}

std::function<std::string(const std::string&)> non_negative() {
  return numeric([](double x) { return x >= 0.0; }, "must be >= 0");
}

std::function<std::string(const std::string&)> at_least(double lo) {
  std::ostringstream os;
  os << "must be >= " << lo;
  return numeric([lo](double x) { return x >= lo; }, os.str());
}

std::function<std::string(const std::string&)> greater_than(double lo) {
  std::ostringstream os;
  os << "must be > " << lo;
  return numeric([lo](double x) { return x > lo; }, os.str());
}

std::function<std::string(const std::string&)> in_range(double lo, double hi) {
  std::ostringstream os;
  os << "must lie in [" << lo << ", " << hi << "]";
  return numeric([lo, hi](double x) { return x >= lo && x <= hi; }, os.str());
}

std::function<std::string(const std::string&)> one_of(std::vector<std::string> choices) {
  return [choices = std::move(choices)](const std::string& v) -> std::string {
    if (std::find(choices.begin(), choices.end(), v) != choices.end()) return {};
    std::string msg = "must be one of";
    for (const auto& c : choices) msg += " " + c;
    return msg;
  };
}

}  // namespace checks

std::string flag_name(const std::string& key) {
  std::string flag = "--" + key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return flag;
}

std::map<std::string, std::string> parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> out;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    out[key] = value;
  }
  return out;
}

Params::Params(const std::vector<ParamSpec>& specs, const std::map<std::string, std::string>& file_values,
               const std::map<std::string, std::string>& flag_values) {
  for (const auto& layer : {&file_values, &flag_values}) {
    for (const auto& [key, value] : *layer) {
      const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.key == key; });
      if (!known) throw ConfigError("unknown key '" + key + "'");
    }
  }
  for (const auto& spec : specs) {
    std::string value = spec.default_value;
    if (auto it = file_values.find(spec.key); it != file_values.end()) value = it->second;
    if (auto it = flag_values.find(spec.key); it != flag_values.end()) value = it->second;
    if (spec.type == ParamType::Real) {
      double x = 0.0;
      if (!parse_real(value, x)) throw ConfigError("key '" + spec.key + "': '" + value + "' is not a number");
    } else if (spec.type == ParamType::Integer) {
      long n = 0;
      if (!parse_integer(value, n)) throw ConfigError("key '" + spec.key + "': '" + value + "' is not an integer");
    }
    if (spec.check) {
      if (const std::string err = spec.check(value); !err.empty()) {
        throw ConfigError("key '" + spec.key + "' = " + value + ": " + err);
      }
    }
    values_[spec.key] = value;
  }
}

double Params::real(const std::string& key) const {
  double x = 0.0;
  parse_real(values_.at(key), x);
  return x;
}

long Params::integer(const std::string& key) const {
  long n = 0;
  parse_integer(values_.at(key), n);
  return n;
}

const std::string& Params::text(const std::string& key) const { return values_.at(key); }

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace noisy_amp::cli
