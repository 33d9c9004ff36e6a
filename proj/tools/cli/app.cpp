#include "cli/app.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "noisy_amp/errors.hpp"

namespace noisy_amp::cli {
namespace {

std::string defaults_listing() {
  std::ostringstream os;
  os << "Figure commands and their defaults:\n";
  for (const Command& c : commands()) {
    os << "  " << c.name << ":";
    for (const ParamSpec& p : c.params) {
      if (p.key == "output" || p.key == "format" || p.key == "dim" || p.key == "dim_scale" || p.key == "max_dim" ||
          p.key == "trunc_tol" || p.key == "num_tol") {
        continue;
      }
      os << ' ' << p.key << '=' << p.default_value;
    }
    os << '\n';
  }
  os << "Every command also takes output, format, dim, dim_scale, max_dim, trunc_tol and num_tol.\n"
        "Config files hold 'key = value' lines; flags override the file, which overrides the defaults.\n"
        "Exit codes: 0 success, 2 configuration error, 3 numerical failure.\n"
        "NOISY_AMP_THREADS caps the number of worker threads.";
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Amplifier and heralded photonic operation simulator", "noisy_amp"};
  app.footer(defaults_listing());
  app.require_subcommand(1);
  app.set_version_flag("--version", NOISY_AMP_VERSION);

  // std::map nodes are stable, so CLI11 may bind to them directly.
  std::map<std::string, std::map<std::string, std::string>> flag_storage;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> subcommands;
  for (const Command& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.summary);
    subcommands[c.name] = sub;
    sub->add_option("--config", config_paths[c.name], "flat key = value config file");
    for (const ParamSpec& p : c.params) {
      const std::string names = p.key == "output" ? "-o," + flag_name(p.key) : flag_name(p.key);
      sub->add_option(names, flag_storage[c.name][p.key], p.help + " (default " + p.default_value + ")");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  const Command* command = nullptr;
  for (const Command& c : commands()) {
    if (subcommands[c.name]->parsed()) command = &c;
  }

  const auto started = std::chrono::steady_clock::now();
  CommandResult result;
  std::optional<Params> params;
  try {
    std::map<std::string, std::string> file_values;
    if (const std::string& path = config_paths[command->name]; !path.empty()) {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot read config file '" + path + "'");
      file_values = parse_config(in, path);
    }
    std::map<std::string, std::string> flag_values;
    for (const ParamSpec& p : command->params) {
      if (subcommands[command->name]->count(p.key == "output" ? "--output" : flag_name(p.key)) > 0) {
        flag_values[p.key] = flag_storage[command->name][p.key];
      }
    }
    params.emplace(command->params, file_values, flag_values);
    result = command->run(*params);
  } catch (const ConfigError& e) {
    err << "noisy_amp " << (command ? command->name : "") << ": configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "noisy_amp " << command->name << ": numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::vector<std::pair<std::string, std::string>> header{{"command", command->name},
                                                          {"version", NOISY_AMP_VERSION}};
  std::string canonical = "command=" + command->name + "\n";
  for (const auto& [key, value] : params->values()) {
    if (key == "output") continue;
    header.emplace_back(key, value);
    canonical += key + "=" + value + "\n";
  }
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(canonical)));
  header.emplace_back("config_hash", hash);
  char stamp[96];
  std::snprintf(stamp, sizeof stamp, "generated = %s wall_seconds = %.3f", utc_timestamp().c_str(), wall);

  std::ostringstream body;
  if (params->text("format") == "json") {
    write_json(body, result.table);
  } else {
    write_csv(body, result.table, header, stamp);
  }
  const std::string& path = params->text("output");
  if (path == "-") {
    out << body.str();
  } else {
    std::ofstream file(path, std::ios::binary);
    if (!(file << body.str())) {
      err << "noisy_amp " << command->name << ": cannot write '" << path << "'\n";
      return kExitConfig;
    }
  }

  if (!result.errors.empty()) {
    err << "noisy_amp " << command->name << ": " << result.errors.size() << " point(s) failed\n";
    for (const auto& e : result.errors) err << "  " << e << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace noisy_amp::cli
