#include "cli/config.hpp"

#include "mdisc/csv.hpp"
#include "mdisc/errors.hpp"

#include <algorithm>
#include <fstream>

namespace mdisc::cli {

nlohmann::json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("cannot parse config '" + path.string() + "': " + e.what());
  }
}

namespace {

std::string scalar_text(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw ValidationError("config key '" + key + "' must be a scalar or a list of scalars");
}

}  // namespace

void apply_config(CLI::App& app, const nlohmann::json& config) {
  if (!config.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [raw_key, value] : config.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "command") {
      if (!value.is_string() || value.get<std::string>() != app.get_name()) {
        throw ValidationError("config is for command '" + scalar_text(value, raw_key) + "', not '" +
                              app.get_name() + "'");
      }
      continue;
    }
    if (key == "config") throw ValidationError("config files cannot nest 'config'");
    CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ValidationError("unknown config key '" + raw_key + "' for command '" + app.get_name() + "'");
    if (opt->count() > 0) continue;  // flags win
    std::vector<std::string> parts;
    if (value.is_array()) {
      for (const auto& v : value) parts.push_back(scalar_text(v, raw_key));
    } else {
      parts.push_back(scalar_text(value, raw_key));
    }
    if (parts.empty()) continue;
    try {
      opt->add_result(parts);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ValidationError("config key '" + raw_key + "': " + e.what());
    }
  }
}

}  // namespace mdisc::cli
