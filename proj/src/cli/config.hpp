#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <string>

namespace mdisc::cli {

nlohmann::json load_config(const std::filesystem::path& path);

/// Feeds a JSON object into the options of `app`. Keys are long option
/// names without the leading dashes ('_' and '-' interchangeable); arrays
/// fill list options. Options already given on the command line keep their
/// value. Unknown keys, and a "command" key naming another subcommand, throw
/// ValidationError.
void apply_config(CLI::App& app, const nlohmann::json& config);

}  // namespace mdisc::cli
