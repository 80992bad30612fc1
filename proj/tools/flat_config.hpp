#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace pipeline {

// Flat typed key=value run configuration ('#' comments, optional quotes).
// Keys are the long option names of the subcommand; values given on the
// command line win over file values.
inline std::vector<std::pair<std::string, std::string>> parse_flat_config(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
  std::vector<std::pair<std::string, std::string>> items;
  std::string line;
  const auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed config line (expected key=value): " + line);
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                              (value.front() == '\'' && value.back() == '\''))) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) throw std::invalid_argument("empty key in config line: " + line);
    items.emplace_back(std::move(key), std::move(value));
  }
  return items;
}

inline void apply_flat_config(CLI::App* cmd, const std::filesystem::path& path) {
  for (const auto& [key, value] : parse_flat_config(path)) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw std::invalid_argument("unknown config key '" + key + "' for " + cmd->get_name());
    }
    if (opt->count() > 0) continue;  // command line overrides the file
    opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace pipeline
