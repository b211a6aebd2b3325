#pragma once

// Flat key=value configuration with [sections]. Keys before the first section
// apply to every section; a section's own keys win. '#' starts a comment.
//
//   tol = 1e-10
//   [gn_usc]
//   n = 3
//   x_grid = 0.1, 0.05, 0.01

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wu/errors.hpp"

namespace wu {

struct ConfigEntry {
  std::string value;
  int line = 0;
};

class Config {
 public:
  using Section = std::map<std::string, ConfigEntry>;

  static Config parse(std::istream& in, const std::string& source = "config") {
    Config cfg;
    cfg.source_ = source;
    std::string current;
    cfg.data_[current];
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (text.empty()) continue;
      auto fail = [&](const std::string& what, const std::string& field = {}) {
        return ConfigError(source + ":" + std::to_string(line) + ": " + what, line, field);
      };
      if (text.front() == '[') {
        if (text.back() != ']') throw fail("section header needs a closing ']'");
        current = trim(text.substr(1, text.size() - 2));
        if (current.empty()) throw fail("empty section name");
        cfg.data_[current];
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw fail("expected key = value");
      const std::string key = trim(text.substr(0, eq));
      if (key.empty()) throw fail("missing key before '='");
      auto& section = cfg.data_[current];
      if (section.count(key)) throw fail("duplicate key '" + key + "'", key);
      section[key] = ConfigEntry{trim(text.substr(eq + 1)), line};
    }
    return cfg;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
  }

  static Config from_string(const std::string& text, const std::string& source = "config") {
    std::istringstream in(text);
    return parse(in, source);
  }

  bool has_section(const std::string& name) const { return data_.count(name) > 0; }

  /// Keys visible to a section: the global ones overlaid with its own.
  Section section(const std::string& name) const {
    Section out;
    if (auto it = data_.find(""); it != data_.end()) out = it->second;
    if (auto it = data_.find(name); it != data_.end()) {
      for (const auto& [k, v] : it->second) out[k] = v;
    }
    return out;
  }

  std::vector<std::string> sections() const {
    std::vector<std::string> out;
    for (const auto& [name, entries] : data_) {
      if (!name.empty()) out.push_back(name);
    }
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, Section> data_;
  std::string source_;
};

}  // namespace wu
