#ifndef DEGENLAB_CONFIG_HPP
#define DEGENLAB_CONFIG_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "degenlab/solver.hpp"

namespace dgl {

/// A problem in a config file; the message already carries "source:line: ".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses "1/32", "0.25", "1e-3".
double parse_number(const std::string& text);

/**
 * Flat "key = value" file. '#' starts a comment, blank lines are ignored,
 * list values are comma separated.
 */
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line_of(const std::string& key) const;
  const std::string& source() const { return source_; }

  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> list(const std::string& key, std::vector<double> fallback = {}) const;

  /// Throws ConfigError at the first key outside the allowed set.
  void require_known(const std::set<std::string>& allowed) const;
  /// Error located at the line of key (or line 0 when absent).
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string source_;
  std::map<std::string, Entry> entries_;
};

/// Keys consumed by solver_config.
const std::set<std::string>& solver_keys();

/// Builds a validated solver configuration; defaults give the p = 2 prototype on n = 2, h = 1/32.
SolverConfig solver_config(const Config& cfg);

}  // namespace dgl

#endif
