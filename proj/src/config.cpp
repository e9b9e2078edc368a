#include "degenlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "degenlab/aux_calculus.hpp"
#include "degenlab/presets.hpp"

namespace dgl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& t) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw std::invalid_argument("not a number: '" + t + "'");
  return v;
}

}  // namespace

double parse_number(const std::string& raw) {
  const std::string t = trim(raw);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return parse_plain(t);
  const double num = parse_plain(trim(t.substr(0, slash)));
  const double den = parse_plain(trim(t.substr(slash + 1)));
  if (den == 0.0) throw std::invalid_argument("division by zero in '" + t + "'");
  return num / den;
}

Config Config::parse(std::istream& in, const std::string& source) {
  Config c;
  c.source_ = source;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(no) + ": expected 'key = value'", no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(no) + ": missing key", no);
    if (value.empty())
      throw ConfigError(source + ":" + std::to_string(no) + ": missing value for '" + key + "'", no);
    if (c.entries_.count(key))
      throw ConfigError(source + ":" + std::to_string(no) + ": duplicate key '" + key + "' (first set on line " +
                            std::to_string(c.entries_[key].line) + ")",
                        no);
    c.entries_[key] = {value, no};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file", 0);
  return parse(in, path);
}

int Config::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

void Config::fail(const std::string& key, const std::string& message) const {
  const int line = line_of(key);
  throw ConfigError(source_ + ":" + std::to_string(line) + ": " + key + ": " + message, line);
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double Config::number(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  try {
    return parse_number(text(key, ""));
  } catch (const std::exception& e) {
    fail(key, e.what());
  }
}

int Config::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key, 0.0);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(key, "expected an integer");
  return static_cast<int>(v);
}

std::uint64_t Config::unsigned_integer(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string t = trim(text(key, ""));
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char ch) { return std::isdigit(ch); }))
    fail(key, "expected a nonnegative integer");
  return std::stoull(t);
}

std::vector<double> Config::list(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  std::istringstream is(text(key, ""));
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      out.push_back(parse_number(item));
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
  }
  return out;
}

void Config::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, entry] : entries_)
    if (!allowed.count(key))
      throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'",
                        entry.line);
}

const std::set<std::string>& solver_keys() {
  static const std::set<std::string> keys{
      "n", "N", "p", "L", "C1", "K", "delta", "epsilon", "beta", "h", "T", "t0", "cfl_safety",
      "coefficient_a", "datum_f", "boundary_g", "snapshot_every"};
  return keys;
}

SolverConfig solver_config(const Config& c) {
  SolverConfig s;
  StructureParams& prm = s.params;
  prm.n = c.integer("n", 2);
  prm.N = c.integer("N", 1);
  prm.p = c.number("p", 2.0);
  prm.L = c.number("L", std::max(1.0, prm.p));
  prm.C1 = c.number("C1", std::max(2.0, prm.p));
  prm.K = c.number("K", 1.0);
  prm.delta = c.number("delta", 1.0);
  prm.epsilon = c.number("epsilon", 0.1);
  prm.beta = c.number("beta", default_beta(prm.p));
  try {
    validate(prm);
  } catch (const std::invalid_argument& e) {
    // Point at the most likely culprit line.
    std::string key = "p";
    const std::string what = e.what();
    for (const char* k : {"epsilon", "beta", "delta", "C1", "L", "K", "n", "N"})
      if (what.find(k) != std::string::npos) {
        key = k;
        break;
      }
    c.fail(key, what);
  }

  const double h = c.number("h", 1.0 / 32.0);
  try {
    s.grid = Grid::from_spacing(prm.n, h);
  } catch (const std::invalid_argument& e) {
    c.fail("h", e.what());
  }
  s.t0 = c.number("t0", 0.0);
  s.T = c.number("T", 0.1);
  if (!(s.T > s.t0)) c.fail("T", "must exceed t0");
  s.cfl_safety = c.number("cfl_safety", 0.25);
  if (!(s.cfl_safety > 0.0 && s.cfl_safety < 1.0)) c.fail("cfl_safety", "must lie in (0,1)");
  s.snapshot_every = c.number("snapshot_every", 0.0);
  if (!(s.snapshot_every >= 0.0)) c.fail("snapshot_every", "must be nonnegative");

  try {
    const Preset a = parse_preset(c.text("coefficient_a", "const 1"), prm.n);
    s.coefficient = a.fn;
  } catch (const std::invalid_argument& e) {
    c.fail("coefficient_a", e.what());
  }
  try {
    for (const auto& g : parse_vector_preset(c.text("boundary_g", "const 0"), prm.n, prm.N))
      s.boundary.push_back(g.fn);
  } catch (const std::invalid_argument& e) {
    c.fail("boundary_g", e.what());
  }
  try {
    const auto f = parse_vector_preset(c.text("datum_f", "const 0"), prm.n, prm.N);
    const bool all_zero = std::all_of(f.begin(), f.end(), [](const Preset& q) { return q.zero; });
    if (!all_zero)
      for (const auto& q : f) s.datum.push_back(q.fn);
  } catch (const std::invalid_argument& e) {
    c.fail("datum_f", e.what());
  }
  return s;
}

}  // namespace dgl
