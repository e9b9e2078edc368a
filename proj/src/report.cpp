#include "degenlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dgl {

void BoundCheck::record(double ratio) {
  if (samples == 0) tightest = ratio;
  ++samples;
  const double slack = rel_tol * std::abs(allowed);
  bool bad = std::isnan(ratio);
  if (side == Side::upper) {
    if (!bad) tightest = std::max(tightest, ratio);
    bad = bad || ratio > allowed + slack;
  } else {
    if (!bad) tightest = std::min(tightest, ratio);
    bad = bad || ratio < allowed - slack;
  }
  if (bad) ++violations;
}

void BoundCheck::merge(const BoundCheck& o) {
  if (o.samples == 0) return;
  if (samples == 0) {
    tightest = o.tightest;
  } else {
    tightest = side == Side::upper ? std::max(tightest, o.tightest) : std::min(tightest, o.tightest);
  }
  samples += o.samples;
  violations += o.violations;
}

BoundCheck& BoundReport::add(const std::string& check, Side side, double allowed, double rel_tol) {
  BoundCheck c;
  c.name = check;
  c.side = side;
  c.allowed = allowed;
  c.rel_tol = rel_tol;
  checks.push_back(c);
  return checks.back();
}

BoundCheck& BoundReport::at(const std::string& check) {
  for (auto& c : checks)
    if (c.name == check) return c;
  throw std::out_of_range(name + ": no check named " + check);
}

const BoundCheck& BoundReport::at(const std::string& check) const {
  return const_cast<BoundReport*>(this)->at(check);
}

std::uint64_t BoundReport::samples() const {
  std::uint64_t s = 0;
  for (const auto& c : checks) s = std::max(s, c.samples);
  return s;
}

std::uint64_t BoundReport::violations() const {
  std::uint64_t v = 0;
  for (const auto& c : checks) v += c.violations;
  return v;
}

void BoundReport::merge(const BoundReport& o) {
  for (const auto& c : o.checks) {
    auto it = std::find_if(checks.begin(), checks.end(),
                           [&](const BoundCheck& x) { return x.name == c.name; });
    if (it == checks.end())
      checks.push_back(c);
    else
      it->merge(c);
  }
}

nlohmann::json to_json(const BoundCheck& c) {
  nlohmann::json j;
  j["side"] = c.side == Side::upper ? "upper" : "lower";
  j["allowed"] = c.allowed;
  j["samples"] = c.samples;
  j["violations"] = c.violations;
  j["tightest"] = std::isfinite(c.tightest) ? nlohmann::json(c.tightest) : nlohmann::json("inf");
  return j;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["samples"] = r.samples();
  j["violations"] = r.violations();
  nlohmann::json tight = nlohmann::json::object();
  for (const auto& c : r.checks) tight[c.name] = to_json(c);
  j["tightest_constants"] = tight;
  return j;
}

std::string to_text(const std::vector<BoundReport>& reports) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& r : reports) j[r.name] = to_json(r);
  return j.dump(2);
}

}  // namespace dgl
