#ifndef DEGENLAB_REPORT_HPP
#define DEGENLAB_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dgl {

enum class Side { upper, lower };

/**
 * One sampled inequality. Each sample contributes a ratio that must stay
 * below (Side::upper) or above (Side::lower) the allowed constant; tightest
 * keeps the extreme ratio seen, i.e. the best constant the samples support.
 */
struct BoundCheck {
  std::string name;
  Side side = Side::upper;
  double allowed = 0.0;
  double rel_tol = 1e-12;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  double tightest = 0.0;

  void record(double ratio);
  void merge(const BoundCheck& o);
};

struct BoundReport {
  std::string name;
  std::vector<BoundCheck> checks;

  BoundCheck& add(const std::string& check, Side side, double allowed, double rel_tol = 1e-12);
  BoundCheck& at(const std::string& check);
  const BoundCheck& at(const std::string& check) const;
  std::uint64_t samples() const;
  std::uint64_t violations() const;
  bool ok() const { return violations() == 0; }
  void merge(const BoundReport& o);
};

nlohmann::json to_json(const BoundCheck& c);
nlohmann::json to_json(const BoundReport& r);
std::string to_text(const std::vector<BoundReport>& reports);

}  // namespace dgl

#endif
