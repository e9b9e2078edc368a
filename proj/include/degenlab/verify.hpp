#ifndef DEGENLAB_VERIFY_HPP
#define DEGENLAB_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dgl {

struct VerifyRow {
  std::string suite;
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  std::uint64_t samples = 10000;
  int shards = 1;
};

/// Property suites for the structure, regularization and auxiliary-calculus layers.
std::vector<VerifyRow> run_verify(const VerifyOptions& opt = {});
std::string verify_table(const std::vector<VerifyRow>& rows);

}  // namespace dgl

#endif
