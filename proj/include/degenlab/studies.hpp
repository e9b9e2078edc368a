#ifndef DEGENLAB_STUDIES_HPP
#define DEGENLAB_STUDIES_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "degenlab/aux_calculus.hpp"
#include "degenlab/config.hpp"
#include "degenlab/solver.hpp"

namespace dgl {

struct StudySpec {
  std::string kind;
  SolverConfig base;
  std::vector<double> eps_ladder;       // strictly decreasing
  std::vector<double> eps_ladder_b;     // second ladder for the uniqueness check
  double eps_ref = 0.0125;
  double r = 0.25;
  std::vector<double> s_values{0.5};
  std::vector<double> z1;               // x1..xn, t1; defaults to the box centre at T
  std::vector<double> refinement_ladder;  // grid spacings; empty uses the base grid
  int k_max = 6;
  double alpha = -1.0;                  // Zygmund exponent; negative means 2 n_hat + 4
  int workers = 1;
};

/// Keys accepted in study configs (solver keys plus study keys).
const std::set<std::string>& study_keys();
StudySpec study_spec(const Config& cfg, const std::string& kind);

/// Checks the ladder and cylinder invariants; throws std::invalid_argument.
void check_spec(const StudySpec& spec);

struct StudyResult {
  bool ok = true;
  std::string csv;        // header row plus one row per table entry
  nlohmann::json summary;
};

StudyResult study_eps_convergence(const StudySpec& spec);
StudyResult study_uniqueness(const StudySpec& spec);
StudyResult study_gradient_bound(const StudySpec& spec);
StudyResult study_moser_trace(const StudySpec& spec);
StudyResult study_max_principle(const StudySpec& spec);

StudyResult run_study(const StudySpec& spec);

// Building blocks shared with the tests.

/// H_delta(Du) at every node of every stored level.
GridField h_delta_field(const GridField& u, double delta);
/// |G_delta(Du) - G_delta(Dv)| at every node of every stored level.
GridField g_delta_difference(const GridField& u, const GridField& v, double delta);
/// sup over stored levels of ||u - v||_{L^2}^2.
double sup_l2_distance_sq(const GridField& u, const GridField& v);
/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct MoserTrace {
  std::vector<double> exponents;    // gamma_k + frak_p
  std::vector<double> radii;        // r_k
  std::vector<double> normalized;   // M_k^(1/(gamma_k + frak_p))
  int k_used = 0;                   // after the overflow guard
  bool truncated = false;
  double sup = 0.0;                 // sup of H over Q_{sr}
};

MoserTrace moser_trace(const GridField& H, const ExponentTable& tab, const ParabolicCylinder& Q,
                       double s, int k_max);

}  // namespace dgl

#endif
