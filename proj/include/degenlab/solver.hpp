#ifndef DEGENLAB_SOLVER_HPP
#define DEGENLAB_SOLVER_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "degenlab/grid.hpp"
#include "degenlab/regularization.hpp"
#include "degenlab/structure.hpp"

namespace dgl {

/// Componentwise clamp of f to [-1/eps, 1/eps].
Field truncate_datum(const Field& f, double eps);
GridField truncate_datum(const GridField& f, double eps);

/** Explicit scheme for u_t - div A_eps(x,t,Du) = f_eps with Dirichlet data g. */
struct SolverConfig {
  StructureParams params;     // params.epsilon = 0 runs the unregularized field
  CoefficientFn coefficient;  // a(x,t) of the prototype; null means a = 1
  Grid grid;
  double t0 = 0.0;
  double T = 1.0;
  std::vector<CoefficientFn> boundary;  // g, one per component; also the initial datum
  std::vector<CoefficientFn> datum;     // f, one per component; empty means f = 0
  std::optional<Field> initial;         // overrides g(., t0) in the interior when set
  double cfl_safety = 0.25;
  double snapshot_every = 0.0;          // simulated time between stored levels; 0 stores t0 and T only
  std::size_t max_steps = 50'000'000;
  bool record_extrema = true;           // per-step min/max per component

  bool homogeneous() const { return datum.empty(); }
  void check() const;
};

struct Extremum {
  double value = 0.0;
  std::size_t node = 0;
  double t = 0.0;
};

struct StepExtrema {
  double t = 0.0;
  std::vector<double> min, max;   // per component
  std::vector<std::size_t> argmin, argmax;
  double max_total = 0.0;  // max nodal Euclidean |u|
};

struct Monitors {
  std::vector<Extremum> min, max;  // running extremes per component
  double max_gradient = 0.0;       // max nodal |Du| over all steps
  double max_total = 0.0;          // max nodal |u| over all steps
  double energy = 0.0;             // latest sum |u|^2 h^n
  std::vector<double> energies;    // one per accepted level, starting at t0
  std::vector<double> dts;
};

struct SolverState {
  Field u;
  double t = 0.0;
  std::size_t steps = 0;
  Monitors monitors;
  StepExtrema last;  // extremes of the current level
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, std::size_t step, double t)
      : std::runtime_error(what), step_(step), t_(t) {}
  std::size_t step() const { return step_; }
  double time() const { return t_; }

 private:
  std::size_t step_;
  double t_;
};

class Solver {
 public:
  explicit Solver(SolverConfig cfg);

  const SolverConfig& config() const { return cfg_; }
  const RegularizedField& field() const { return field_; }

  SolverState initial_state() const;
  /**
   * dt = cfl_safety h^2 / Lambda with Lambda = 2n max{1, max over faces of h_eps(|Du_face|)}.
   * The face coefficient h_eps is what multiplies the normal difference quotient, so the
   * update is a convex combination of neighbour values whenever cfl_safety <= 1.
   */
  double stable_dt(const SolverState& s) const;
  /// Advances by min(stable_dt, dt_cap); returns the step actually taken.
  double step(SolverState& s, double dt_cap = INFINITY) const;

 private:
  double face_coefficients(const Field& u, double t, std::array<std::vector<double>, 3>& coef,
                           double* max_grad) const;
  void apply_boundary(Field& u, double t) const;
  void update_monitors(SolverState& s) const;

  SolverConfig cfg_;
  RegularizedField field_;
  std::vector<std::vector<double>> coords_;
  std::vector<char> boundary_;
};

struct SolverRun {
  GridField trajectory;
  std::vector<StepExtrema> extrema;  // one entry per accepted step, plus t0
  Monitors monitors;
  std::size_t steps = 0;
  bool homogeneous = true;
  double reference_sup = 0.0;        // max |g^i| over the boundary and initial nodes
};

SolverRun solve(const SolverConfig& cfg);

struct MaxPrincipleReport {
  bool applicable = true;
  std::string reason;
  double bound = 0.0;
  double tolerance = 0.0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max over checks of |u^i| - bound
  std::size_t first_step = 0;
  int first_component = -1;
  std::size_t first_node = 0;
  std::size_t total_norm_violations = 0;  // |u| > sqrt(N) bound
};

/// Per-step check u^i in [-k,k]; tolerance defaults to 10 machine epsilons times k.
MaxPrincipleReport max_principle_monitor(const SolverRun& run, double reference_bound,
                                         double tolerance = -1.0);

}  // namespace dgl

#endif
