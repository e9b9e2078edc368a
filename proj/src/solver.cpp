#include "degenlab/solver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

namespace dgl {

Field truncate_datum(const Field& f, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("truncate_datum: eps must lie in (0,1/2)");
  Field out = f;
  const double cap = 1.0 / eps;
  for (double& v : out.data()) v = std::max(-cap, std::min(v, cap));
  return out;
}

GridField truncate_datum(const GridField& f, double eps) {
  GridField out(f.grid(), f.components());
  for (std::size_t l = 0; l < f.levels(); ++l) out.push(f.time(l), truncate_datum(f.level(l), eps));
  return out;
}

void SolverConfig::check() const {
  validate(params);
  if (grid.dim() != params.n) throw std::invalid_argument("solver: grid dimension differs from n");
  if (!(T > t0)) throw std::invalid_argument("solver: T must exceed t0");
  if (static_cast<int>(boundary.size()) != params.N)
    throw std::invalid_argument("solver: boundary datum needs one function per component");
  if (!datum.empty() && static_cast<int>(datum.size()) != params.N)
    throw std::invalid_argument("solver: datum f needs one function per component");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) throw std::invalid_argument("solver: cfl_safety must lie in (0,1)");
  if (!(snapshot_every >= 0.0)) throw std::invalid_argument("solver: snapshot_every must be nonnegative");
  if (initial && (!(initial->grid() == grid) || initial->components() != params.N))
    throw std::invalid_argument("solver: initial field does not match the grid");
}

namespace {

StructureFunction make_structure(const SolverConfig& cfg) {
  cfg.check();
  return cfg.coefficient ? prototype(cfg.params.p, cfg.coefficient) : prototype(cfg.params.p, 1.0);
}

}  // namespace

Solver::Solver(SolverConfig cfg)
    : cfg_(std::move(cfg)), field_(cfg_.params, make_structure(cfg_)) {
  const Grid& g = cfg_.grid;
  coords_.assign(g.node_count(), std::vector<double>(g.dim()));
  boundary_.assign(g.node_count(), 0);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    g.coords(v, coords_[v].data());
    boundary_[v] = g.on_boundary(v);
  }
}

void Solver::apply_boundary(Field& u, double t) const {
  for (std::size_t v = 0; v < boundary_.size(); ++v) {
    if (!boundary_[v]) continue;
    for (int i = 0; i < cfg_.params.N; ++i) u(v, i) = cfg_.boundary[i](coords_[v], t);
  }
}

void Solver::update_monitors(SolverState& s) const {
  const int N = cfg_.params.N;
  StepExtrema e;
  e.t = s.t;
  e.min.assign(N, INFINITY);
  e.max.assign(N, -INFINITY);
  e.argmin.assign(N, 0);
  e.argmax.assign(N, 0);
  double energy = 0.0;
  for (std::size_t v = 0; v < cfg_.grid.node_count(); ++v) {
    double sq = 0.0;
    for (int i = 0; i < N; ++i) {
      const double x = s.u(v, i);
      if (!std::isfinite(x) || std::abs(x) > 1e12) {
        std::ostringstream os;
        os << "solution blew up at step " << s.steps << ", t = " << s.t << ", node " << v
           << " (value " << x << "); reduce cfl_safety or check the data";
        throw BlowUpError(os.str(), s.steps, s.t);
      }
      if (x < e.min[i]) e.min[i] = x, e.argmin[i] = v;
      if (x > e.max[i]) e.max[i] = x, e.argmax[i] = v;
      sq += x * x;
    }
    energy += sq;
    e.max_total = std::max(e.max_total, std::sqrt(sq));
  }
  Monitors& m = s.monitors;
  if (m.min.empty()) {
    m.min.assign(N, Extremum{INFINITY, 0, s.t});
    m.max.assign(N, Extremum{-INFINITY, 0, s.t});
  }
  for (int i = 0; i < N; ++i) {
    if (e.min[i] < m.min[i].value) m.min[i] = {e.min[i], e.argmin[i], s.t};
    if (e.max[i] > m.max[i].value) m.max[i] = {e.max[i], e.argmax[i], s.t};
  }
  m.max_total = std::max(m.max_total, e.max_total);
  m.energy = energy * cfg_.grid.cell_volume();
  m.energies.push_back(m.energy);
  s.last = std::move(e);
}

SolverState Solver::initial_state() const {
  SolverState s;
  s.t = cfg_.t0;
  s.u = Field(cfg_.grid, cfg_.params.N);
  for (std::size_t v = 0; v < coords_.size(); ++v)
    for (int i = 0; i < cfg_.params.N; ++i)
      s.u(v, i) = cfg_.initial && !boundary_[v] ? (*cfg_.initial)(v, i)
                                                 : cfg_.boundary[i](coords_[v], cfg_.t0);
  update_monitors(s);
  return s;
}

double Solver::face_coefficients(const Field& u, double t, std::array<std::vector<double>, 3>& coef,
                                 double* max_grad) const {
  const Grid& g = cfg_.grid;
  const int n = g.dim(), N = cfg_.params.N;
  const GradientField Du = gradient(u);
  if (max_grad) {
    double best = 0.0;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      double sq = 0.0;
      for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) sq += Du(v, i, k) * Du(v, i, k);
      best = std::max(best, sq);
    }
    *max_grad = std::sqrt(best);
  }
  const double h = g.h();
  double top = 0.0;
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) {
    auto& c = coef[k];
    c.assign(g.node_count(), 0.0);
    const std::size_t sk = g.stride(k);
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      if (g.coord_index(v, k) == g.cells()) continue;
      const std::size_t w = v + sk;
      if (boundary_[v] && boundary_[w]) continue;  // faces not seen by any interior node
      double sq = 0.0;
      for (int i = 0; i < N; ++i) {
        for (int m = 0; m < n; ++m) {
          const double d = m == k ? (u(w, i) - u(v, i)) / h : 0.5 * (Du(v, i, m) + Du(w, i, m));
          sq += d * d;
        }
      }
      if (sq == 0.0) continue;
      for (int m = 0; m < n; ++m) x[m] = coords_[v][m];
      x[k] += 0.5 * h;
      c[v] = field_.h(x, t, std::sqrt(sq));
      top = std::max(top, c[v]);
    }
  }
  return top;
}

double Solver::stable_dt(const SolverState& s) const {
  std::array<std::vector<double>, 3> coef;
  const double top = face_coefficients(s.u, s.t, coef, nullptr);
  const double h = cfg_.grid.h();
  return cfg_.cfl_safety * h * h / (2.0 * cfg_.grid.dim() * std::max(1.0, top));
}

double Solver::step(SolverState& s, double dt_cap) const {
  const Grid& g = cfg_.grid;
  const int n = g.dim(), N = cfg_.params.N;
  const double h = g.h();
  std::array<std::vector<double>, 3> coef;
  double max_grad = 0.0;
  const double top = face_coefficients(s.u, s.t, coef, &max_grad);
  s.monitors.max_gradient = std::max(s.monitors.max_gradient, max_grad);
  if (!std::isfinite(top)) throw BlowUpError("face coefficient is not finite", s.steps, s.t);
  const double stable = cfg_.cfl_safety * h * h / (2.0 * n * std::max(1.0, top));
  const double dt = std::min(stable, dt_cap);
  if (!(dt > 0.0)) throw std::runtime_error("solver: time step collapsed to zero");

  FaceFlux flux(g, N);
  for (int k = 0; k < n; ++k) {
    const std::size_t sk = g.stride(k);
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      const double c = coef[k][v];
      if (c == 0.0) continue;
      for (int i = 0; i < N; ++i) flux.at(k, v, i) = c * (s.u(v + sk, i) - s.u(v, i)) / h;
    }
  }
  const Field div = divergence_of_flux(flux);
  const double eps = cfg_.params.epsilon;
  Field next = s.u;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (boundary_[v]) continue;
    for (int i = 0; i < N; ++i) {
      double f = 0.0;
      if (!cfg_.datum.empty()) {
        f = cfg_.datum[i](coords_[v], s.t);
        if (eps > 0.0) f = std::max(-1.0 / eps, std::min(f, 1.0 / eps));
      }
      next(v, i) = s.u(v, i) + dt * (div(v, i) + f);
    }
  }
  s.t += dt;
  apply_boundary(next, s.t);
  s.u = std::move(next);
  ++s.steps;
  s.monitors.dts.push_back(dt);
  update_monitors(s);
  return dt;
}

SolverRun solve(const SolverConfig& cfg) {
  const Solver S(cfg);
  SolverState s = S.initial_state();
  SolverRun run;
  run.homogeneous = cfg.homogeneous();
  run.trajectory = GridField(cfg.grid, cfg.params.N);
  run.trajectory.push(s.t, s.u);
  if (cfg.record_extrema) run.extrema.push_back(s.last);

  const Grid& g = cfg.grid;
  auto boundary_sup = [&](const Field& u, bool all) {
    double best = 0.0;
    for (std::size_t v = 0; v < g.node_count(); ++v)
      if (all || g.on_boundary(v))
        for (int i = 0; i < cfg.params.N; ++i) best = std::max(best, std::abs(u(v, i)));
    return best;
  };
  run.reference_sup = boundary_sup(s.u, true);

  const double span = cfg.T - cfg.t0;
  const double every = cfg.snapshot_every > 0.0 ? cfg.snapshot_every : span;
  std::size_t next_index = 1;
  auto target_of = [&](std::size_t j) { return std::min(cfg.T, cfg.t0 + j * every); };
  double target = target_of(next_index);
  while (s.t < cfg.T) {
    if (s.steps >= cfg.max_steps)
      throw std::runtime_error("solver: step budget exhausted before reaching T (dt too small)");
    const double cap = target - s.t;
    const double dt = S.step(s, cap);
    if (dt == cap) s.t = target;
    run.reference_sup = std::max(run.reference_sup, boundary_sup(s.u, false));
    if (cfg.record_extrema) {
      run.extrema.push_back(s.last);
      run.extrema.back().t = s.t;
    }
    if (s.t >= target) {
      run.trajectory.push(s.t, s.u);
      target = target_of(++next_index);
    }
  }
  double final_grad = 0.0;
  {
    const GradientField Du = gradient(s.u);
    for (std::size_t v = 0; v < g.node_count(); ++v) final_grad = std::max(final_grad, Du.at(v).norm());
  }
  s.monitors.max_gradient = std::max(s.monitors.max_gradient, final_grad);
  run.monitors = std::move(s.monitors);
  run.steps = s.steps;
  return run;
}

MaxPrincipleReport max_principle_monitor(const SolverRun& run, double k, double tolerance) {
  MaxPrincipleReport r;
  r.bound = k;
  r.tolerance = tolerance >= 0.0 ? tolerance : 10.0 * DBL_EPSILON * k;
  if (!run.homogeneous) {
    r.applicable = false;
    r.reason = "the maximum principle is only asserted for homogeneous runs (f = 0)";
    return r;
  }
  if (run.extrema.empty()) {
    r.applicable = false;
    r.reason = "run did not record per-step extrema";
    return r;
  }
  r.worst_excess = -INFINITY;
  const double root_n = std::sqrt(static_cast<double>(run.trajectory.components()));
  for (std::size_t step = 0; step < run.extrema.size(); ++step) {
    const StepExtrema& e = run.extrema[step];
    for (std::size_t i = 0; i < e.min.size(); ++i) {
      const double over = e.max[i] - k, under = -k - e.min[i];
      const double excess = std::max(over, under);
      ++r.checks;
      r.worst_excess = std::max(r.worst_excess, excess);
      if (excess > r.tolerance) {
        if (r.violations == 0) {
          r.first_step = step;
          r.first_component = static_cast<int>(i);
          r.first_node = over >= under ? e.argmax[i] : e.argmin[i];
        }
        ++r.violations;
      }
    }
    if (e.max_total > root_n * k + r.tolerance) ++r.total_norm_violations;
  }
  return r;
}

}  // namespace dgl
