#include "degenlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "degenlab/aux_calculus.hpp"
#include "degenlab/regularization.hpp"
#include "degenlab/sampling.hpp"
#include "degenlab/structure.hpp"

namespace dgl {

namespace {

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

VerifyRow from_report(const std::string& suite, const std::string& name, const BoundReport& r) {
  std::ostringstream os;
  os << r.samples() << " samples, " << r.violations() << " violations";
  return {suite, name, r.ok() && r.samples() > 0, os.str()};
}

StructureParams params_for(double p, double eps, double delta = 1.0) {
  StructureParams prm;
  prm.n = 2;
  prm.N = 2;
  prm.p = p;
  prm.L = std::max(1.0, p);
  prm.C1 = std::max(2.0, p);
  prm.delta = delta;
  prm.epsilon = eps;
  prm.beta = default_beta(p);
  return prm;
}

GradientMatrix random_matrix(std::mt19937_64& g, int N, int n, double scale) {
  GradientMatrix m(N, n);
  for (double& v : m.data()) v = scale * normal(g);
  return m;
}

void structure_suite(const VerifyOptions& o, std::vector<VerifyRow>& out) {
  ConditionSampling cs;
  cs.samples = o.samples;
  cs.seed = o.seed;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto prm = params_for(p, 0.1);
    out.push_back(from_report("structure", "H1-H4 prototype p=" + fmt("%g", p),
                              check_structure_conditions(prototype(p), prm, cs)));
  }
  {
    auto prm = params_for(2.0, 0.1);
    prm.C1 = 3.0;  // a ranges over [1, 1+sqrt 2]
    prm.L = 2.0 * (1.0 + std::sqrt(2.0));
    const auto F = prototype(2.0, [](Point x, double) { return 1.0 + std::hypot(x[0], x[1]); });
    out.push_back(from_report("structure", "H1-H4 coefficient 1+|x|", check_structure_conditions(F, prm, cs)));
  }
  // A vanishes on the unit ball and is monotone.
  for (double p : {1.5, 2.0, 3.0}) {
    const auto F = prototype(p);
    std::uint64_t bad_ball = 0, bad_mono = 0;
    const double x0[2] = {0.5, 0.5};
    for (std::uint64_t k = 0; k < o.samples; ++k) {
      auto g = sample_stream(o.seed + 1, k);
      GradientMatrix xi = random_matrix(g, 2, 2, 1.0);
      const double s = xi.norm();
      if (s > 0.0) xi *= uniform(g, 0.0, 1.0) / s;
      if (vector_field_A(F, x0, 0.0, xi).norm() != 0.0) ++bad_ball;
      const GradientMatrix a = random_matrix(g, 2, 2, 2.0), b = random_matrix(g, 2, 2, 2.0);
      const double gap = (vector_field_A(F, x0, 0.0, a) - vector_field_A(F, x0, 0.0, b)).dot(a - b);
      if (gap < -1e-12 * (1.0 + (a - b).norm())) ++bad_mono;
    }
    out.push_back({"structure", "A = 0 on the unit ball, p=" + fmt("%g", p), bad_ball == 0,
                   std::to_string(bad_ball) + " nonzero values"});
    out.push_back({"structure", "A monotone, p=" + fmt("%g", p), bad_mono == 0,
                   std::to_string(bad_mono) + " negative pairings"});
  }
}

void regularization_suite(const VerifyOptions& o, std::vector<VerifyRow>& out) {
  const auto& m = *Mollifier1D::standard();
  {
    std::uint64_t bad = 0;
    double worst = 0.0;
    for (double eps : {0.3, 0.1, 0.02}) {
      for (int j = 0; j < 200; ++j) {
        const double s1 = j / 199.0;
        const double s2 = 1.0 + 2.0 * eps + (10.0 - 1.0 - 2.0 * eps) * j / 199.0;
        const double e1 = std::abs(v_eps(m, eps, s1) - eps), e2 = std::abs(v_eps(m, eps, s2) - (s2 - 1.0));
        worst = std::max({worst, e1, e2});
        bad += (e1 > 1e-10) + (e2 > 1e-10);
      }
    }
    out.push_back({"regularization", "v_eps closed-form regions", bad == 0, "max error " + fmt("%.2e", worst)});
  }
  {
    std::uint64_t bad = 0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
      auto g = sample_stream(o.seed + 2, k);
      const double eps = uniform(g, 0.01, 0.45), s = uniform(g, 0.0, 3.0);
      const double v = v_eps(m, eps, s);
      if (v < eps - 1e-12 || v > std::max(2.0 * eps, s - 1.0) + 1e-12) ++bad;
    }
    out.push_back({"regularization", "eps <= v_eps <= max{2eps, s-1}", bad == 0, std::to_string(bad) + " violations"});
  }
  CertifyConfig cc;
  cc.samples = o.samples;
  cc.seed = o.seed;
  cc.shards = o.shards;
  for (double p : {1.2, 1.5, 1.9}) {
    const auto prm = params_for(p, 0.1);
    const double eps_max = std::min(0.5, std::pow(2.0, 1.0 - p));
    out.push_back(from_report("regularization", "growth bounds p=" + fmt("%g", p),
                              certify_growth(prm, prototype(p), eps_max, cc)));
  }
  for (double p : {1.5, 2.0, 3.0}) {
    const RegularizedField reg(params_for(p, 0.05), prototype(p));
    out.push_back(from_report("regularization", "ellipticity and modulus p=" + fmt("%g", p),
                              certify_ellipticity(reg, cc)));
    out.push_back(from_report("regularization", "monotonicity gap p=" + fmt("%g", p),
                              certify_monotonicity_gap(reg, cc)));
    out.push_back(from_report("regularization", "|A_eps - A| bound p=" + fmt("%g", p),
                              certify_field_convergence(reg, cc)));
    CertifyConfig verify = cc;
    verify.seed = cc.seed + 1000003;
    const ExponentTable tab = exponent_table(2, p, default_beta(p));
    const auto cert = certify_g_delta(reg, tab.nu, cc, verify);
    auto row = from_report("regularization", "G_delta comparison p=" + fmt("%g", p), cert.verify);
    row.detail += ", C = " + fmt("%.4g", cert.used_C);
    out.push_back(row);
  }
}

void aux_suite(const VerifyOptions& o, std::vector<VerifyRow>& out) {
  {
    std::uint64_t bad = 0, checked = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      auto g = sample_stream(o.seed + 3, k);
      const double A = uniform(g, 1.0, 4.0), kap = uniform(g, 1.0, 3.0), al = uniform(g, 0.0, 0.9);
      const double C = uniform(g, 0.5, 4.0), c = uniform(g, 0.1, 2.0);
      if (A <= 1.0 || kap <= 1.0) continue;
      for (int i = 0; i <= 50; ++i) {
        const auto b = product_bounds(A, kap, al, C, c, i);
        ++checked;
        if (b.prod1 > b.bound1 * (1.0 + 1e-12) || b.prod2 > b.bound2 * (1.0 + 1e-12)) ++bad;
      }
    }
    out.push_back({"aux", "iteration products", bad == 0 && checked > 0,
                   std::to_string(checked) + " cases, " + std::to_string(bad) + " violations"});
  }
  {
    double worst = 0.0;
    for (const auto& [n, p] : std::vector<std::pair<int, double>>{{3, 1.2}, {2, 1.5}, {2, 3.0}, {3, 1.6}}) {
      const auto seq = moser_sequence(exponent_table(n, p, default_beta(p)), 60);
      for (int k = 1; k <= 60; ++k)
        worst = std::max(worst, std::abs(seq.gammas[k] - seq.closed[k]) / std::abs(seq.closed[k]));
    }
    out.push_back({"aux", "Moser exponents recursion = closed form", worst <= 1e-12,
                   "max relative gap " + fmt("%.2e", worst)});
  }
  {
    double worst = 0.0;
    for (int j = 0; j < 20; ++j) {
      const double q = 1.0 + 0.25 * (j % 5), c = 0.5 + j;
      const std::vector<double> vals{c, c, c, c};
      const std::vector<double> w{0.25, 0.25, 0.25, 0.25};
      const double got = luxemburg_norm(vals, w, q, 0.0);
      worst = std::max(worst, std::abs(got - c) / c);
    }
    out.push_back({"aux", "Luxemburg norm of constants (pure power)", worst <= 1e-6,
                   "max relative error " + fmt("%.2e", worst)});
  }
  {
    std::uint64_t bad = 0;
    for (int k = 0; k <= 6; ++k) {
      const auto cp = cutoff_pair(1.0, 0.5, k);
      for (int j = 0; j <= 1000; ++j) {
        const double rho = cp.r_k * j / 1000.0;
        if (std::abs(cp.eta_slope(rho)) > cp.eta_slope_bound()) ++bad;
        const double tau = cp.r_k * cp.r_k * j / 1000.0;
        if (cp.omega_slope(tau) > cp.omega_slope_bound()) ++bad;
      }
    }
    out.push_back({"aux", "cutoff slope bounds", bad == 0, std::to_string(bad) + " violations"});
  }
  {
    std::uint64_t bad = 0;
    for (std::uint64_t k = 0; k < o.samples; ++k) {
      auto g = sample_stream(o.seed + 4, k);
      const GradientMatrix a = random_matrix(g, 2, 2, 2.0), b = random_matrix(g, 2, 2, 2.0);
      const double d = (G_delta(1.0, a) - G_delta(1.0, b)).norm();
      if (d > 3.0 * (a - b).norm() * (1.0 + 1e-12)) ++bad;
    }
    out.push_back({"aux", "G_delta Lipschitz constant 3", bad == 0, std::to_string(bad) + " violations"});
  }
}

}  // namespace

std::vector<VerifyRow> run_verify(const VerifyOptions& opt) {
  std::vector<VerifyRow> rows;
  structure_suite(opt, rows);
  regularization_suite(opt, rows);
  aux_suite(opt, rows);
  return rows;
}

std::string verify_table(const std::vector<VerifyRow>& rows) {
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.suite.size() + r.name.size() + 3);
  std::ostringstream os;
  for (const auto& r : rows) {
    std::string label = r.suite + " : " + r.name;
    label.resize(w, ' ');
    os << (r.ok ? "PASS  " : "FAIL  ") << label << "  " << r.detail << '\n';
  }
  return os.str();
}

}  // namespace dgl
