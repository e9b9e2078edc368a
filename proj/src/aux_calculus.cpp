#include "degenlab/aux_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dgl {

double H_lambda(double lambda, double norm) {
  if (!(lambda > 0.0)) throw std::invalid_argument("H_lambda: lambda must be positive");
  return std::max(1.0 + lambda, norm);
}

double H_lambda(double lambda, const GradientMatrix& xi) { return H_lambda(lambda, xi.norm()); }

PhiValue Phi(double gamma, double a, double w) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("Phi: gamma must be nonnegative");
  if (!(a > 0.0)) throw std::invalid_argument("Phi: a must be positive");
  if (!(w >= 0.0)) throw std::domain_error("Phi: w must be nonnegative");
  const double b = a + w;
  const double value = w * w * std::pow(b, gamma - 2.0);
  const double derivative =
      2.0 * w * std::pow(b, gamma - 2.0) + (gamma - 2.0) * w * w * std::pow(b, gamma - 3.0);
  return {value, derivative};
}

std::string to_string(ExponentRegime r) {
  switch (r) {
    case ExponentRegime::subcritical: return "subcritical";
    case ExponentRegime::subquadratic_supercritical: return "subquadratic-supercritical";
    case ExponentRegime::superquadratic: return "superquadratic";
  }
  return "unknown";
}

double default_beta(double p) {
  if (p > 1.0 && p < 2.0) return std::min(1.0, 2.0 * (p - 1.0) / (2.0 - p));
  return 1.0;
}

ExponentTable exponent_table(int n, double p, double beta) {
  if (n < 2) throw std::invalid_argument("exponent table: n must be at least 2");
  if (!(p > 1.0)) throw std::invalid_argument("exponent table: p must exceed 1");
  if (n == 2 && p < 2.0) {
    if (!(beta > 0.0 && beta < 4.0 * (p - 1.0) / (2.0 - p)))
      throw std::invalid_argument("exponent table: beta must lie in (0, 4(p-1)/(2-p))");
  }
  ExponentTable t;
  t.n = n;
  t.p = p;
  t.beta = beta;
  t.n_hat = n > 2 ? n : 2.0 + beta;
  const double nh = t.n_hat;
  const double critical = 2.0 * n / (n + 2.0);
  if (p <= critical) {
    t.regime = ExponentRegime::subcritical;
    t.frak_p = p;
  } else if (p < 2.0) {
    t.regime = ExponentRegime::subquadratic_supercritical;
    t.frak_p = 2.0;
  } else {
    t.regime = ExponentRegime::superquadratic;
    t.frak_p = p;
  }
  t.kappa = p < 2.0 ? 0.5 * (p * (nh + 2.0) - 2.0 * nh) : 2.0;
  t.phi = p < 2.0 ? 2.0 - 0.5 * nh * (2.0 - p) : 2.0;
  t.nu = nh / (2.0 * (nh + 2.0));
  return t;
}

MoserSequence moser_sequence(const ExponentTable& tab, int k_max) {
  if (k_max < 1) throw std::invalid_argument("moser sequence: k_max must be at least 1");
  MoserSequence m;
  m.supercritical = tab.regime != ExponentRegime::subcritical;
  const double p = tab.p;
  double add, scale, shift;
  if (m.supercritical) {
    m.growth = 1.0 + 2.0 / tab.n_hat;
    add = p < 2.0 ? 4.0 / tab.n_hat - 2.0 + p : 4.0 / tab.n_hat;
    scale = p < 2.0 ? tab.phi : 2.0;
    shift = tab.frak_p;
    m.limit = 1.0 / scale;
  } else {
    m.growth = 1.0 + 2.0 / tab.n;
    add = 2.0 * p / tab.n;
    scale = p;
    shift = p;
    m.limit = 1.0 / p;
  }
  double g = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) g = m.growth * g + add;
    m.gammas.push_back(g);
    m.closed.push_back(scale * (std::pow(m.growth, k) - 1.0));
    m.targets.push_back(g + shift);
  }
  return m;
}

ProductBounds product_bounds(double A, double kappa, double alpha, double C, double c, int i) {
  if (!(A > 1.0)) throw std::domain_error("product bounds: A must exceed 1");
  if (!(kappa > 1.0)) throw std::domain_error("product bounds: kappa must exceed 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("product bounds: alpha must lie in [0,1)");
  if (!(C > 0.0 && c > 0.0)) throw std::domain_error("product bounds: C and c must be positive");
  if (i < 0) throw std::domain_error("product bounds: i must be nonnegative");
  const double beta_next = C * std::pow(kappa, i + 1);
  ProductBounds r{1.0, 0.0, 1.0, 0.0};
  for (int j = 0; j <= i; ++j) {
    r.prod1 *= std::pow(A, std::pow(kappa, i - (1.0 - alpha) * j) / beta_next);
    r.prod2 *= std::pow(A, j * c * std::pow(kappa, i + 1 - j) / beta_next);
  }
  r.bound1 = std::pow(A, 1.0 / (C * kappa * (1.0 - std::pow(kappa, alpha - 1.0))));
  r.bound2 = std::pow(A, c * kappa / (C * (1.0 - kappa) * (1.0 - kappa)));
  return r;
}

double young_psi(double s, double q, double alpha) {
  return std::pow(s, q) * std::pow(std::log(M_E + s), alpha);
}

namespace {

double psi_inverse(double y, double q, double alpha) {
  double lo = 0.0, hi = 1.0;
  while (young_psi(hi, q, alpha) < y) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (young_psi(mid, q, alpha) < y ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

double luxemburg_norm(std::span<const double> values, std::span<const double> weights, double q,
                      double alpha, double rel_tol) {
  if (values.size() != weights.size()) throw std::invalid_argument("luxemburg: size mismatch");
  if (!(q > 1.0 || (q == 1.0 && alpha >= 0.0)))
    throw std::invalid_argument("luxemburg: need q > 1, or q = 1 with alpha >= 0");
  double fmax = 0.0, measure = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("luxemburg: values must be finite");
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("luxemburg: weights must be nonnegative");
    measure += weights[i];
    if (weights[i] > 0.0) fmax = std::max(fmax, std::abs(values[i]));
  }
  if (fmax == 0.0) return 0.0;
  auto modular = [&](double lambda) {
    double acc = 0.0;
    for (size_t i = 0; i < values.size(); ++i)
      if (weights[i] > 0.0) acc += weights[i] * young_psi(std::abs(values[i]) / lambda, q, alpha);
    return acc;
  };
  double lo = fmax / psi_inverse(measure, q, alpha) * 1e-3;
  double hi = fmax * 1e3;
  while (modular(lo) <= 1.0) lo *= 1e-3;
  while (modular(hi) > 1.0) hi *= 1e3;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (modular(mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

namespace {

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

}  // namespace

double cylinder_radius(double r, double s, int k) {
  return s * r + (1.0 - s) * r / std::ldexp(1.0, k);
}

CutoffPair cutoff_pair(double r, double s, int k) {
  if (!(r > 0.0)) throw std::invalid_argument("cutoff: r must be positive");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("cutoff: s must lie in (0,1)");
  if (k < 0) throw std::invalid_argument("cutoff: k must be nonnegative");
  CutoffPair c;
  c.r = r;
  c.s = s;
  c.k = k;
  c.r_k = cylinder_radius(r, s, k);
  c.r_next = cylinder_radius(r, s, k + 1);
  return c;
}

double CutoffPair::eta(double rho) const {
  if (rho <= r_next) return 1.0;
  if (rho >= r_k) return 0.0;
  return 1.0 - smoothstep((rho - r_next) / (r_k - r_next));
}

double CutoffPair::eta_slope(double rho) const {
  if (rho <= r_next || rho >= r_k) return 0.0;
  const double w = r_k - r_next, u = (rho - r_next) / w;
  return -6.0 * u * (1.0 - u) / w;
}

double CutoffPair::omega(double tau) const {
  const double a = r_next * r_next, b = r_k * r_k;
  if (tau <= a) return 1.0;
  if (tau >= b) return 0.0;
  return 1.0 - smoothstep((tau - a) / (b - a));
}

double CutoffPair::omega_slope(double tau) const {
  const double a = r_next * r_next, b = r_k * r_k;
  if (tau <= a || tau >= b) return 0.0;
  const double u = (tau - a) / (b - a);
  return 6.0 * u * (1.0 - u) / (b - a);
}

double CutoffPair::eta_slope_bound() const { return std::ldexp(1.0, k + 2) / ((1.0 - s) * r); }

double CutoffPair::omega_slope_bound() const {
  return std::ldexp(1.0, 2 * k + 2) / ((1.0 - s) * (1.0 - s) * r * r);
}

}  // namespace dgl
