#ifndef DEGENLAB_AUX_CALCULUS_HPP
#define DEGENLAB_AUX_CALCULUS_HPP

#include <span>
#include <string>
#include <vector>

#include "degenlab/structure.hpp"

namespace dgl {

double H_lambda(double lambda, const GradientMatrix& xi);
double H_lambda(double lambda, double norm);

struct PhiValue {
  double value;
  double derivative;
};

/// Phi(w) = w^2 (a+w)^(gamma-2).
PhiValue Phi(double gamma, double a, double w);

enum class ExponentRegime { subcritical, subquadratic_supercritical, superquadratic };
std::string to_string(ExponentRegime r);

struct ExponentTable {
  int n = 2;
  double p = 2.0;
  double beta = 1.0;
  double n_hat = 3.0;
  double frak_p = 2.0;
  double kappa = 2.0;
  double phi = 2.0;
  double nu = 0.3;
  ExponentRegime regime = ExponentRegime::superquadratic;
};

/// beta = min{1, 2(p-1)/(2-p)} for 1 < p < 2 and 1 otherwise.
double default_beta(double p);
ExponentTable exponent_table(int n, double p, double beta);

struct MoserSequence {
  bool supercritical = true;
  std::vector<double> gammas;      // recursion
  std::vector<double> closed;      // closed form
  std::vector<double> targets;     // gamma_k + frak_p (or + p)
  double growth = 1.0;             // 1 + 2/n_hat (or 1 + 2/n)
  double limit = 0.5;              // limit of growth^k / target_k
};

MoserSequence moser_sequence(const ExponentTable& tab, int k_max);

struct ProductBounds {
  double prod1, bound1, prod2, bound2;
};

/// Products over j = 0..i with beta_j = C kappa^j, evaluated factor by factor.
ProductBounds product_bounds(double A, double kappa, double alpha, double C, double c, int i);

/// Psi(s) = s^q log^alpha(e+s).
double young_psi(double s, double q, double alpha);

/// Luxemburg norm of sampled values with per-sample measure weights.
double luxemburg_norm(std::span<const double> values, std::span<const double> weights, double q,
                      double alpha, double rel_tol = 1e-10);

/** C^1 piecewise-cubic cutoffs for the k-th cylinder of the iteration. */
struct CutoffPair {
  double r = 1.0, s = 0.5;
  int k = 0;
  double r_k = 1.0, r_next = 1.0;

  /// Spatial cutoff as a function of the distance to the centre.
  double eta(double rho) const;
  double eta_slope(double rho) const;
  /// Temporal cutoff; tau = t1 - t >= 0 is the distance to the top of the cylinder.
  double omega(double tau) const;
  double omega_slope(double tau) const;  // d/dt, nonnegative

  double eta_slope_bound() const;
  double omega_slope_bound() const;
};

double cylinder_radius(double r, double s, int k);
CutoffPair cutoff_pair(double r, double s, int k);

}  // namespace dgl

#endif
