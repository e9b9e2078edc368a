#ifndef DEGENLAB_REGULARIZATION_HPP
#define DEGENLAB_REGULARIZATION_HPP

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "degenlab/report.hpp"
#include "degenlab/structure.hpp"

namespace dgl {

/** Normalized bump exp(-1/(1-x^2)) on (-1,1). */
class Mollifier1D {
 public:
  explicit Mollifier1D(double tol = 1e-12);

  double operator()(double x) const;
  double slope(double x) const;
  /// {int_y^1 eta, int_y^1 x eta} for y in [-1,1].
  std::pair<double, double> tail(double y) const;

  double normalization() const { return Z_; }
  double tolerance() const { return tol_; }
  double sup_value() const { return (*this)(0.0); }
  /// sup |eta'|, the constant bounding eps * v'' (see v_eps_derivatives).
  double sup_slope() const { return sup_slope_; }

  static std::shared_ptr<const Mollifier1D> standard();

 private:
  double tol_;
  double Z_ = 1.0;
  double sup_slope_ = 0.0;
};

struct VEps {
  double v;
  double first;
  double second;
};

/// v_eps(s) = (1/eps) int eta((w-s)/eps) max{eps, w-1} dw and its two derivatives.
VEps v_eps_all(const Mollifier1D& m, double eps, double s);
double v_eps(const Mollifier1D& m, double eps, double s);
std::pair<double, double> v_eps_derivatives(const Mollifier1D& m, double eps, double s);

enum class Regime { subquadratic, superquadratic };

struct FEps {
  double value;
  double d_s;
  double d_ss;
};

/// N x n x n array lambda^i_{km}.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int N, int n, double fill = 0.0)
      : N_(N), n_(n), a_(static_cast<size_t>(N) * n * n, fill) {}
  int N() const { return N_; }
  int n() const { return n_; }
  double& operator()(int i, int k, int m) { return a_[(static_cast<size_t>(i) * n_ + k) * n_ + m]; }
  double operator()(int i, int k, int m) const {
    return a_[(static_cast<size_t>(i) * n_ + k) * n_ + m];
  }
  std::span<double> data() { return a_; }
  std::span<const double> data() const { return a_; }
  double norm() const;
  double dot(const Tensor3& o) const;

 private:
  int N_ = 0, n_ = 0;
  std::vector<double> a_;
};

/**
 * The regularized structure: F_eps (1 < p <= 2), h_eps, A_eps and the bilinear form.
 * epsilon = 0 is accepted and reproduces the unregularized field exactly.
 */
class RegularizedField {
 public:
  RegularizedField(StructureParams prm, StructureFunction base,
                   std::shared_ptr<const Mollifier1D> moll = Mollifier1D::standard());

  const StructureParams& params() const { return prm_; }
  const StructureFunction& base() const { return F_; }
  const Mollifier1D& mollifier() const { return *moll_; }
  Regime regime() const { return regime_; }
  double eps() const { return prm_.epsilon; }
  /// Width parameter of the smoothed band, eps^(1/(p-1)); only meaningful when subquadratic.
  double eps_inner() const { return eps_inner_; }

  FEps F_eps(Point x, double t, double s) const;
  double h(Point x, double t, double s) const;
  /// h_eps and its s-derivative.
  std::pair<double, double> h_and_dh(Point x, double t, double s) const;
  GradientMatrix A(Point x, double t, const GradientMatrix& xi) const;
  double bilinear(Point x, double t, const GradientMatrix& xi, const Tensor3& lam,
                  const Tensor3& zeta) const;

  // Explicit constants assembled from the proofs; see certify_ellipticity.
  double second_derivative_constant() const;  // c with d_ss F_eps <= c eps^((p-2)/(p-1)) (1+s^2)^((p-2)/2)
  double ellipticity_upper() const;           // global upper constant
  double ellipticity_lower_factor() const;    // eps * min{1, p-1}
  double window_lower() const;
  double window_upper() const;
  double modulus_global() const;
  double modulus_window() const;
  double gap_constant() const;                // monotonicity gap constant

 private:
  double d_s_reg(Point x, double t, double s) const;

  StructureParams prm_;
  StructureFunction F_;
  std::shared_ptr<const Mollifier1D> moll_;
  Regime regime_;
  double eps_inner_ = 0.0;
};

/// G_delta(xi) = (|xi|-1-delta)_+ xi/|xi|.
GradientMatrix G_delta(double delta, const GradientMatrix& xi);

struct CertifyConfig {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 42;
  int shards = 1;
  double s_max = 10.0;
  double rel_tol = 1e-10;
};

/// Growth bounds for F_eps: nonnegativity and bounds of d_s, d_ss, the deviation
/// from d_sF, exact agreement outside the band, and two-sided value growth.
/// Samples (s, eps) for the field's p; eps ranges over (0, eps_max).
BoundReport certify_growth(const StructureParams& prm, const StructureFunction& F, double eps_max,
                           const CertifyConfig& cfg = {});

/// Global sandwich, window sandwich and modulus bounds on random (xi, lambda, zeta).
BoundReport certify_ellipticity(const RegularizedField& reg, const CertifyConfig& cfg = {});

struct GapResult {
  double lhs;
  double rhs;
};

GapResult monotonicity_gap(const RegularizedField& reg, Point x, double t,
                           const GradientMatrix& xi, const GradientMatrix& xi_tilde);
BoundReport certify_monotonicity_gap(const RegularizedField& reg, const CertifyConfig& cfg = {});

/// lhs = |G(xi)-G(xi~)|^p, rhs = eps^nu max{|xi|,1+delta}^p + C eps^-nu <A(xi)-A(xi~), xi-xi~>.
GapResult g_delta_comparison(const RegularizedField& reg, Point x, double t,
                             const GradientMatrix& xi, const GradientMatrix& xi_tilde, double nu,
                             double C);

struct ComparisonCertificate {
  double fitted_C = 0.0;   // max over the calibration set
  double used_C = 0.0;     // fitted_C times the margin
  BoundReport verify;
};

/// Calibrates C on one sample set, then verifies on a disjoint one.
ComparisonCertificate certify_g_delta(const RegularizedField& reg, double nu,
                                      const CertifyConfig& calibrate, const CertifyConfig& verify,
                                      double margin = 2.0);

/// |A_eps - A| against the convergence bound.
BoundReport certify_field_convergence(const RegularizedField& reg, const CertifyConfig& cfg = {});

}  // namespace dgl

#endif
