#ifndef DEGENLAB_STRUCTURE_HPP
#define DEGENLAB_STRUCTURE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "degenlab/report.hpp"

namespace dgl {

/** Parameters shared by the structure function, its regularization and the solver. */
struct StructureParams {
  int n = 2;        // spatial dimension
  int N = 1;        // number of components
  double p = 2.0;
  double L = 1.0;
  double C1 = 2.0;
  double K = 1.0;
  double delta = 1.0;
  double epsilon = 0.1;
  double beta = 1.0;
};

/// Throws std::invalid_argument describing the first violated constraint.
/// With check_delta the stricter range eps < min{1/2, (delta/4)^(p-1)} is enforced.
void validate(const StructureParams& prm, bool check_delta = false);

/// Largest admissible epsilon for a given delta (exclusive bound).
double epsilon_ceiling(double p, double delta);

using Point = std::span<const double>;
using ScalarFn = std::function<double(Point x, double t, double s)>;
using CoefficientFn = std::function<double(Point x, double t)>;

/** A structure function F(x,t,s) with its first two s-derivatives. */
struct StructureFunction {
  double p = 2.0;
  ScalarFn value;
  ScalarFn d_s;
  ScalarFn d_ss;
  std::string label;
};

/// F = (a/p)(s-1)_+^p with a = a(x,t).
StructureFunction prototype(double p, CoefficientFn a);
StructureFunction prototype(double p, double a = 1.0);

/** N x n matrix, row i holds the gradient of component i. */
class GradientMatrix {
 public:
  GradientMatrix() = default;
  GradientMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int k) { return a_[static_cast<size_t>(i) * cols_ + k]; }
  double operator()(int i, int k) const { return a_[static_cast<size_t>(i) * cols_ + k]; }
  std::span<double> data() { return a_; }
  std::span<const double> data() const { return a_; }

  double norm() const;
  double dot(const GradientMatrix& o) const;
  GradientMatrix& operator+=(const GradientMatrix& o);
  GradientMatrix& operator-=(const GradientMatrix& o);
  GradientMatrix& operator*=(double c);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

GradientMatrix operator+(GradientMatrix a, const GradientMatrix& b);
GradientMatrix operator-(GradientMatrix a, const GradientMatrix& b);
GradientMatrix operator*(double c, GradientMatrix a);

/// A(x,t,xi) = d_sF(|xi|)/|xi| * xi, zero at xi = 0.
GradientMatrix vector_field_A(const StructureFunction& F, Point x, double t,
                              const GradientMatrix& xi);

using ConditionReport = BoundReport;

struct ConditionSampling {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 42;
  double s_max = 10.0;
  double band = 1e-6;      // s in (1, 1+band) is skipped for the d_ss check
  double T = 1.0;
  double rel_tol = 1e-12;
};

/// Samples (x,t,s) in [0,1]^n x (0,T) x (1,s_max] and checks the four growth/Lipschitz
/// conditions against prm.L, prm.C1, prm.K.
ConditionReport check_structure_conditions(const StructureFunction& F, const StructureParams& prm,
                                           const ConditionSampling& cfg = {});

}  // namespace dgl

#endif
