#ifndef DEGENLAB_QUADRATURE_HPP
#define DEGENLAB_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace dgl {

/// Nodes and weights of the 10-point Gauss-Legendre rule on [-1,1].
struct GaussLegendre10 {
  std::array<double, 10> x{};
  std::array<double, 10> w{};
  static const GaussLegendre10& get();
};

/**
 * Adaptive Gauss-Legendre for integrands returning std::array<double, M>.
 * A panel is accepted when the 10-point value and the sum over its two halves
 * differ by at most the panel's share of the absolute tolerance in every slot.
 */
template <std::size_t M, class Fn>
std::array<double, M> integrate_adaptive(Fn&& f, double a, double b, double tol,
                                         int max_depth = 40) {
  const auto& gl = GaussLegendre10::get();
  auto panel = [&](double lo, double hi) {
    std::array<double, M> acc{};
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    for (int i = 0; i < 10; ++i) {
      const std::array<double, M> v = f(c + r * gl.x[i]);
      for (std::size_t m = 0; m < M; ++m) acc[m] += gl.w[i] * v[m];
    }
    for (auto& v : acc) v *= r;
    return acc;
  };
  auto rec = [&](auto&& self, double lo, double hi, const std::array<double, M>& whole,
                 double eps, int depth) -> std::array<double, M> {
    const double mid = 0.5 * (lo + hi);
    const auto left = panel(lo, mid);
    const auto right = panel(mid, hi);
    std::array<double, M> sum{};
    double err = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      sum[m] = left[m] + right[m];
      err = std::fmax(err, std::abs(sum[m] - whole[m]));
    }
    if (err <= eps || depth <= 0) return sum;
    const auto l = self(self, lo, mid, left, 0.5 * eps, depth - 1);
    const auto r = self(self, mid, hi, right, 0.5 * eps, depth - 1);
    for (std::size_t m = 0; m < M; ++m) sum[m] = l[m] + r[m];
    return sum;
  };
  if (a == b) return {};
  return rec(rec, a, b, panel(a, b), tol, max_depth);
}

template <class Fn>
double integrate_adaptive(Fn&& f, double a, double b, double tol, int max_depth = 40) {
  return integrate_adaptive<1>([&](double x) { return std::array<double, 1>{f(x)}; }, a, b, tol,
                               max_depth)[0];
}

}  // namespace dgl

#endif
