#include "degenlab/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "degenlab/quadrature.hpp"
#include "degenlab/sampling.hpp"

namespace dgl {

const GaussLegendre10& GaussLegendre10::get() {
  static const GaussLegendre10 rule = [] {
    GaussLegendre10 r;
    constexpr int n = 10;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x[i] = x;
      r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

namespace {

double bump(double x) {
  const double q = 1.0 - x * x;
  return q <= 0.0 ? 0.0 : std::exp(-1.0 / q);
}

}  // namespace

Mollifier1D::Mollifier1D(double tol) : tol_(tol) {
  Z_ = 2.0 * integrate_adaptive(bump, 0.0, 1.0, 1e-16);
  // -|eta'| on (0,1); the maximum of |eta'| sits well inside the interval.
  auto neg_slope = [this](double x) { return -std::abs(slope(x)); };
  const auto best = boost::math::tools::brent_find_minima(neg_slope, 1e-6, 1.0 - 1e-6, 52);
  sup_slope_ = -best.second;
}

double Mollifier1D::operator()(double x) const { return bump(x) / Z_; }

double Mollifier1D::slope(double x) const {
  const double q = 1.0 - x * x;
  if (q <= 0.0) return 0.0;
  return -2.0 * x / (q * q) * bump(x) / Z_;
}

std::pair<double, double> Mollifier1D::tail(double y) const {
  if (y >= 1.0) return {0.0, 0.0};
  if (y <= -1.0) return {1.0, 0.0};
  const double a = std::abs(y);
  const auto r = integrate_adaptive<2>(
      [this](double x) {
        const double e = (*this)(x);
        return std::array<double, 2>{e, x * e};
      },
      a, 1.0, tol_);
  // Symmetry: the first moment over [y,1] is the same for y and -y.
  if (y >= 0.0) return {r[0], r[1]};
  return {1.0 - r[0], r[1]};
}

std::shared_ptr<const Mollifier1D> Mollifier1D::standard() {
  static const auto m = std::make_shared<const Mollifier1D>();
  return m;
}

VEps v_eps_all(const Mollifier1D& m, double eps, double s) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("v_eps: eps must lie in (0, 1/2)");
  if (!(s >= 0.0)) throw std::domain_error("v_eps: s must be nonnegative");
  if (s <= 1.0) return {eps, 0.0, 0.0};
  if (s >= 1.0 + 2.0 * eps) return {s - 1.0, 1.0, 0.0};
  // Substituting w = s + eps*y, the kink of max{eps, w-1} sits at y0.
  const double y0 = (1.0 + eps - s) / eps;
  const auto [T0, T1] = m.tail(y0);
  const double v = eps * (1.0 - T0) + (s - 1.0) * T0 + eps * T1;
  return {v, T0, m(y0) / eps};
}

double v_eps(const Mollifier1D& m, double eps, double s) { return v_eps_all(m, eps, s).v; }

std::pair<double, double> v_eps_derivatives(const Mollifier1D& m, double eps, double s) {
  const auto r = v_eps_all(m, eps, s);
  return {r.first, r.second};
}

double Tensor3::norm() const { return std::sqrt(dot(*this)); }

double Tensor3::dot(const Tensor3& o) const {
  double acc = 0.0;
  for (size_t i = 0; i < a_.size(); ++i) acc += a_[i] * o.a_[i];
  return acc;
}

RegularizedField::RegularizedField(StructureParams prm, StructureFunction base,
                                   std::shared_ptr<const Mollifier1D> moll)
    : prm_(prm), F_(std::move(base)), moll_(std::move(moll)) {
  validate(prm_);
  regime_ = prm_.p <= 2.0 ? Regime::subquadratic : Regime::superquadratic;
  if (regime_ == Regime::subquadratic && prm_.epsilon > 0.0)
    eps_inner_ = std::pow(prm_.epsilon, 1.0 / (prm_.p - 1.0));
}

FEps RegularizedField::F_eps(Point x, double t, double s) const {
  if (regime_ != Regime::subquadratic)
    throw std::logic_error("F_eps is only defined in the subquadratic regime");
  if (s < 0.0) throw std::domain_error("F_eps: s must be nonnegative");
  const double e = eps_inner_;
  if (e == 0.0) return {F_.value(x, t, s), F_.d_s(x, t, s), F_.d_ss(x, t, s)};
  if (s <= 1.0) return {F_.value(x, t, 1.0 + e), 0.0, 0.0};
  if (s >= 1.0 + 2.0 * e) return {F_.value(x, t, s), F_.d_s(x, t, s), F_.d_ss(x, t, s)};
  const VEps v = v_eps_all(*moll_, e, s);
  const double w = v.v + 1.0;
  const double fs = F_.d_s(x, t, w);
  return {F_.value(x, t, w), fs * v.first, F_.d_ss(x, t, w) * v.first * v.first + fs * v.second};
}

double RegularizedField::d_s_reg(Point x, double t, double s) const {
  if (regime_ == Regime::superquadratic || eps_inner_ == 0.0) return F_.d_s(x, t, s);
  const double e = eps_inner_;
  if (s <= 1.0) return 0.0;
  if (s >= 1.0 + 2.0 * e) return F_.d_s(x, t, s);
  const VEps v = v_eps_all(*moll_, e, s);
  return F_.d_s(x, t, v.v + 1.0) * v.first;
}

double RegularizedField::h(Point x, double t, double s) const {
  if (!(s > 0.0)) throw std::domain_error("h_eps: s must be positive");
  const double p = prm_.p;
  double out = d_s_reg(x, t, s) / s;
  if (prm_.epsilon > 0.0) out += prm_.epsilon * std::pow(1.0 + s * s, 0.5 * (p - 2.0));
  return out;
}

std::pair<double, double> RegularizedField::h_and_dh(Point x, double t, double s) const {
  if (!(s > 0.0)) throw std::domain_error("h_eps: s must be positive");
  const double p = prm_.p, eps = prm_.epsilon;
  double fs, fss;
  if (regime_ == Regime::subquadratic) {
    const FEps f = F_eps(x, t, s);
    fs = f.d_s;
    fss = f.d_ss;
  } else {
    fs = F_.d_s(x, t, s);
    fss = F_.d_ss(x, t, s);
  }
  const double q = 1.0 + s * s;
  const double hv = fs / s + eps * std::pow(q, 0.5 * (p - 2.0));
  const double dh = fss / s - fs / (s * s) + (p - 2.0) * eps * s * std::pow(q, 0.5 * (p - 4.0));
  return {hv, dh};
}

GradientMatrix RegularizedField::A(Point x, double t, const GradientMatrix& xi) const {
  const double s = xi.norm();
  if (s == 0.0) return GradientMatrix(xi.rows(), xi.cols());
  GradientMatrix out = xi;
  out *= h(x, t, s);
  return out;
}

double RegularizedField::bilinear(Point x, double t, const GradientMatrix& xi, const Tensor3& lam,
                                  const Tensor3& zeta) const {
  const double s = xi.norm();
  if (s == 0.0) throw std::domain_error("bilinear form: xi must be nonzero");
  const auto [hv, dh] = h_and_dh(x, t, s);
  const int N = xi.rows(), n = xi.cols();
  double cross = 0.0;
  for (int m = 0; m < n; ++m) {
    double a = 0.0, b = 0.0;
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < n; ++k) {
        a += xi(i, k) * lam(i, k, m);
        b += xi(i, k) * zeta(i, k, m);
      }
    cross += a * b;
  }
  return hv * lam.dot(zeta) + dh * cross / s;
}

double RegularizedField::second_derivative_constant() const {
  const double p = prm_.p, C1 = prm_.C1;
  if (regime_ == Regime::superquadratic) return C1;
  return C1 * std::pow(5.0, 0.5 * (2.0 - p)) * (1.0 + moll_->sup_slope() * std::pow(2.0, p - 1.0));
}

namespace {

double eps_power(const StructureParams& prm) {
  if (prm.epsilon == 0.0) return 0.0;
  return std::pow(prm.epsilon, (prm.p - 2.0) / (prm.p - 1.0));
}

double window_ratio(const StructureParams& prm) { return prm.delta / (2.0 + prm.delta); }

}  // namespace

double RegularizedField::ellipticity_upper() const {
  const double p = prm_.p, C1 = prm_.C1, eps = prm_.epsilon;
  if (regime_ == Regime::superquadratic) return C1 + std::max(1.0, p - 1.0);
  const double decreasing = std::pow(2.0, 0.5 * (2.0 - p)) * C1 + 1.0;
  const double increasing = second_derivative_constant() * eps_power(prm_) + eps;
  return std::max(decreasing, increasing);
}

double RegularizedField::ellipticity_lower_factor() const {
  return prm_.epsilon * std::min(1.0, prm_.p - 1.0);
}

double RegularizedField::window_lower() const {
  const double p = prm_.p, r = window_ratio(prm_);
  return std::min(std::pow(r, p - 1.0), std::min(1.0, std::pow(r, p - 2.0))) / prm_.C1;
}

double RegularizedField::window_upper() const {
  const double p = prm_.p, C1 = prm_.C1, eps = prm_.epsilon, r = window_ratio(prm_);
  const double q = std::pow(2.0, 0.5 * std::max(p - 2.0, 0.0));
  return std::max(C1 + eps * q, C1 * std::max(1.0, std::pow(r, p - 2.0)) +
                                    eps * std::max(1.0, p - 1.0) * q);
}

double RegularizedField::modulus_global() const {
  const double p = prm_.p, C1 = prm_.C1, eps = prm_.epsilon;
  if (regime_ == Regime::superquadratic) return 3.0 * C1 + p - 1.0;
  return std::pow(2.0, 0.5 * (4.0 - p)) * C1 + second_derivative_constant() * eps_power(prm_) +
         (3.0 - p) * eps;
}

double RegularizedField::modulus_window() const {
  const double p = prm_.p, C1 = prm_.C1, eps = prm_.epsilon, r = window_ratio(prm_);
  if (regime_ == Regime::superquadratic) return 3.0 * C1 + (p - 1.0) * std::pow(2.0, 0.5 * (p - 2.0));
  return 2.0 * C1 + C1 * std::pow(r, p - 2.0) + (3.0 - p) * eps;
}

double RegularizedField::gap_constant() const {
  return 1.0 / (prm_.C1 * std::pow(2.0, prm_.p + 1.0));
}

GradientMatrix G_delta(double delta, const GradientMatrix& xi) {
  if (!(delta > 0.0)) throw std::invalid_argument("G_delta: delta must be positive");
  const double s = xi.norm();
  GradientMatrix out(xi.rows(), xi.cols());
  if (s == 0.0 || s <= 1.0 + delta) return out;
  out = xi;
  out *= (s - 1.0 - delta) / s;
  return out;
}

namespace {

// Runs body(report, index) over all sample indices, split into shards that each
// fill their own copy of the template report; shards are merged in order.
BoundReport run_sharded(const BoundReport& tmpl, const CertifyConfig& cfg,
                        const std::function<void(BoundReport&, std::uint64_t)>& body) {
  const int shards = std::max(1, cfg.shards);
  auto work = [&](int shard) {
    BoundReport r = tmpl;
    for (std::uint64_t k = shard; k < cfg.samples; k += shards) body(r, k);
    return r;
  };
  BoundReport out = tmpl;
  if (shards == 1) return work(0);
  std::vector<std::future<BoundReport>> parts;
  for (int s = 0; s < shards; ++s) parts.push_back(std::async(std::launch::async, work, s));
  for (auto& f : parts) out.merge(f.get());
  return out;
}

GradientMatrix random_direction(std::mt19937_64& g, int N, int n) {
  GradientMatrix xi(N, n);
  double nrm = 0.0;
  while (nrm < 1e-8) {
    for (double& v : xi.data()) v = normal(g);
    nrm = xi.norm();
  }
  xi *= 1.0 / nrm;
  return xi;
}

Tensor3 random_tensor(std::mt19937_64& g, int N, int n) {
  Tensor3 t(N, n);
  const double scale = std::pow(10.0, uniform(g, -2.0, 2.0));
  for (double& v : t.data()) v = scale * normal(g);
  return t;
}

double log_uniform(std::mt19937_64& g, double lo, double hi) {
  return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

const double kOrigin[3] = {0.5, 0.5, 0.5};

}  // namespace

BoundReport certify_growth(const StructureParams& prm, const StructureFunction& F, double eps_max,
                           const CertifyConfig& cfg) {
  const double p = prm.p, C1 = prm.C1, L = prm.L;
  if (p > 2.0) throw std::logic_error("growth bounds applies to 1 < p <= 2");
  BoundReport tmpl;
  tmpl.name = "growth_bounds";
  // Reference field only to read the constant c; it is independent of epsilon up to the
  // eps-power factor applied per sample.
  StructureParams ref = prm;
  ref.epsilon = 0.25;
  const double c_dd = RegularizedField(ref, F).second_derivative_constant();
  const double tol = cfg.rel_tol;
  tmpl.add("ds_nonneg", Side::lower, 0.0, tol);
  tmpl.add("ds_upper", Side::upper, C1, tol);
  tmpl.add("dss_nonneg", Side::lower, 0.0, tol);
  tmpl.add("dss_upper", Side::upper, c_dd, tol);
  tmpl.add("ds_deviation", Side::upper, std::pow(2.0, p) * C1, tol);
  tmpl.add("ds_identity_outside_band", Side::upper, 0.0, 0.0);
  tmpl.add("value_upper", Side::upper, std::pow(2.0, p) * L, tol);
  tmpl.add("value_lower", Side::lower, 1.0 / (std::pow(2.0, p) * L), tol);
  const double x0[3] = {0.5, 0.5, 0.5};
  const Point x(x0, std::max(prm.n, 1));

  return run_sharded(tmpl, cfg, [&](BoundReport& r, std::uint64_t k) {
    auto g = sample_stream(cfg.seed, k);
    StructureParams sp = prm;
    sp.epsilon = log_uniform(g, 1e-3, eps_max);
    const RegularizedField reg(sp, F);
    const double e = reg.eps_inner();
    double s;
    switch (k % 3) {
      case 0: s = uniform(g, 0.0, cfg.s_max); break;
      case 1: s = 1.0 + 2.0 * e * uniform(g, 0.0, 1.0); break;
      default: s = 1.0 + 2.0 * e + uniform(g, 0.0, 1.0); break;
    }
    const double t = 0.5;
    const FEps f = reg.F_eps(x, t, s);
    const double base_ds = F.d_s(x, t, s);
    r.at("ds_nonneg").record(f.d_s);
    r.at("ds_upper").record(s > 1.0 ? f.d_s / std::pow(s, p - 1.0) : (f.d_s == 0.0 ? 0.0 : INFINITY));
    r.at("dss_nonneg").record(f.d_ss);
    r.at("dss_upper").record(
        f.d_ss / (std::pow(sp.epsilon, (p - 2.0) / (p - 1.0)) * std::pow(1.0 + s * s, 0.5 * (p - 2.0))));
    const double dev = std::abs(f.d_s - base_ds);
    r.at("ds_deviation").record(dev == 0.0 ? 0.0 : dev / (sp.epsilon * std::pow(s, p - 1.0)));
    if (s <= 1.0 || s >= 1.0 + 2.0 * e) r.at("ds_identity_outside_band").record(dev);
    r.at("value_upper").record(f.value / (std::pow(s, p) + 1.0));
    if (s >= 2.0) r.at("value_lower").record(f.value / (std::pow(s, p) - 1.0));
  });
}

BoundReport certify_ellipticity(const RegularizedField& reg, const CertifyConfig& cfg) {
  const auto& prm = reg.params();
  const double p = prm.p, eps = prm.epsilon, delta = prm.delta;
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("ellipticity: eps must lie in (0, 1/2)");
  if (!(delta > 4.0 * std::pow(eps, 1.0 / (p - 1.0))))
    throw std::invalid_argument("ellipticity: delta must exceed 4 eps^(1/(p-1))");
  BoundReport tmpl;
  tmpl.name = "ellipticity";
  const double tol = cfg.rel_tol;
  tmpl.add("lower_global", Side::lower, reg.ellipticity_lower_factor(), tol);
  tmpl.add("upper_global", Side::upper, reg.ellipticity_upper(), tol);
  tmpl.add("modulus_global", Side::upper, reg.modulus_global(), tol);
  tmpl.add("lower_window", Side::lower, reg.window_lower(), tol);
  tmpl.add("upper_window", Side::upper, reg.window_upper(), tol);
  tmpl.add("modulus_window", Side::upper, reg.modulus_window(), tol);
  const Point x(kOrigin, prm.n);
  const double window = 1.0 + 0.5 * delta;

  return run_sharded(tmpl, cfg, [&](BoundReport& r, std::uint64_t k) {
    auto g = sample_stream(cfg.seed, k);
    const double s = (k % 2 == 0) ? log_uniform(g, 1e-3, cfg.s_max) : uniform(g, window, cfg.s_max);
    GradientMatrix xi = random_direction(g, prm.N, prm.n);
    xi *= s;
    const double sn = xi.norm();
    const Tensor3 lam = random_tensor(g, prm.N, prm.n);
    const Tensor3 zeta = random_tensor(g, prm.N, prm.n);
    const double a = reg.bilinear(x, 0.5, xi, lam, lam);
    const double b = reg.bilinear(x, 0.5, xi, lam, zeta);
    const double l2 = lam.dot(lam), ln = lam.norm(), zn = zeta.norm();
    const double q = 1.0 + sn * sn;
    r.at("lower_global").record(a / (std::pow(q, 0.5 * (p - 4.0)) * sn * sn * l2));
    r.at("upper_global").record(a / (std::pow(q, 0.5 * (p - 2.0)) * l2));
    r.at("modulus_global").record(std::abs(b) / (std::pow(q, 0.5 * (p - 2.0)) * ln * zn));
    if (sn >= window) {
      const double w = std::pow(sn, p - 2.0);
      r.at("lower_window").record(a / (w * l2));
      r.at("upper_window").record(a / (w * l2));
      r.at("modulus_window").record(std::abs(b) / (w * ln * zn));
    }
  });
}

namespace {

double inner_gap(const RegularizedField& reg, Point x, double t, const GradientMatrix& xi,
                 const GradientMatrix& xt) {
  const GradientMatrix dA = reg.A(x, t, xi) - reg.A(x, t, xt);
  return dA.dot(xi - xt);
}

void require_eps_window(const StructureParams& prm) {
  if (!(prm.epsilon > 0.0 && prm.epsilon < epsilon_ceiling(prm.p, prm.delta)))
    throw std::invalid_argument("eps must lie in (0, min{1/2, (delta/4)^(p-1)})");
}

// A second gradient: either an independent draw or a perturbation of xi at a random scale.
GradientMatrix partner(std::mt19937_64& g, const GradientMatrix& xi, double s_max) {
  GradientMatrix d = random_direction(g, xi.rows(), xi.cols());
  if (uniform(g, 0.0, 1.0) < 0.5) {
    d *= uniform(g, 0.0, s_max);
    return d;
  }
  d *= log_uniform(g, 1e-4, s_max);
  return xi + d;
}

}  // namespace

GapResult monotonicity_gap(const RegularizedField& reg, Point x, double t,
                           const GradientMatrix& xi, const GradientMatrix& xi_tilde) {
  const auto& prm = reg.params();
  const double s = xi.norm(), st = xi_tilde.norm();
  if (!(s > 1.0 + 0.5 * prm.delta)) throw std::invalid_argument("monotonicity gap: |xi| must exceed 1+delta/2");
  if (!(prm.epsilon < 0.5)) throw std::invalid_argument("monotonicity gap: eps must lie in (0, 1/2)");
  const GradientMatrix diff = xi - xi_tilde;
  const double lhs = inner_gap(reg, x, t, xi, xi_tilde);
  const double rhs = reg.gap_constant() * std::pow(s - 1.0 - 0.5 * prm.delta, prm.p) /
                     (s * (s + st)) * diff.dot(diff);
  return {lhs, rhs};
}

BoundReport certify_monotonicity_gap(const RegularizedField& reg, const CertifyConfig& cfg) {
  const auto& prm = reg.params();
  require_eps_window(prm);
  BoundReport tmpl;
  tmpl.name = "monotonicity_gap";
  tmpl.add("lhs_over_rhs", Side::lower, 1.0, cfg.rel_tol);
  const Point x(kOrigin, prm.n);
  const double window = 1.0 + 0.5 * prm.delta;
  return run_sharded(tmpl, cfg, [&](BoundReport& r, std::uint64_t k) {
    auto g = sample_stream(cfg.seed, k);
    GradientMatrix xi = random_direction(g, prm.N, prm.n);
    xi *= uniform(g, window, cfg.s_max);
    if (!(xi.norm() > window)) return;
    const GradientMatrix xt = partner(g, xi, cfg.s_max);
    const GapResult res = monotonicity_gap(reg, x, 0.5, xi, xt);
    if (res.rhs > 0.0) r.at("lhs_over_rhs").record(res.lhs / res.rhs);
  });
}

GapResult g_delta_comparison(const RegularizedField& reg, Point x, double t,
                             const GradientMatrix& xi, const GradientMatrix& xi_tilde, double nu,
                             double C) {
  const auto& prm = reg.params();
  require_eps_window(prm);
  if (!(nu > 0.0)) throw std::invalid_argument("g_delta_comparison: nu must be positive");
  const GradientMatrix dG = G_delta(prm.delta, xi) - G_delta(prm.delta, xi_tilde);
  const double lhs = std::pow(dG.norm(), prm.p);
  const double m = std::max(xi.norm(), 1.0 + prm.delta);
  const double eps = prm.epsilon;
  const double rhs = std::pow(eps, nu) * std::pow(m, prm.p) +
                     C * std::pow(eps, -nu) * inner_gap(reg, x, t, xi, xi_tilde);
  return {lhs, rhs};
}

namespace {

std::pair<GradientMatrix, GradientMatrix> comparison_pair(std::mt19937_64& g,
                                                          const StructureParams& prm,
                                                          double s_max) {
  GradientMatrix xi = random_direction(g, prm.N, prm.n);
  // Concentrate around the threshold 1+delta where G_delta switches on.
  const double s = uniform(g, 0.0, 1.0) < 0.5 ? uniform(g, 0.0, s_max)
                                              : 1.0 + prm.delta + uniform(g, -0.5, 0.5);
  xi *= std::max(s, 0.0);
  return {xi, partner(g, xi, s_max)};
}

}  // namespace

ComparisonCertificate certify_g_delta(const RegularizedField& reg, double nu,
                                      const CertifyConfig& calibrate, const CertifyConfig& verify,
                                      double margin) {
  const auto& prm = reg.params();
  require_eps_window(prm);
  const Point x(kOrigin, prm.n);
  const double eps = prm.epsilon;
  ComparisonCertificate cert;
  for (std::uint64_t k = 0; k < calibrate.samples; ++k) {
    auto g = sample_stream(calibrate.seed, k);
    const auto [xi, xt] = comparison_pair(g, prm, calibrate.s_max);
    const GapResult base = g_delta_comparison(reg, x, 0.5, xi, xt, nu, 0.0);
    const double excess = base.lhs - base.rhs;
    if (excess <= 0.0) continue;
    const double gap = inner_gap(reg, x, 0.5, xi, xt);
    const double need = gap > 0.0 ? excess / (std::pow(eps, -nu) * gap) : INFINITY;
    cert.fitted_C = std::max(cert.fitted_C, need);
  }
  cert.used_C = cert.fitted_C * margin;
  BoundReport tmpl;
  tmpl.name = "g_delta_comparison";
  tmpl.add("lhs_over_rhs", Side::upper, 1.0, verify.rel_tol);
  const double C = cert.used_C;
  cert.verify = run_sharded(tmpl, verify, [&](BoundReport& r, std::uint64_t k) {
    auto g = sample_stream(verify.seed, k);
    const auto [xi, xt] = comparison_pair(g, prm, verify.s_max);
    const GapResult res = g_delta_comparison(reg, x, 0.5, xi, xt, nu, C);
    r.at("lhs_over_rhs").record(res.lhs / res.rhs);
  });
  return cert;
}

BoundReport certify_field_convergence(const RegularizedField& reg, const CertifyConfig& cfg) {
  const auto& prm = reg.params();
  const double p = prm.p, eps = prm.epsilon;
  if (!(eps > 0.0)) throw std::invalid_argument("field convergence: eps must be positive");
  BoundReport tmpl;
  tmpl.name = "field_convergence";
  const bool sub = reg.regime() == Regime::subquadratic;
  tmpl.add("A_eps_minus_A", Side::upper, sub ? std::pow(2.0, p) * prm.C1 + 1.0 : 1.0, cfg.rel_tol);
  const Point x(kOrigin, prm.n);
  return run_sharded(tmpl, cfg, [&](BoundReport& r, std::uint64_t k) {
    auto g = sample_stream(cfg.seed, k);
    GradientMatrix xi = random_direction(g, prm.N, prm.n);
    const double s = (k % 2 == 0) ? log_uniform(g, 1e-3, cfg.s_max)
                                  : 1.0 + 2.0 * std::max(reg.eps_inner(), 1e-3) * uniform(g, 0.0, 1.5);
    xi *= s;
    const double sn = xi.norm();
    const GradientMatrix d = reg.A(x, 0.5, xi) - vector_field_A(reg.base(), x, 0.5, xi);
    const double scale = sub ? std::pow(sn, p - 1.0) : std::pow(1.0 + sn * sn, 0.5 * (p - 2.0)) * sn;
    r.at("A_eps_minus_A").record(d.norm() / (eps * scale));
  });
}

}  // namespace dgl
