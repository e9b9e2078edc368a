#include "degenlab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "degenlab/sampling.hpp"

namespace dgl {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

double epsilon_ceiling(double p, double delta) {
  return std::min(0.5, std::pow(delta / 4.0, p - 1.0));
}

void validate(const StructureParams& prm, bool check_delta) {
  require(prm.p > 1.0, "p must exceed 1");
  require(prm.L > 0.0, "L must be positive");
  require(prm.C1 > 1.0, "C1 must exceed 1");
  require(prm.K > 0.0, "K must be positive");
  require(prm.delta > 0.0, "delta must be positive");
  require(prm.epsilon >= 0.0, "epsilon must be nonnegative");
  require(prm.N >= 1, "N must be at least 1");
  require(prm.n >= 1 && prm.n <= 3, "n must be 1, 2 or 3");
  require(prm.epsilon < 0.5, "epsilon must be below 1/2");
  if (prm.n == 2 && prm.p < 2.0) {
    const double cap = 4.0 * (prm.p - 1.0) / (2.0 - prm.p);
    require(prm.beta > 0.0 && prm.beta < cap,
            "beta must lie in (0, 4(p-1)/(2-p)) for n = 2 and p < 2");
  }
  if (check_delta && prm.epsilon > 0.0) {
    require(prm.epsilon < epsilon_ceiling(prm.p, prm.delta),
            "epsilon must be below min{1/2, (delta/4)^(p-1)}");
  }
}

StructureFunction prototype(double p, CoefficientFn a) {
  if (!(p > 1.0)) throw std::invalid_argument("prototype: p must exceed 1");
  StructureFunction F;
  F.p = p;
  F.label = "prototype";
  F.value = [p, a](Point x, double t, double s) {
    if (s < 0.0) throw std::domain_error("F: s must be nonnegative");
    return s <= 1.0 ? 0.0 : a(x, t) / p * std::pow(s - 1.0, p);
  };
  F.d_s = [p, a](Point x, double t, double s) {
    if (s < 0.0) throw std::domain_error("d_sF: s must be nonnegative");
    return s <= 1.0 ? 0.0 : a(x, t) * std::pow(s - 1.0, p - 1.0);
  };
  F.d_ss = [p, a](Point x, double t, double s) {
    if (s < 0.0) throw std::domain_error("d_ssF: s must be nonnegative");
    if (s < 1.0) return 0.0;
    if (s == 1.0) return p > 2.0 ? 0.0 : (p == 2.0 ? a(x, t) : INFINITY);
    return a(x, t) * (p - 1.0) * std::pow(s - 1.0, p - 2.0);
  };
  return F;
}

StructureFunction prototype(double p, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("prototype: coefficient must be positive");
  return prototype(p, [a](Point, double) { return a; });
}

double GradientMatrix::norm() const { return std::sqrt(dot(*this)); }

double GradientMatrix::dot(const GradientMatrix& o) const {
  double acc = 0.0;
  for (size_t i = 0; i < a_.size(); ++i) acc += a_[i] * o.a_[i];
  return acc;
}

GradientMatrix& GradientMatrix::operator+=(const GradientMatrix& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

GradientMatrix& GradientMatrix::operator-=(const GradientMatrix& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

GradientMatrix& GradientMatrix::operator*=(double c) {
  for (double& v : a_) v *= c;
  return *this;
}

GradientMatrix operator+(GradientMatrix a, const GradientMatrix& b) { return a += b; }
GradientMatrix operator-(GradientMatrix a, const GradientMatrix& b) { return a -= b; }
GradientMatrix operator*(double c, GradientMatrix a) { return a *= c; }

GradientMatrix vector_field_A(const StructureFunction& F, Point x, double t,
                              const GradientMatrix& xi) {
  const double s = xi.norm();
  GradientMatrix out(xi.rows(), xi.cols());
  if (s == 0.0) return out;
  const double coef = F.d_s(x, t, s) / s;
  for (int i = 0; i < xi.rows(); ++i)
    for (int k = 0; k < xi.cols(); ++k) out(i, k) = coef * xi(i, k);
  return out;
}

ConditionReport check_structure_conditions(const StructureFunction& F, const StructureParams& prm,
                                           const ConditionSampling& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("sample count must be positive");
  const double p = prm.p;
  ConditionReport rep;
  rep.name = "structure_conditions";
  // Every check is phrased as ratio <= constant; a zero denominator counts as infinite.
  rep.add("H1", Side::upper, prm.L, cfg.rel_tol);
  rep.add("H2", Side::upper, prm.C1, cfg.rel_tol);
  rep.add("H3", Side::upper, prm.C1, cfg.rel_tol);
  rep.add("H4", Side::upper, prm.K, cfg.rel_tol);
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : INFINITY; };

  std::vector<double> x(prm.n), y(prm.n);
  for (std::uint64_t k = 0; k < cfg.samples; ++k) {
    auto g = sample_stream(cfg.seed, k);
    for (int d = 0; d < prm.n; ++d) {
      x[d] = uniform(g, 0.0, 1.0);
      y[d] = uniform(g, 0.0, 1.0);
    }
    const double t = uniform(g, 0.0, cfg.T);
    // Half the samples cluster near s = 1 where the power laws are most delicate.
    double s = (k % 2 == 0) ? uniform(g, 1.0, cfg.s_max)
                            : 1.0 + std::pow(10.0, uniform(g, -8.0, 0.0));
    if (s <= 1.0) s = std::nextafter(1.0, 2.0);
    const double Fv = F.value(x, t, s);
    const double sm1 = s - 1.0;

    rep.at("H1").record(std::max(ratio(Fv, std::pow(s, p)), ratio(std::pow(sm1, p), Fv)));

    const double Fs = F.d_s(x, t, s);
    rep.at("H2").record(std::max(ratio(Fs, std::pow(sm1, p - 1.0)), ratio(std::pow(sm1, p - 1.0), Fs)));

    if (sm1 > cfg.band) {
      const double Fss = F.d_ss(x, t, s);
      rep.at("H3").record(std::max(ratio(Fss, std::pow(sm1, p - 2.0)), ratio(std::pow(sm1, p - 2.0), Fss)));
    }

    double dxy = 0.0;
    for (int d = 0; d < prm.n; ++d) dxy += (x[d] - y[d]) * (x[d] - y[d]);
    dxy = std::sqrt(dxy);
    if (dxy > 0.0) {
      const double diff = std::abs(F.d_s(x, t, s) - F.d_s(y, t, s));
      rep.at("H4").record(diff / (dxy * std::pow(s, p - 1.0)));
    }
  }
  return rep;
}

}  // namespace dgl
