#include "degenlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace dgl {

Grid::Grid(int dim, int cells) : dim_(dim), cells_(cells) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
  if (cells < 2) throw std::invalid_argument("grid: need at least 2 cells per axis");
  h_ = 1.0 / cells;
  count_ = 1;
  for (int k = 0; k < 3; ++k) {
    stride_[k] = count_;
    if (k < dim) count_ *= per_axis();
  }
}

Grid Grid::from_spacing(int dim, double h) {
  if (!(h > 0.0 && h <= 0.5)) throw std::invalid_argument("grid: spacing must lie in (0, 1/2]");
  const double c = 1.0 / h;
  const long cells = std::lround(c);
  if (std::abs(c - cells) > 1e-9 * c) throw std::invalid_argument("grid: 1/h must be an integer");
  return Grid(dim, static_cast<int>(cells));
}

std::array<int, 3> Grid::index(std::size_t node) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int k = 0; k < dim_; ++k) idx[k] = coord_index(node, k);
  return idx;
}

std::size_t Grid::node(const std::array<int, 3>& idx) const {
  std::size_t v = 0;
  for (int k = 0; k < dim_; ++k) v += static_cast<std::size_t>(idx[k]) * stride_[k];
  return v;
}

void Grid::coords(std::size_t node, double* x) const {
  for (int k = 0; k < dim_; ++k) x[k] = coord_index(node, k) * h_;
}

bool Grid::on_boundary(std::size_t node) const {
  for (int k = 0; k < dim_; ++k) {
    const int i = coord_index(node, k);
    if (i == 0 || i == cells_) return true;
  }
  return false;
}

double Grid::cell_volume() const { return std::pow(h_, dim_); }

GradientMatrix GradientField::at(std::size_t node) const {
  GradientMatrix m(N_, grid_.dim());
  for (int i = 0; i < N_; ++i)
    for (int k = 0; k < grid_.dim(); ++k) m(i, k) = (*this)(node, i, k);
  return m;
}

namespace {

// Derivative along axis k at a node, one-sided (second order) on the boundary.
double axis_derivative(const Field& u, std::size_t node, int i, int k) {
  const Grid& g = u.grid();
  const std::size_t s = g.stride(k);
  const int idx = g.coord_index(node, k);
  const double h = g.h();
  if (idx == 0) return (-3.0 * u(node, i) + 4.0 * u(node + s, i) - u(node + 2 * s, i)) / (2.0 * h);
  if (idx == g.cells())
    return (3.0 * u(node, i) - 4.0 * u(node - s, i) + u(node - 2 * s, i)) / (2.0 * h);
  return (u(node + s, i) - u(node - s, i)) / (2.0 * h);
}

}  // namespace

GradientField gradient(const Field& u) {
  const Grid& g = u.grid();
  GradientField Du(g, u.components());
  for (std::size_t v = 0; v < g.node_count(); ++v)
    for (int i = 0; i < u.components(); ++i)
      for (int k = 0; k < g.dim(); ++k) Du(v, i, k) = axis_derivative(u, v, i, k);
  return Du;
}

void face_gradient(const Field& u, int dir, std::size_t lower, GradientMatrix& out) {
  const Grid& g = u.grid();
  const std::size_t upper = lower + g.stride(dir);
  const double h = g.h();
  for (int i = 0; i < u.components(); ++i) {
    for (int k = 0; k < g.dim(); ++k) {
      if (k == dir)
        out(i, k) = (u(upper, i) - u(lower, i)) / h;
      else
        out(i, k) = 0.5 * (axis_derivative(u, lower, i, k) + axis_derivative(u, upper, i, k));
    }
  }
}

FaceFlux::FaceFlux(const Grid& g, int N_) : grid(g), N(N_) {
  for (int k = 0; k < g.dim(); ++k) normal[k].assign(g.node_count() * N, 0.0);
}

Field divergence_of_flux(const FaceFlux& flux) {
  const Grid& g = flux.grid;
  Field out(g, flux.N);
  const double h = g.h();
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (g.on_boundary(v)) continue;
    for (int i = 0; i < flux.N; ++i) {
      double acc = 0.0;
      for (int k = 0; k < g.dim(); ++k) acc += flux.at(k, v, i) - flux.at(k, v - g.stride(k), i);
      out(v, i) = acc / h;
    }
  }
  return out;
}

void GridField::push(double t, Field f) {
  if (!(f.grid() == grid_) || f.components() != N_)
    throw std::invalid_argument("grid field: level does not match the grid");
  if (!times_.empty() && !(t > times_.back()))
    throw std::invalid_argument("grid field: times must increase");
  times_.push_back(t);
  levels_.push_back(std::move(f));
}

bool ParabolicCylinder::contains(const double* x, double t) const {
  // Node-centre inclusion on the closed cylinder, with a rounding allowance.
  const double tol = 1e-12;
  if (t > t1 + tol || t < t1 - r * r - tol) return false;
  double d2 = 0.0;
  for (std::size_t k = 0; k < x1.size(); ++k) d2 += (x[k] - x1[k]) * (x[k] - x1[k]);
  return std::sqrt(d2) <= r * (1.0 + tol);
}

bool ParabolicCylinder::inside_domain(double t_start, double t_end) const {
  for (double c : x1)
    if (c - r < 0.0 || c + r > 1.0) return false;
  return t1 - r * r >= t_start - 1e-12 && t1 <= t_end + 1e-12;
}

namespace {

template <class Fn>
void for_each_in(const GridField& f, const ParabolicCylinder& Q, Fn&& fn) {
  if (f.components() != 1) throw std::invalid_argument("cylinder statistics need a scalar field");
  if (static_cast<int>(Q.x1.size()) != f.grid().dim())
    throw std::invalid_argument("cylinder vertex dimension does not match the grid");
  double x[3];
  for (std::size_t l = 0; l < f.levels(); ++l) {
    const double t = f.time(l);
    for (std::size_t v = 0; v < f.grid().node_count(); ++v) {
      f.grid().coords(v, x);
      if (Q.contains(x, t)) fn(f.level(l)(v, 0));
    }
  }
}

}  // namespace

double cylinder_mean(const GridField& f, const ParabolicCylinder& Q, double exponent) {
  double acc = 0.0;
  std::size_t count = 0;
  for_each_in(f, Q, [&](double v) {
    acc += std::pow(v, exponent);
    ++count;
  });
  if (count == 0) throw std::invalid_argument("cylinder contains no grid nodes");
  return acc / count;
}

double cylinder_sup(const GridField& f, const ParabolicCylinder& Q) {
  double best = -INFINITY;
  std::size_t count = 0;
  for_each_in(f, Q, [&](double v) {
    best = std::max(best, v);
    ++count;
  });
  if (count == 0) throw std::invalid_argument("cylinder contains no grid nodes");
  return best;
}

double cylinder_power_mean(const GridField& f, const ParabolicCylinder& Q, double q) {
  const double top = cylinder_sup(f, Q);
  if (!(top > 0.0)) throw std::invalid_argument("power mean needs a positive field");
  double acc = 0.0;
  std::size_t count = 0;
  for_each_in(f, Q, [&](double v) {
    acc += std::pow(v / top, q);
    ++count;
  });
  return top * std::pow(acc / count, 1.0 / q);
}

GridField steklov_average(const GridField& v, double lag) {
  const std::size_t L = v.levels();
  if (L < 2) throw std::invalid_argument("steklov: need at least two levels");
  const double t_lo = v.time(0), t_hi = v.time(L - 1);
  if (!(lag > 0.0 && lag < t_hi - t_lo)) throw std::domain_error("steklov: lag out of range");
  const std::size_t size = v.level(0).data().size();
  GridField out(v.grid(), v.components());
  const double tol = 1e-12 * (t_hi - t_lo);
  for (std::size_t l = 0; l < L; ++l) {
    Field f(v.grid(), v.components());
    const double a = v.time(l), b = a + lag;
    if (b <= t_hi + tol) {
      // Integrate the piecewise linear interpolant exactly over [a,b].
      auto& acc = f.data();
      std::size_t m = l;
      while (m + 1 < L && v.time(m) < b) {
        const double ta = v.time(m), tb = v.time(m + 1);
        const double lo = std::max(ta, a), hi = std::min(tb, b);
        if (hi > lo) {
          const double wa0 = (tb - lo) / (tb - ta), wa1 = (tb - hi) / (tb - ta);
          const auto& ua = v.level(m).data();
          const auto& ub = v.level(m + 1).data();
          for (std::size_t j = 0; j < size; ++j) {
            const double ylo = wa0 * ua[j] + (1.0 - wa0) * ub[j];
            const double yhi = wa1 * ua[j] + (1.0 - wa1) * ub[j];
            acc[j] += 0.5 * (ylo + yhi) * (hi - lo);
          }
        }
        ++m;
      }
      for (double& x : acc) x /= lag;
    }
    out.push(v.time(l), std::move(f));
  }
  return out;
}

double l2_norm(const Field& u) {
  double acc = 0.0;
  for (double x : u.data()) acc += x * x;
  return std::sqrt(acc * u.grid().cell_volume());
}

double l2_distance(const Field& u, const Field& v) {
  if (!(u.grid() == v.grid()) || u.components() != v.components())
    throw std::invalid_argument("l2_distance: fields live on different grids");
  double acc = 0.0;
  for (std::size_t j = 0; j < u.data().size(); ++j) {
    const double d = u.data()[j] - v.data()[j];
    acc += d * d;
  }
  return std::sqrt(acc * u.grid().cell_volume());
}

double lp_norm(const GridField& f, double p) {
  const std::size_t L = f.levels();
  if (L == 0) return 0.0;
  const int N = f.components();
  auto level_integral = [&](std::size_t l) {
    double acc = 0.0;
    const Field& u = f.level(l);
    for (std::size_t v = 0; v < f.grid().node_count(); ++v) {
      double s = 0.0;
      for (int i = 0; i < N; ++i) s += u(v, i) * u(v, i);
      acc += std::pow(std::sqrt(s), p);
    }
    return acc * f.grid().cell_volume();
  };
  if (L == 1) return std::pow(level_integral(0), 1.0 / p);
  double total = 0.0;
  double prev = level_integral(0);
  for (std::size_t l = 1; l < L; ++l) {
    const double cur = level_integral(l);
    total += 0.5 * (prev + cur) * (f.time(l) - f.time(l - 1));
    prev = cur;
  }
  return std::pow(total, 1.0 / p);
}

void write_csv(const GridField& f, std::ostream& os) {
  const Grid& g = f.grid();
  os << "t";
  for (int k = 0; k < g.dim(); ++k) os << ",x" << k + 1;
  for (int i = 0; i < f.components(); ++i) os << ",u" << i + 1;
  os << '\n';
  char buf[64];
  double x[3];
  for (std::size_t l = 0; l < f.levels(); ++l) {
    std::snprintf(buf, sizeof buf, "%.17g", f.time(l));
    const std::string ts = buf;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      os << ts;
      g.coords(v, x);
      for (int k = 0; k < g.dim(); ++k) {
        std::snprintf(buf, sizeof buf, ",%.17g", x[k]);
        os << buf;
      }
      for (int i = 0; i < f.components(); ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g", f.level(l)(v, i));
        os << buf;
      }
      os << '\n';
    }
  }
}

namespace {

constexpr char kMagic[8] = {'D', 'G', 'L', 'S', 'N', 'A', 'P', '1'};

template <class T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("snapshot: truncated file");
  return v;
}

}  // namespace

void write_binary(const GridField& f, const std::string& path, double dt, double T) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path);
  const Grid& g = f.grid();
  os.write(kMagic, sizeof kMagic);
  put<std::int32_t>(os, g.dim());
  put<std::int32_t>(os, f.components());
  for (int k = 0; k < g.dim(); ++k) put<std::int32_t>(os, static_cast<std::int32_t>(g.per_axis()));
  put<double>(os, g.h());
  put<double>(os, dt);
  put<double>(os, T);
  put<std::uint64_t>(os, f.levels());
  for (std::size_t l = 0; l < f.levels(); ++l) {
    put<double>(os, f.time(l));
    const auto& d = f.level(l).data();
    os.write(reinterpret_cast<const char*>(d.data()), static_cast<std::streamsize>(d.size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("snapshot: write failed for " + path);
}

GridField read_binary(const std::string& path, SnapshotHeader* header) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("snapshot: bad magic in " + path);
  SnapshotHeader hd;
  hd.n = get<std::int32_t>(is);
  hd.N = get<std::int32_t>(is);
  if (hd.n < 1 || hd.n > 3 || hd.N < 1) throw std::runtime_error("snapshot: corrupt header");
  for (int k = 0; k < hd.n; ++k) hd.dims.push_back(get<std::int32_t>(is));
  hd.h = get<double>(is);
  hd.dt = get<double>(is);
  hd.T = get<double>(is);
  const Grid g(hd.n, hd.dims[0] - 1);
  GridField f(g, hd.N);
  const auto levels = get<std::uint64_t>(is);
  for (std::uint64_t l = 0; l < levels; ++l) {
    const double t = get<double>(is);
    Field u(g, hd.N);
    auto& d = u.data();
    is.read(reinterpret_cast<char*>(d.data()), static_cast<std::streamsize>(d.size() * sizeof(double)));
    if (!is) throw std::runtime_error("snapshot: truncated level data");
    f.push(t, std::move(u));
  }
  if (header) *header = hd;
  return f;
}

}  // namespace dgl
