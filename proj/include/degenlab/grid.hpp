#ifndef DEGENLAB_GRID_HPP
#define DEGENLAB_GRID_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "degenlab/structure.hpp"

namespace dgl {

/** Uniform node grid on [0,1]^dim with cells+1 nodes per axis. */
class Grid {
 public:
  Grid() = default;
  Grid(int dim, int cells);
  /// h must divide 1 up to rounding.
  static Grid from_spacing(int dim, double h);

  int dim() const { return dim_; }
  int cells() const { return cells_; }
  double h() const { return h_; }
  std::size_t per_axis() const { return static_cast<std::size_t>(cells_) + 1; }
  std::size_t node_count() const { return count_; }
  std::size_t stride(int k) const { return stride_[k]; }
  int coord_index(std::size_t node, int k) const {
    return static_cast<int>((node / stride_[k]) % per_axis());
  }
  std::array<int, 3> index(std::size_t node) const;
  std::size_t node(const std::array<int, 3>& idx) const;
  void coords(std::size_t node, double* x) const;
  bool on_boundary(std::size_t node) const;
  double cell_volume() const;

  bool operator==(const Grid& o) const { return dim_ == o.dim_ && cells_ == o.cells_; }

 private:
  int dim_ = 1;
  int cells_ = 1;
  double h_ = 1.0;
  std::size_t count_ = 2;
  std::array<std::size_t, 3> stride_{1, 1, 1};
};

/** One time level of an N-component nodal field, stored node-major. */
class Field {
 public:
  Field() = default;
  Field(const Grid& g, int N, double fill = 0.0) : grid_(g), N_(N), a_(g.node_count() * N, fill) {}

  const Grid& grid() const { return grid_; }
  int components() const { return N_; }
  double& operator()(std::size_t node, int i) { return a_[node * N_ + i]; }
  double operator()(std::size_t node, int i) const { return a_[node * N_ + i]; }
  std::vector<double>& data() { return a_; }
  const std::vector<double>& data() const { return a_; }

 private:
  Grid grid_;
  int N_ = 1;
  std::vector<double> a_;
};

/** Nodal N x n gradients. */
class GradientField {
 public:
  GradientField(const Grid& g, int N) : grid_(g), N_(N), a_(g.node_count() * N * g.dim(), 0.0) {}
  const Grid& grid() const { return grid_; }
  int components() const { return N_; }
  double& operator()(std::size_t node, int i, int k) {
    return a_[(node * N_ + i) * grid_.dim() + k];
  }
  double operator()(std::size_t node, int i, int k) const {
    return a_[(node * N_ + i) * grid_.dim() + k];
  }
  GradientMatrix at(std::size_t node) const;

 private:
  Grid grid_;
  int N_;
  std::vector<double> a_;
};

/// Central differences inside, second-order one-sided stencils on the boundary.
GradientField gradient(const Field& u);

/// Gradient on the face between node and node + e_dir: exact normal difference,
/// tangential components averaged from the two adjacent nodes.
void face_gradient(const Field& u, int dir, std::size_t lower, GradientMatrix& out);

/** Normal flux components on the faces of each direction, indexed by the lower node. */
struct FaceFlux {
  Grid grid;
  int N = 1;
  std::array<std::vector<double>, 3> normal;

  FaceFlux(const Grid& g, int N_);
  double& at(int dir, std::size_t lower, int i) { return normal[dir][lower * N + i]; }
  double at(int dir, std::size_t lower, int i) const { return normal[dir][lower * N + i]; }
};

/// Backward difference of face fluxes at interior nodes, zero on the boundary.
Field divergence_of_flux(const FaceFlux& flux);

/** A sequence of time levels on a common grid. */
class GridField {
 public:
  GridField() = default;
  GridField(const Grid& g, int N) : grid_(g), N_(N) {}

  const Grid& grid() const { return grid_; }
  int components() const { return N_; }
  std::size_t levels() const { return times_.size(); }
  double time(std::size_t l) const { return times_[l]; }
  const std::vector<double>& times() const { return times_; }
  const Field& level(std::size_t l) const { return levels_[l]; }
  Field& level(std::size_t l) { return levels_[l]; }
  void push(double t, Field f);

 private:
  Grid grid_;
  int N_ = 1;
  std::vector<double> times_;
  std::vector<Field> levels_;
};

/** Q_r(z1) = B_r(x1) x (t1 - r^2, t1]. */
struct ParabolicCylinder {
  std::vector<double> x1;
  double t1 = 0.0;
  double r = 1.0;

  bool contains(const double* x, double t) const;
  /// Whether B_r(x1) lies inside [0,1]^n and t1 - r^2 >= t_start.
  bool inside_domain(double t_start, double t_end) const;
};

/// Mean of field^exponent over the nodes of Q (scalar fields only).
double cylinder_mean(const GridField& f, const ParabolicCylinder& Q, double exponent);
/// (mean field^q)^(1/q) computed with the field scaled by its maximum first.
double cylinder_power_mean(const GridField& f, const ParabolicCylinder& Q, double q);
double cylinder_sup(const GridField& f, const ParabolicCylinder& Q);

/// [v]_h(t) = (1/h) int_t^{t+h} v, piecewise linear in time between levels; zero once t+h passes the last level.
GridField steklov_average(const GridField& v, double lag);

/// (sum_nodes |u|^2 h^n)^(1/2) with |.| the Euclidean norm over components.
double l2_norm(const Field& u);
double l2_distance(const Field& u, const Field& v);
/// Space-time L^p norm, trapezoid weights in time over the stored levels.
double lp_norm(const GridField& f, double p);

void write_csv(const GridField& f, std::ostream& os);
void write_binary(const GridField& f, const std::string& path, double dt, double T);

struct SnapshotHeader {
  int n = 0;
  int N = 0;
  std::vector<int> dims;
  double h = 0.0, dt = 0.0, T = 0.0;
};

GridField read_binary(const std::string& path, SnapshotHeader* header = nullptr);

}  // namespace dgl

#endif
