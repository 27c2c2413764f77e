#pragma once

#include <cstdint>
#include <vector>

#include "shrinkflow/flow_trace.hpp"
#include "shrinkflow/mesh.hpp"

namespace shrinkflow {

// Gaussian weight (4 pi)^{-n/2} exp(-|x|^2 / 4) for n-dimensional surfaces.
double gaussian_weight(const Vec3& x, int n);

// Backward heat kernel (s - t)^{-n/2} Phi((x - y) / sqrt(s - t)); needs t < s.
double backward_kernel(const Vec3& x, double t, const Vec3& y, double s, int n);

// Gaussian-weighted area by centroid quadrature, elements subdivided until
// their diameter falls below 0.05 in the integration coordinates.
double f_functional(const SurfaceMesh& mesh);

// Quadrature cache bound to one mesh: evaluates F[rho (mesh - y)] by
// transforming cached points instead of rebuilding the mesh. Refinement depth
// adapts per element to the rescaled diameter; shallow depths are cached,
// deeper ones recurse on the fly. Far elements below the tail tolerance are
// skipped. Not thread-safe during the first eval at a new depth.
class FQuadrature {
 public:
  explicit FQuadrature(const SurfaceMesh& mesh);
  double eval(const Vec3& y, double rho) const;
  int n() const { return n_; }
  double total_area() const { return total_area_; }

 private:
  struct Level {
    std::vector<double> px, py, pz, w;  // centroid coordinates and measures
  };
  struct ElemGeom {
    Vec3 a, b, c;
    Vec3 centroid;
    double diameter = 0;
    double measure = 0;
  };

  void build_level(int depth) const;
  std::size_t points_per_element(int depth) const;
  void append_segment(Level& lv, const Vec3& a, const Vec3& b, int depth) const;
  void append_triangle(Level& lv, const Vec3& a, const Vec3& b, const Vec3& c, int depth) const;

  int n_ = 2;
  double total_area_ = 0;
  double max_diameter_ = 0;
  std::vector<ElemGeom> elements_;
  mutable std::vector<Level> levels_;
  const SurfaceMesh* mesh_ = nullptr;
};

struct OptimizerOptions {
  int polish_top = 8;          // starts kept for the full local ascent
  int sweeps = 3;              // coordinate golden-section rounds
  int nm_max_iter = 400;       // simplex polish budget
  double nm_tol = 1e-10;       // simplex size stop
  int max_iters = 200000;      // global F-evaluation budget
  bool allow_open = false;     // accept meshes with boundary
  double jitter = 0;           // optional start jitter (reserved)
  std::uint64_t seed = 0;
};

struct EntropyReport {
  double lambda = 0;
  Vec3 best_center{};
  double best_scale = 1;
  double f_at_optimum = 0;
  int starts = 0;
  bool converged = false;
  std::vector<double> start_values;  // final value per start, start order
  double truncation_bound = 0;       // Gaussian tail bound for open meshes
};

// sup over (y, rho) of F[rho (mesh - y)] by multi-start coordinate ascent in
// (y, log rho) with golden-section line searches and a simplex polish.
EntropyReport entropy(const SurfaceMesh& mesh, const OptimizerOptions& opts = {});

// Closed-form lambda[S^{n-k} x R^k] = omega_{n-k} ((n-k)/(2 pi e))^{(n-k)/2}.
double lambda_round(int n, int k);

struct DensityOptions {
  int samples = 6;        // number of trailing samples; 0 means all
  double min_gap = -1;    // minimal s - t; negative selects an h^2-based guard
};

struct DensityReport {
  Vec3 y{};
  double s = 0;
  std::vector<double> times;
  std::vector<double> values;
  double theta = 0;          // affine-in-sqrt(s-t) extrapolation to t -> s
  double max_violation = 0;  // largest positive consecutive increment
  bool pass = true;
  double tolerance = 0;
};

DensityReport gaussian_density(const FlowTrace& trace, const Vec3& y, double s,
                               const DensityOptions& opts = {});

// Huisken monotonicity surrogate: PASS iff no consecutive increase above tol.
// Samples every stored slice before s unless opts.samples limits the count.
DensityReport monotonicity_check(const FlowTrace& trace, const Vec3& y, double s, double tol,
                                 DensityOptions opts = {.samples = 0});

}  // namespace shrinkflow
