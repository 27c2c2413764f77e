#include "shrinkflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace shrinkflow {

double gaussian_weight(const Vec3& x, int n) {
  return std::pow(4.0 * kPi, -0.5 * n) * std::exp(-0.25 * norm2(x));
}

double backward_kernel(const Vec3& x, double t, const Vec3& y, double s, int n) {
  if (!(t < s)) throw std::invalid_argument("backward_kernel: requires t < s");
  double tau = s - t;
  return std::pow(tau, -0.5 * n) * gaussian_weight((x - y) / std::sqrt(tau), n);
}

// --- quadrature --------------------------------------------------------------

namespace {
constexpr double kRefineDiameter = 0.05;  // rescaled element diameter target
constexpr int kEagerDepth = 3;            // cached refinement levels
constexpr int kMaxDepth = 6;
constexpr double kTailTolerance = 1e-12;  // dropped far-field mass per eval
}  // namespace

FQuadrature::FQuadrature(const SurfaceMesh& mesh) : mesh_(&mesh) {
  n_ = mesh.n();
  std::size_t ne = mesh.element_count();
  levels_.resize(kEagerDepth + 1);
  elements_.reserve(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    ElemGeom g;
    if (mesh.dim == 2) {
      g.a = mesh.vertices[mesh.segments[e][0]];
      g.b = mesh.vertices[mesh.segments[e][1]];
      g.c = g.b;
      g.diameter = norm(g.b - g.a);
      g.measure = g.diameter;
      g.centroid = (g.a + g.b) * 0.5;
    } else {
      g.a = mesh.vertices[mesh.triangles[e][0]];
      g.b = mesh.vertices[mesh.triangles[e][1]];
      g.c = mesh.vertices[mesh.triangles[e][2]];
      g.diameter = std::max({norm(g.b - g.a), norm(g.c - g.b), norm(g.a - g.c)});
      g.measure = 0.5 * norm(cross(g.b - g.a, g.c - g.a));
      g.centroid = (g.a + g.b + g.c) / 3.0;
    }
    total_area_ += g.measure;
    max_diameter_ = std::max(max_diameter_, g.diameter);
    elements_.push_back(g);
  }
}

void FQuadrature::build_level(int depth) const {
  Level& lv = levels_[depth];
  if (!lv.px.empty() || elements_.empty()) return;
  std::size_t per = points_per_element(depth);
  lv.px.reserve(elements_.size() * per);
  lv.py.reserve(elements_.size() * per);
  lv.pz.reserve(elements_.size() * per);
  lv.w.reserve(elements_.size() * per);
  for (const ElemGeom& g : elements_) {
    if (n_ == 1)
      append_segment(lv, g.a, g.b, depth);
    else
      append_triangle(lv, g.a, g.b, g.c, depth);
  }
}

std::size_t FQuadrature::points_per_element(int depth) const {
  return n_ == 1 ? (std::size_t{1} << depth) : (std::size_t{1} << (2 * depth));
}

void FQuadrature::append_segment(Level& lv, const Vec3& a, const Vec3& b, int depth) const {
  if (depth == 0) {
    Vec3 c = (a + b) * 0.5;
    lv.px.push_back(c.x);
    lv.py.push_back(c.y);
    lv.pz.push_back(c.z);
    lv.w.push_back(norm(b - a));
    return;
  }
  Vec3 m = (a + b) * 0.5;
  append_segment(lv, a, m, depth - 1);
  append_segment(lv, m, b, depth - 1);
}

void FQuadrature::append_triangle(Level& lv, const Vec3& a, const Vec3& b, const Vec3& c,
                                  int depth) const {
  if (depth == 0) {
    Vec3 g = (a + b + c) / 3.0;
    lv.px.push_back(g.x);
    lv.py.push_back(g.y);
    lv.pz.push_back(g.z);
    lv.w.push_back(0.5 * norm(cross(b - a, c - a)));
    return;
  }
  Vec3 ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
  append_triangle(lv, a, ab, ca, depth - 1);
  append_triangle(lv, b, bc, ab, depth - 1);
  append_triangle(lv, c, ca, bc, depth - 1);
  append_triangle(lv, ab, bc, ca, depth - 1);
}

namespace {

double deep_eval_segment(const Vec3& a, const Vec3& b, int depth, const Vec3& y, double rho) {
  if (depth == 0) {
    Vec3 c = ((a + b) * 0.5 - y) * rho;
    return norm(b - a) * std::exp(-0.25 * norm2(c));
  }
  Vec3 m = (a + b) * 0.5;
  return deep_eval_segment(a, m, depth - 1, y, rho) + deep_eval_segment(m, b, depth - 1, y, rho);
}

double deep_eval_triangle(const Vec3& a, const Vec3& b, const Vec3& c, int depth, const Vec3& y,
                          double rho) {
  if (depth == 0) {
    Vec3 g = ((a + b + c) / 3.0 - y) * rho;
    return 0.5 * norm(cross(b - a, c - a)) * std::exp(-0.25 * norm2(g));
  }
  Vec3 ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
  return deep_eval_triangle(a, ab, ca, depth - 1, y, rho) +
         deep_eval_triangle(b, bc, ab, depth - 1, y, rho) +
         deep_eval_triangle(c, ca, bc, depth - 1, y, rho) +
         deep_eval_triangle(ab, bc, ca, depth - 1, y, rho);
}

}  // namespace

double FQuadrature::eval(const Vec3& y, double rho) const {
  if (!(rho > 0)) throw std::invalid_argument("FQuadrature::eval: rho must be positive");
  if (elements_.empty()) return 0.0;
  const double norm_const = std::pow(4.0 * kPi, -0.5 * n_);
  const double mass = std::pow(rho, n_) * total_area_ * norm_const;
  // Elements mapped farther than r_cut contribute less than kTailTolerance.
  double r_cut2 = mass > 0 ? 4.0 * std::max(0.0, std::log(mass / kTailTolerance)) : 0.0;

  double acc = 0.0;
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const ElemGeom& g = elements_[e];
    double dist = norm(g.centroid - y);
    double closest = rho * std::max(0.0, dist - g.diameter);
    if (closest * closest > r_cut2) continue;

    int depth = 0;
    double scaled = rho * g.diameter;
    while (depth < kMaxDepth && scaled > kRefineDiameter) {
      scaled *= 0.5;
      ++depth;
    }
    if (depth <= kEagerDepth) {
      build_level(depth);
      const Level& lv = levels_[depth];
      std::size_t per = points_per_element(depth);
      std::size_t lo = e * per, hi = lo + per;
      double local = 0;
      for (std::size_t p = lo; p < hi; ++p) {
        double dx = rho * (lv.px[p] - y.x);
        double dy = rho * (lv.py[p] - y.y);
        double dz = rho * (lv.pz[p] - y.z);
        local += lv.w[p] * std::exp(-0.25 * (dx * dx + dy * dy + dz * dz));
      }
      acc += local;
    } else {
      acc += n_ == 1 ? deep_eval_segment(g.a, g.b, depth, y, rho)
                     : deep_eval_triangle(g.a, g.b, g.c, depth, y, rho);
    }
  }
  return std::pow(rho, n_) * norm_const * acc;
}

double f_functional(const SurfaceMesh& mesh) {
  return FQuadrature(mesh).eval(Vec3{0, 0, 0}, 1.0);
}

// --- entropy optimizer --------------------------------------------------------

double lambda_round(int n, int k) {
  if (n < 1) throw std::invalid_argument("lambda_round: n must be >= 1");
  if (k < 0 || k > n) throw std::invalid_argument("lambda_round: need 0 <= k <= n");
  int m = n - k;
  if (m == 0) return 1.0;  // hyperplane
  return unit_sphere_area(m) * std::pow(m / (2.0 * kPi * std::exp(1.0)), 0.5 * m);
}

namespace {

struct Candidate {
  Vec3 y{};
  double log_rho = 0;
  double value = -1;
};

// Golden-section maximisation on [lo, hi]; deterministic iteration count.
template <class Fn>
double golden_max(Fn&& f, double lo, double hi, double tol, double& best_val) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  if (f1 >= f2) {
    best_val = f1;
    return x1;
  }
  best_val = f2;
  return x2;
}

struct Objective {
  const FQuadrature& quad;
  int dims;  // ambient dimension
  mutable long evals = 0;

  double operator()(const Vec3& y, double log_rho) const {
    ++evals;
    return quad.eval(y, std::exp(log_rho));
  }
};

// One coordinate sweep: golden-section along each of y_0..y_{dims-1}, log rho.
void coordinate_sweep(const Objective& f, Candidate& c, double step_y, double step_rho,
                      double tol_factor) {
  for (int axis = 0; axis < f.dims; ++axis) {
    double best = c.value;
    Vec3 y = c.y;
    double x = golden_max(
        [&](double v) {
          Vec3 yy = y;
          yy[axis] = v;
          return f(yy, c.log_rho);
        },
        y[axis] - step_y, y[axis] + step_y, step_y * tol_factor, best);
    if (best >= c.value) {
      c.y[axis] = x;
      c.value = best;
    }
  }
  double best = c.value;
  double x = golden_max([&](double v) { return f(c.y, v); }, c.log_rho - step_rho,
                        c.log_rho + step_rho, step_rho * tol_factor, best);
  if (best >= c.value) {
    c.log_rho = x;
    c.value = best;
  }
}

// Deterministic Nelder-Mead polish over (y, log rho).
bool nelder_mead(const Objective& f, Candidate& c, int max_iter, double size_tol) {
  int d = f.dims + 1;
  auto pack = [&](const Candidate& q) {
    std::vector<double> x(d);
    for (int a = 0; a < f.dims; ++a) x[a] = q.y[a];
    x[d - 1] = q.log_rho;
    return x;
  };
  auto value = [&](const std::vector<double>& x) {
    Vec3 y{};
    for (int a = 0; a < f.dims; ++a) y[a] = x[a];
    return f(y, x[d - 1]);
  };

  std::vector<std::vector<double>> simplex(d + 1, pack(c));
  std::vector<double> fv(d + 1);
  for (int i = 1; i <= d; ++i) simplex[i][i - 1] += 0.02;
  for (int i = 0; i <= d; ++i) fv[i] = value(simplex[i]);

  auto order = [&] {
    std::vector<int> idx(d + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] > fv[b]; });
    std::vector<std::vector<double>> s2(d + 1);
    std::vector<double> f2(d + 1);
    for (int i = 0; i <= d; ++i) {
      s2[i] = simplex[idx[i]];
      f2[i] = fv[idx[i]];
    }
    simplex.swap(s2);
    fv.swap(f2);
  };

  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    order();
    double size = 0;
    for (int i = 1; i <= d; ++i)
      for (int a = 0; a < d; ++a) size = std::max(size, std::fabs(simplex[i][a] - simplex[0][a]));
    if (size < size_tol) {
      converged = true;
      break;
    }
    std::vector<double> centroid(d, 0.0);
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < d; ++a) centroid[a] += simplex[i][a] / d;
    auto combine = [&](double coef) {
      std::vector<double> x(d);
      for (int a = 0; a < d; ++a) x[a] = centroid[a] + coef * (simplex[d][a] - centroid[a]);
      return x;
    };
    auto xr = combine(-1.0);
    double fr = value(xr);
    if (fr > fv[0]) {
      auto xe = combine(-2.0);
      double fe = value(xe);
      if (fe > fr) {
        simplex[d] = xe;
        fv[d] = fe;
      } else {
        simplex[d] = xr;
        fv[d] = fr;
      }
    } else if (fr > fv[d - 1]) {
      simplex[d] = xr;
      fv[d] = fr;
    } else {
      auto xc = combine(0.5);
      double fc = value(xc);
      if (fc > fv[d]) {
        simplex[d] = xc;
        fv[d] = fc;
      } else {
        for (int i = 1; i <= d; ++i) {
          for (int a = 0; a < d; ++a) simplex[i][a] = 0.5 * (simplex[i][a] + simplex[0][a]);
          fv[i] = value(simplex[i]);
        }
      }
    }
  }
  order();
  Candidate best = c;
  for (int a = 0; a < f.dims; ++a) best.y[a] = simplex[0][a];
  best.log_rho = simplex[0][d - 1];
  best.value = fv[0];
  if (best.value >= c.value) c = best;
  return converged;
}

double boundary_tail_bound(const SurfaceMesh& mesh, const Vec3& y, double rho, double f_value) {
  if (mesh.dim != 3) return 0.0;
  // Distance of the open boundary from the optimal centre, rescaled.
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  double dmin = std::numeric_limits<double>::max();
  for (const auto& [e, c] : edge_count)
    if (c == 1) {
      dmin = std::min(dmin, rho * norm(mesh.vertices[e.first] - y));
      dmin = std::min(dmin, rho * norm(mesh.vertices[e.second] - y));
    }
  if (dmin == std::numeric_limits<double>::max()) return 0.0;  // closed after all
  return f_value * std::erfc(0.5 * dmin);
}

}  // namespace

EntropyReport entropy(const SurfaceMesh& mesh, const OptimizerOptions& opts) {
  validate(mesh);
  bool open = !is_closed(mesh);
  if (open && !(mesh.open_allowed || opts.allow_open))
    throw std::invalid_argument("entropy: open mesh requires the open-mesh flag");
  if (mesh.empty()) throw std::invalid_argument("entropy: empty mesh");

  FQuadrature quad(mesh);
  Objective objective{quad, mesh.dim};

  // Scale of the shrinker-radius rescaling: rho* maps r_eff to sqrt(2n).
  int n = mesh.n();
  double r_eff = std::pow(area(mesh) / unit_sphere_area(n), 1.0 / n);
  double log_rho_star = std::log(std::sqrt(2.0 * n) / r_eff);

  Vec3 lo, hi;
  bounding_box(mesh, lo, hi);
  Vec3 c = area_centroid(mesh);
  double diag = norm(hi - lo);

  std::vector<Candidate> starts;
  std::vector<Vec3> centers{c};
  {
    int steps = 3;
    int kmax = mesh.dim == 3 ? steps : 1;
    for (int k = 0; k < kmax; ++k)
      for (int j = 0; j < steps; ++j)
        for (int i = 0; i < steps; ++i) {
          Vec3 p{lo.x + 0.5 * i * (hi.x - lo.x), lo.y + 0.5 * j * (hi.y - lo.y),
                 mesh.dim == 3 ? lo.z + 0.5 * k * (hi.z - lo.z) : 0.0};
          centers.push_back(p);
        }
  }
  for (const Vec3& y : centers)
    for (int off = -2; off <= 2; ++off) starts.push_back({y, log_rho_star + off, -1});
  starts.push_back({Vec3{0, 0, 0}, 0.0, -1});  // keeps lambda >= F[mesh]

  // Screening sweep on every start, full polish on the leaders.
  double step_y = std::max(diag / 4.0, 0.05);
  for (Candidate& s : starts) {
    s.value = objective(s.y, s.log_rho);
    coordinate_sweep(objective, s, step_y, 1.0, 1e-2);
    if (objective.evals > opts.max_iters) break;
  }

  std::vector<int> idx(starts.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto better = [&](int a, int b) {
    if (starts[a].value != starts[b].value) return starts[a].value > starts[b].value;
    double na = norm(starts[a].y), nb = norm(starts[b].y);
    if (na != nb) return na < nb;
    double la = std::fabs(starts[a].log_rho), lb = std::fabs(starts[b].log_rho);
    if (la != lb) return la < lb;
    return a < b;
  };
  std::stable_sort(idx.begin(), idx.end(), better);

  bool converged = false;
  int polish = std::min<int>(opts.polish_top, static_cast<int>(starts.size()));
  for (int rank = 0; rank < polish; ++rank) {
    Candidate& s = starts[idx[rank]];
    for (int sweep = 1; sweep < opts.sweeps; ++sweep)
      coordinate_sweep(objective, s, step_y * std::pow(0.25, sweep), std::pow(0.25, sweep),
                       1e-3);
    bool ok = nelder_mead(objective, s, opts.nm_max_iter, opts.nm_tol);
    if (rank == 0) converged = ok;
    if (objective.evals > opts.max_iters) {
      if (rank == 0) converged = false;
      break;
    }
  }
  std::stable_sort(idx.begin(), idx.end(), better);

  const Candidate& best = starts[idx[0]];
  EntropyReport report;
  report.lambda = best.value;
  report.best_center = best.y;
  report.best_scale = std::exp(best.log_rho);
  report.f_at_optimum = quad.eval(best.y, report.best_scale);
  report.starts = static_cast<int>(starts.size());
  report.converged = converged;
  report.start_values.reserve(starts.size());
  for (const Candidate& s : starts) report.start_values.push_back(s.value);
  if (open)
    report.truncation_bound = boundary_tail_bound(mesh, best.y, report.best_scale, report.lambda);
  return report;
}

// --- Gaussian density ----------------------------------------------------------

namespace {

DensityReport density_impl(const FlowTrace& trace, const Vec3& y, double s,
                           const DensityOptions& opts) {
  trace.validate();
  double gap = opts.min_gap;
  if (gap < 0) {
    auto it = trace.params.find("h");
    gap = it != trace.params.end() ? 10.0 * it->second * it->second : 0.0;
  }
  std::vector<int> usable;
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (trace.times[i] < s - gap) usable.push_back(static_cast<int>(i));
  if (usable.size() < 4)
    throw std::invalid_argument("gaussian_density: fewer than 4 usable states before s");
  if (opts.samples > 0 && static_cast<int>(usable.size()) > opts.samples)
    usable.erase(usable.begin(), usable.end() - opts.samples);

  DensityReport report;
  report.y = y;
  report.s = s;
  for (int i : usable) {
    double t = trace.times[i];
    double rho = 1.0 / std::sqrt(s - t);
    double value = trace.slices[i].empty() ? 0.0 : FQuadrature(trace.slices[i]).eval(y, rho);
    report.times.push_back(t);
    report.values.push_back(value);
  }
  // Affine fit in sqrt(s - t); the intercept extrapolates to t -> s^-.
  double sw = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    double x = std::sqrt(s - report.times[i]);
    sw += 1;
    sx += x;
    sxx += x * x;
    sy += report.values[i];
    sxy += x * report.values[i];
  }
  double det = sw * sxx - sx * sx;
  report.theta = det != 0 ? (sxx * sy - sx * sxy) / det : report.values.back();

  double worst = 0;
  for (std::size_t i = 1; i < report.values.size(); ++i)
    worst = std::max(worst, report.values[i] - report.values[i - 1]);
  report.max_violation = std::max(0.0, worst);
  return report;
}

}  // namespace

DensityReport gaussian_density(const FlowTrace& trace, const Vec3& y, double s,
                               const DensityOptions& opts) {
  return density_impl(trace, y, s, opts);
}

DensityReport monotonicity_check(const FlowTrace& trace, const Vec3& y, double s, double tol,
                                 DensityOptions opts) {
  DensityReport report = density_impl(trace, y, s, opts);
  report.tolerance = tol;
  report.pass = report.max_violation <= tol;
  return report;
}

}  // namespace shrinkflow
