#include "shrinkflow/mesh.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace shrinkflow {

double element_measure(const SurfaceMesh& mesh, std::size_t e) {
  if (mesh.dim == 2) {
    const auto& s = mesh.segments[e];
    return norm(mesh.vertices[s[1]] - mesh.vertices[s[0]]);
  }
  const auto& t = mesh.triangles[e];
  Vec3 u = mesh.vertices[t[1]] - mesh.vertices[t[0]];
  Vec3 v = mesh.vertices[t[2]] - mesh.vertices[t[0]];
  return 0.5 * norm(cross(u, v));
}

double area(const SurfaceMesh& mesh) {
  return block_reduce(mesh.element_count(), [&](std::size_t e) { return element_measure(mesh, e); });
}

Vec3 area_centroid(const SurfaceMesh& mesh) {
  Vec3 c{0, 0, 0};
  double total = 0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    double m = element_measure(mesh, e);
    Vec3 mid;
    if (mesh.dim == 2) {
      const auto& s = mesh.segments[e];
      mid = (mesh.vertices[s[0]] + mesh.vertices[s[1]]) * 0.5;
    } else {
      const auto& t = mesh.triangles[e];
      mid = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
    }
    c += mid * m;
    total += m;
  }
  return total > 0 ? c / total : c;
}

void bounding_box(const SurfaceMesh& mesh, Vec3& lo, Vec3& hi) {
  if (mesh.vertices.empty()) {
    lo = hi = Vec3{0, 0, 0};
    return;
  }
  lo = hi = mesh.vertices[0];
  for (const Vec3& v : mesh.vertices) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], v[a]);
      hi[a] = std::max(hi[a], v[a]);
    }
  }
}

double bounding_diameter(const SurfaceMesh& mesh) {
  Vec3 lo, hi;
  bounding_box(mesh, lo, hi);
  return norm(hi - lo);
}

bool is_closed(const SurfaceMesh& mesh) {
  if (mesh.dim == 2) {
    // Closed iff every vertex used is the head of exactly one segment and the
    // tail of exactly one.
    std::map<int, int> in, out;
    for (const auto& s : mesh.segments) {
      out[s[0]]++;
      in[s[1]]++;
    }
    for (const auto& [v, c] : out)
      if (c != 1 || in[v] != 1) return false;
    for (const auto& [v, c] : in)
      if (c != 1) return false;
    return !mesh.segments.empty();
  }
  std::map<std::pair<int, int>, int> forward;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      forward[{a, b}]++;
    }
  }
  for (const auto& [e, c] : forward) {
    auto rev = forward.find({e.second, e.first});
    if (c != 1 || rev == forward.end() || rev->second != 1) return false;
  }
  return !mesh.triangles.empty();
}

void validate(const SurfaceMesh& mesh, bool strict) {
  int nv = static_cast<int>(mesh.vertices.size());
  auto check_index = [&](int v) {
    if (v < 0 || v >= nv) throw std::invalid_argument("mesh: element references invalid vertex " + std::to_string(v));
  };
  if (mesh.dim == 2) {
    for (const auto& s : mesh.segments) {
      check_index(s[0]);
      check_index(s[1]);
    }
  } else if (mesh.dim == 3) {
    for (const auto& t : mesh.triangles) {
      check_index(t[0]);
      check_index(t[1]);
      check_index(t[2]);
    }
  } else {
    throw std::invalid_argument("mesh: ambient dimension must be 2 or 3");
  }
  if (!mesh.open_allowed && !mesh.empty() && !is_closed(mesh))
    throw std::invalid_argument("mesh: open or non-manifold mesh without open_allowed flag");
  if (strict) {
    double diam = bounding_diameter(mesh);
    double floor = 1e-12 * std::pow(diam, mesh.n());
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
      if (element_measure(mesh, e) <= floor)
        throw std::invalid_argument("mesh: degenerate element " + std::to_string(e));
    }
  }
}

SurfaceMesh rescale_measure(const SurfaceMesh& mesh, const Vec3& y, double rho) {
  if (!(rho > 0)) throw std::invalid_argument("rescale_measure: rho must be positive");
  SurfaceMesh out = mesh;
  for (Vec3& v : out.vertices) v = (v - y) * rho;
  return out;
}

void reverse_orientation(SurfaceMesh& mesh) {
  for (auto& s : mesh.segments) std::swap(s[0], s[1]);
  for (auto& t : mesh.triangles) std::swap(t[1], t[2]);
}

namespace {

CurvatureData curvature_polyline(const SurfaceMesh& mesh) {
  std::size_t nv = mesh.vertices.size();
  CurvatureData out;
  out.mean_curvature.assign(nv, Vec3{});
  out.normal.assign(nv, Vec3{});
  out.dual_area.assign(nv, 0.0);
  out.boundary.assign(nv, 0);

  std::vector<int> next(nv, -1), prev(nv, -1);
  for (const auto& s : mesh.segments) {
    next[s[0]] = s[1];
    prev[s[1]] = s[0];
  }
  for (std::size_t i = 0; i < nv; ++i) {
    if (next[i] < 0 || prev[i] < 0) {
      out.boundary[i] = 1;
      continue;
    }
    Vec3 p = mesh.vertices[prev[i]];
    Vec3 q = mesh.vertices[i];
    Vec3 r = mesh.vertices[next[i]];
    double la = norm(q - p), lb = norm(r - q), lc = norm(r - p);
    out.dual_area[i] = 0.5 * (la + lb);
    // Curvature of the circumscribed circle through p, q, r; exact for
    // points sampled on a circle.
    double twice_area = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    double denom = la * lb * lc;
    double kappa = denom > 0 ? 2.0 * twice_area / denom : 0.0;
    // Outward normal: left of travel is the positive (inner) side for a
    // counter-clockwise loop, so outward is the right-hand normal.
    Vec3 tangent = normalized(r - p);
    Vec3 outward{tangent.y, -tangent.x, 0};
    out.normal[i] = outward;
    out.mean_curvature[i] = outward * (-kappa);
  }
  return out;
}

CurvatureData curvature_triangles(const SurfaceMesh& mesh) {
  std::size_t nv = mesh.vertices.size();
  CurvatureData out;
  out.mean_curvature.assign(nv, Vec3{});
  out.normal.assign(nv, Vec3{});
  out.dual_area.assign(nv, 0.0);
  out.boundary.assign(nv, 0);

  if (mesh.open_allowed) {
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : mesh.triangles)
      for (int k = 0; k < 3; ++k) {
        int a = t[k], b = t[(k + 1) % 3];
        edge_count[{std::min(a, b), std::max(a, b)}]++;
      }
    for (const auto& [e, c] : edge_count)
      if (c == 1) {
        out.boundary[e.first] = 1;
        out.boundary[e.second] = 1;
      }
  }

  std::vector<Vec3> laplace(nv, Vec3{});
  for (const auto& t : mesh.triangles) {
    const Vec3& p0 = mesh.vertices[t[0]];
    const Vec3& p1 = mesh.vertices[t[1]];
    const Vec3& p2 = mesh.vertices[t[2]];
    Vec3 face_n = cross(p1 - p0, p2 - p0);
    double twice_area = norm(face_n);
    double a2 = norm2(p2 - p1), b2 = norm2(p0 - p2), c2 = norm2(p1 - p0);

    for (int k = 0; k < 3; ++k) out.normal[t[k]] += face_n * 0.5;

    if (twice_area <= 0) continue;
    // cot(angle at vertex i) = dot of adjacent edges / (2 * area)
    double cot0 = dot(p1 - p0, p2 - p0) / twice_area;
    double cot1 = dot(p0 - p1, p2 - p1) / twice_area;
    double cot2 = dot(p0 - p2, p1 - p2) / twice_area;

    laplace[t[0]] += (p1 - p0) * cot2 + (p2 - p0) * cot1;
    laplace[t[1]] += (p0 - p1) * cot2 + (p2 - p1) * cot0;
    laplace[t[2]] += (p0 - p2) * cot1 + (p1 - p2) * cot0;

    double tri_area = 0.5 * twice_area;
    bool obtuse = cot0 < 0 || cot1 < 0 || cot2 < 0;
    if (obtuse) {
      // Barycentric split keeps the weights positive and summing to area.
      for (int k = 0; k < 3; ++k) out.dual_area[t[k]] += tri_area / 3.0;
    } else {
      // Circumcentric (Voronoi) split, exact partition for acute triangles.
      out.dual_area[t[0]] += (b2 * cot1 + c2 * cot2) / 8.0;
      out.dual_area[t[1]] += (c2 * cot2 + a2 * cot0) / 8.0;
      out.dual_area[t[2]] += (a2 * cot0 + b2 * cot1) / 8.0;
    }
  }
  for (std::size_t i = 0; i < nv; ++i) {
    out.normal[i] = normalized(out.normal[i]);
    if (out.boundary[i]) continue;
    if (out.dual_area[i] > 0) out.mean_curvature[i] = laplace[i] / (2.0 * out.dual_area[i]);
  }
  // Boundary vertices keep H = 0; their dual areas still count toward the
  // total so the weights sum to the mesh area.
  return out;
}

}  // namespace

CurvatureData curvature(const SurfaceMesh& mesh) {
  validate(mesh, /*strict=*/true);
  if (!mesh.open_allowed && !is_closed(mesh))
    throw std::invalid_argument("curvature: mesh is open; pass open_allowed to accept boundaries");
  return mesh.dim == 2 ? curvature_polyline(mesh) : curvature_triangles(mesh);
}

}  // namespace shrinkflow
