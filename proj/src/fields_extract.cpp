#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "shrinkflow/fields.hpp"

namespace shrinkflow {

namespace {

struct EdgeKey {
  std::size_t a, b;  // global node indices, a < b
  bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const {
    return std::hash<std::size_t>()(k.a * 1000003u ^ k.b);
  }
};

// Crossing points are interpolated once per grid edge and shared by all
// incident cells/tets, which makes the output watertight by construction.
class CrossingPool {
 public:
  explicit CrossingPool(double iso) : iso_(iso) {}

  int get(std::size_t na, std::size_t nb, const Vec3& pa, const Vec3& pb, double fa, double fb,
          std::vector<Vec3>& verts) {
    EdgeKey key{std::min(na, nb), std::max(na, nb)};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    // Interpolate from the lower node index so shared edges agree bitwise.
    if (na > nb) return insert(key, pb, pa, fb, fa, verts);
    return insert(key, pa, pb, fa, fb, verts);
  }

 private:
  int insert(const EdgeKey& key, const Vec3& pa, const Vec3& pb, double fa, double fb,
             std::vector<Vec3>& verts) {
    double t = (fa - iso_) / (fa - fb);
    t = std::clamp(t, 1e-6, 1.0 - 1e-6);  // keeps elements non-degenerate
    verts.push_back(pa + (pb - pa) * t);
    int id = static_cast<int>(verts.size()) - 1;
    cache_.emplace(key, id);
    return id;
  }

  double iso_;
  std::unordered_map<EdgeKey, int, EdgeKeyHash> cache_;
};

double pick_iso(const GridField& field, double iso) {
  // No node may sit exactly on the level; nudge the level if one does.
  const double eps = 1e-9 * field.meta.spacing;
  for (int attempt = 0; attempt < 64; ++attempt) {
    bool hit = false;
    for (double v : field.values)
      if (v == iso) {
        hit = true;
        break;
      }
    if (!hit) return iso;
    iso += eps;
  }
  throw std::runtime_error("extract_interface: could not find a regular iso value");
}

SurfaceMesh extract_2d(const GridField& field, double iso) {
  const GridMeta& m = field.meta;
  SurfaceMesh mesh;
  mesh.dim = 2;
  CrossingPool pool(iso);

  auto inside = [&](double v) { return v > iso; };
  for (int j = 0; j + 1 < m.extents[1]; ++j)
    for (int i = 0; i + 1 < m.extents[0]; ++i) {
      std::size_t n0 = m.index(i, j, 0), n1 = m.index(i + 1, j, 0);
      std::size_t n2 = m.index(i + 1, j + 1, 0), n3 = m.index(i, j + 1, 0);
      double f0 = field.values[n0], f1 = field.values[n1];
      double f2 = field.values[n2], f3 = field.values[n3];
      int mask = (inside(f0) ? 1 : 0) | (inside(f1) ? 2 : 0) | (inside(f2) ? 4 : 0) |
                 (inside(f3) ? 8 : 0);
      if (mask == 0 || mask == 15) continue;

      Vec3 p0 = m.position(i, j, 0), p1 = m.position(i + 1, j, 0);
      Vec3 p2 = m.position(i + 1, j + 1, 0), p3 = m.position(i, j + 1, 0);
      auto cross_pt = [&](std::size_t na, std::size_t nb, const Vec3& pa, const Vec3& pb,
                          double fa, double fb) {
        return pool.get(na, nb, pa, pb, fa, fb, mesh.vertices);
      };
      int e_bottom = -1, e_right = -1, e_top = -1, e_left = -1;
      if (inside(f0) != inside(f1)) e_bottom = cross_pt(n0, n1, p0, p1, f0, f1);
      if (inside(f1) != inside(f2)) e_right = cross_pt(n1, n2, p1, p2, f1, f2);
      if (inside(f2) != inside(f3)) e_top = cross_pt(n2, n3, p2, p3, f2, f3);
      if (inside(f3) != inside(f0)) e_left = cross_pt(n3, n0, p3, p0, f3, f0);

      // Oriented so the inside (u > iso) lies to the left of travel.
      auto emit = [&](int pa, int pb) { mesh.segments.push_back({pa, pb}); };
      switch (mask) {
        case 1: emit(e_bottom, e_left); break;
        case 2: emit(e_right, e_bottom); break;
        case 3: emit(e_right, e_left); break;
        case 4: emit(e_top, e_right); break;
        case 6: emit(e_top, e_bottom); break;
        case 7: emit(e_top, e_left); break;
        case 8: emit(e_left, e_top); break;
        case 9: emit(e_bottom, e_top); break;
        case 11: emit(e_right, e_top); break;
        case 12: emit(e_left, e_right); break;
        case 13: emit(e_bottom, e_right); break;
        case 14: emit(e_left, e_bottom); break;
        case 5: {
          // Ambiguous saddle; connect by the sign of the bilinear centre value.
          double saddle = (f0 * f2 - f1 * f3) / (f0 + f2 - f1 - f3);
          if (saddle > iso) {
            emit(e_bottom, e_right);
            emit(e_top, e_left);
          } else {
            emit(e_bottom, e_left);
            emit(e_top, e_right);
          }
          break;
        }
        case 10: {
          double saddle = (f0 * f2 - f1 * f3) / (f0 + f2 - f1 - f3);
          if (saddle > iso) {
            emit(e_right, e_top);
            emit(e_left, e_bottom);
          } else {
            emit(e_right, e_bottom);
            emit(e_left, e_top);
          }
          break;
        }
        default: break;
      }
    }
  return mesh;
}

// Freudenthal 6-tet split of each cube; neighbouring cubes induce the same
// diagonal on shared faces, so the triangulation is conforming.
constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                             {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};

SurfaceMesh extract_3d(const GridField& field, double iso) {
  const GridMeta& m = field.meta;
  SurfaceMesh mesh;
  mesh.dim = 3;
  CrossingPool pool(iso);

  auto inside = [&](double v) { return v > iso; };
  std::size_t corner_idx[8];
  Vec3 corner_pos[8];
  double corner_val[8];

  for (int k = 0; k + 1 < m.extents[2]; ++k)
    for (int j = 0; j + 1 < m.extents[1]; ++j)
      for (int i = 0; i + 1 < m.extents[0]; ++i) {
        bool any_in = false, any_out = false;
        for (int c = 0; c < 8; ++c) {
          int ci = i + (c & 1), cj = j + ((c >> 1) & 1), ck = k + ((c >> 2) & 1);
          corner_idx[c] = m.index(ci, cj, ck);
          corner_val[c] = field.values[corner_idx[c]];
          (inside(corner_val[c]) ? any_in : any_out) = true;
        }
        if (!any_in || !any_out) continue;
        for (int c = 0; c < 8; ++c) {
          int ci = i + (c & 1), cj = j + ((c >> 1) & 1), ck = k + ((c >> 2) & 1);
          corner_pos[c] = m.position(ci, cj, ck);
        }

        for (const auto& tet : kTets) {
          int mask = 0;
          for (int v = 0; v < 4; ++v)
            if (inside(corner_val[tet[v]])) mask |= 1 << v;
          if (mask == 0 || mask == 15) continue;

          auto cross_pt = [&](int va, int vb) {
            int a = tet[va], b = tet[vb];
            return pool.get(corner_idx[a], corner_idx[b], corner_pos[a], corner_pos[b],
                            corner_val[a], corner_val[b], mesh.vertices);
          };
          auto emit = [&](int q0, int q1, int q2, int inside_corner) {
            // Wind so the normal points from the inside (u > iso) outward.
            const Vec3& a = mesh.vertices[q0];
            const Vec3& b = mesh.vertices[q1];
            const Vec3& c = mesh.vertices[q2];
            Vec3 nrm = cross(b - a, c - a);
            Vec3 to_inside = corner_pos[tet[inside_corner]] - (a + b + c) / 3.0;
            if (dot(nrm, to_inside) > 0)
              mesh.triangles.push_back({q0, q2, q1});
            else
              mesh.triangles.push_back({q0, q1, q2});
          };

          int pos[4], neg[4], np = 0, nn = 0;
          for (int v = 0; v < 4; ++v)
            (mask & (1 << v)) ? pos[np++] = v : neg[nn++] = v;

          if (np == 1) {
            emit(cross_pt(pos[0], neg[0]), cross_pt(pos[0], neg[1]), cross_pt(pos[0], neg[2]),
                 pos[0]);
          } else if (np == 3) {
            emit(cross_pt(neg[0], pos[0]), cross_pt(neg[0], pos[1]), cross_pt(neg[0], pos[2]),
                 pos[0]);
          } else {
            int q00 = cross_pt(pos[0], neg[0]);
            int q01 = cross_pt(pos[0], neg[1]);
            int q11 = cross_pt(pos[1], neg[1]);
            int q10 = cross_pt(pos[1], neg[0]);
            emit(q00, q01, q11, pos[0]);
            emit(q00, q11, q10, pos[0]);
          }
        }
      }
  return mesh;
}

}  // namespace

SurfaceMesh extract_interface(const GridField& field, double iso) {
  field.meta.validate();
  for (double v : field.values)
    if (!std::isfinite(v)) throw std::invalid_argument("extract_interface: non-finite field value");
  double level = pick_iso(field, iso);
  SurfaceMesh mesh = field.meta.dim == 2 ? extract_2d(field, level) : extract_3d(field, level);
  mesh.open_allowed = true;  // interfaces may leave through the grid boundary
  return mesh;
}

}  // namespace shrinkflow
