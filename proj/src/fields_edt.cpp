#include <cmath>
#include <deque>
#include <stdexcept>

#include "shrinkflow/fields.hpp"

namespace shrinkflow {

namespace {

constexpr double kFar = 1e20;

// 1-d squared-distance lower envelope (Felzenszwalb-Huttenlocher).
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  v.resize(n);
  z.resize(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      int p = v[k];
      s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    int p = v[k];
    d[q] = (q - p) * static_cast<double>(q - p) + f[p];
  }
}

}  // namespace

std::vector<double> distance_to_seeds(const GridMeta& meta, const std::vector<uint8_t>& seeds) {
  meta.validate();
  if (seeds.size() != meta.node_count())
    throw std::invalid_argument("distance_to_seeds: seed array size mismatch");
  const int nx = meta.extents[0], ny = meta.extents[1], nz = meta.extents[2];
  std::vector<double> d2(meta.node_count());
  for (std::size_t i = 0; i < d2.size(); ++i) d2[i] = seeds[i] ? 0.0 : kFar;

  std::vector<int> v;
  std::vector<double> z;
  std::vector<double> line(std::max({nx, ny, nz})), out(std::max({nx, ny, nz}));

  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      std::size_t base = meta.index(0, j, k);
      edt_1d(&d2[base], out.data(), nx, v, z);
      std::copy(out.begin(), out.begin() + nx, d2.begin() + base);
    }
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) line[j] = d2[meta.index(i, j, k)];
      edt_1d(line.data(), out.data(), ny, v, z);
      for (int j = 0; j < ny; ++j) d2[meta.index(i, j, k)] = out[j];
    }
  if (nz > 1) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        for (int k = 0; k < nz; ++k) line[k] = d2[meta.index(i, j, k)];
        edt_1d(line.data(), out.data(), nz, v, z);
        for (int k = 0; k < nz; ++k) d2[meta.index(i, j, k)] = out[k];
      }
  }
  std::vector<double> dist(d2.size());
  for (std::size_t i = 0; i < dist.size(); ++i)
    dist[i] = d2[i] >= kFar ? kFar : std::sqrt(d2[i]) * meta.spacing;
  return dist;
}

std::vector<double> distance_to_interface(const GridField& field) {
  const GridMeta& m = field.meta;
  const int nx = m.extents[0], ny = m.extents[1], nz = m.extents[2];
  std::vector<uint8_t> seeds(m.node_count(), 0);
  auto sgn = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::size_t idx = m.index(i, j, k);
        int s = sgn(field.values[idx]);
        if (s == 0) {
          seeds[idx] = 1;
          continue;
        }
        bool cross = false;
        if (i + 1 < nx && sgn(field.values[m.index(i + 1, j, k)]) == -s) cross = true;
        if (!cross && i > 0 && sgn(field.values[m.index(i - 1, j, k)]) == -s) cross = true;
        if (!cross && j + 1 < ny && sgn(field.values[m.index(i, j + 1, k)]) == -s) cross = true;
        if (!cross && j > 0 && sgn(field.values[m.index(i, j - 1, k)]) == -s) cross = true;
        if (!cross && nz > 1) {
          if (k + 1 < nz && sgn(field.values[m.index(i, j, k + 1)]) == -s) cross = true;
          if (!cross && k > 0 && sgn(field.values[m.index(i, j, k - 1)]) == -s) cross = true;
        }
        if (cross) seeds[idx] = 1;
      }
  return distance_to_seeds(m, seeds);
}

ComponentSet flood_components(const GridField& field, const Vec3& center, double R) {
  const GridMeta& m = field.meta;
  m.validate();
  // The query ball must sit inside the grid.
  Vec3 glo = m.origin;
  Vec3 ghi = m.position(m.extents[0] - 1, m.extents[1] - 1, m.dim == 3 ? m.extents[2] - 1 : 0);
  for (int a = 0; a < m.dim; ++a)
    if (center[a] - R < glo[a] - 1e-12 || center[a] + R > ghi[a] + 1e-12)
      throw std::invalid_argument("flood_components: ball exceeds grid bounds");

  std::vector<double> interface_dist = distance_to_interface(field);

  ComponentSet comp;
  comp.meta = m;
  comp.center = center;
  comp.radius = R;
  comp.labels.assign(m.node_count(), -1);

  const int nx = m.extents[0], ny = m.extents[1], nz = m.extents[2];
  auto in_ball = [&](int i, int j, int k) { return norm(m.position(i, j, k) - center) <= R; };

  std::deque<std::array<int, 3>> queue;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::size_t idx = m.index(i, j, k);
        if (comp.labels[idx] >= 0) continue;
        double u = field.values[idx];
        if (u == 0 || !in_ball(i, j, k)) continue;
        int label = comp.count++;
        int8_t side = u > 0 ? 1 : -1;
        comp.side.push_back(side);
        comp.size.push_back(0);
        comp.inradius.push_back(0.0);
        comp.labels[idx] = label;
        queue.push_back({i, j, k});
        while (!queue.empty()) {
          auto [ci, cj, ck] = queue.front();
          queue.pop_front();
          std::size_t cidx = m.index(ci, cj, ck);
          comp.size[label]++;
          double clearance = std::min(interface_dist[cidx], R - norm(m.position(ci, cj, ck) - center));
          comp.inradius[label] = std::max(comp.inradius[label], clearance);
          const int di[6] = {1, -1, 0, 0, 0, 0};
          const int dj[6] = {0, 0, 1, -1, 0, 0};
          const int dk[6] = {0, 0, 0, 0, 1, -1};
          int nnb = nz > 1 ? 6 : 4;
          for (int t = 0; t < nnb; ++t) {
            int ii = ci + di[t], jj = cj + dj[t], kk = ck + dk[t];
            if (ii < 0 || jj < 0 || kk < 0 || ii >= nx || jj >= ny || kk >= nz) continue;
            std::size_t nidx = m.index(ii, jj, kk);
            if (comp.labels[nidx] >= 0) continue;
            double un = field.values[nidx];
            if (un == 0 || (un > 0) != (side > 0) || !in_ball(ii, jj, kk)) continue;
            comp.labels[nidx] = label;
            queue.push_back({ii, jj, kk});
          }
        }
      }
  return comp;
}

}  // namespace shrinkflow
