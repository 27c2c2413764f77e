#include <cmath>
#include <stdexcept>

#include "shrinkflow/fields.hpp"

namespace shrinkflow {

GridField mollify_indicator(const VoxelSet& set, double eps) {
  const GridMeta& m = set.meta;
  m.validate();
  if (set.indicator.size() != m.node_count())
    throw std::invalid_argument("mollify_indicator: indicator size mismatch");
  const double h = m.spacing;
  if (eps < 2.0 * h)
    throw std::invalid_argument("mollify_indicator: eps < 2h, mollifier under-resolved");

  const int nx = m.extents[0], ny = m.extents[1], nz = m.extents[2];
  const int rad = static_cast<int>(std::ceil(eps / h));

  // Support must stay a full kernel radius away from the grid boundary or
  // kernel mass escapes and the smoothing stops being mass-preserving.
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (!set.indicator[m.index(i, j, k)]) continue;
        bool deep = i >= rad && i < nx - rad && j >= rad && j < ny - rad;
        if (nz > 1) deep = deep && k >= rad && k < nz - rad;
        if (!deep)
          throw std::invalid_argument(
              "mollify_indicator: indicator support closer than eps to the grid boundary");
      }

  // Discretely normalised compact bump (1 - |x/eps|^2)^4.
  std::vector<std::array<int, 3>> taps;
  std::vector<double> weights;
  double wsum = 0;
  const int krad_z = nz > 1 ? rad : 0;
  for (int dk = -krad_z; dk <= krad_z; ++dk)
    for (int dj = -rad; dj <= rad; ++dj)
      for (int di = -rad; di <= rad; ++di) {
        double r2 = (sq(di) + sq(dj) + sq(dk)) * h * h / (eps * eps);
        if (r2 >= 1.0) continue;
        double w = sq(sq(1.0 - r2));
        taps.push_back({di, dj, dk});
        weights.push_back(w);
        wsum += w;
      }
  for (double& w : weights) w /= wsum;

  GridField out;
  out.meta = m;
  out.values.assign(m.node_count(), -0.5);

  // Nodes farther than the kernel radius from the indicator boundary take
  // the constant value exactly; only the boundary band needs convolution.
  std::vector<uint8_t> boundary(m.node_count(), 0);
  bool any_support = false;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::size_t idx = m.index(i, j, k);
        uint8_t a = set.indicator[idx];
        if (a) any_support = true;
        auto differs = [&](int ii, int jj, int kk) {
          if (ii < 0 || jj < 0 || kk < 0 || ii >= nx || jj >= ny || kk >= nz) return a != 0;
          return set.indicator[m.index(ii, jj, kk)] != a;
        };
        if (differs(i + 1, j, k) || differs(i - 1, j, k) || differs(i, j + 1, k) ||
            differs(i, j - 1, k) || (nz > 1 && (differs(i, j, k + 1) || differs(i, j, k - 1))))
          boundary[idx] = 1;
      }
  if (!any_support) return out;  // empty set mollifies to the constant -1/2

  std::vector<double> bdist = distance_to_seeds(m, boundary);
  const double band = eps + 2.0 * h;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::size_t idx = m.index(i, j, k);
        if (bdist[idx] > band) {
          out.values[idx] = set.indicator[idx] ? 0.5 : -0.5;
          continue;
        }
        double acc = 0;
        for (std::size_t t = 0; t < taps.size(); ++t) {
          int ii = i + taps[t][0], jj = j + taps[t][1], kk = k + taps[t][2];
          if (ii < 0 || jj < 0 || kk < 0 || ii >= nx || jj >= ny || kk >= nz) continue;
          if (set.indicator[m.index(ii, jj, kk)]) acc += weights[t];
        }
        out.values[idx] = acc - 0.5;
      }
  return out;
}

double perimeter(const VoxelSet& set, double eps) {
  GridField smooth = mollify_indicator(set, eps);
  return area(extract_interface(smooth, 0.0));
}

}  // namespace shrinkflow
