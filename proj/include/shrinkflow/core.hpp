#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace shrinkflow {

// Ambient points live in R^2 or R^3; planar data keeps z = 0.
struct Vec3 {
  double x = 0, y = 0, z = 0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  return n > 0 ? v / n : Vec3{0, 0, 0};
}

inline double sq(double v) { return v * v; }

constexpr double kPi = 3.14159265358979323846;

// Surface area of the unit n-sphere in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
inline double unit_sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("unit_sphere_area: n must be >= 1");
  double half = 0.5 * (n + 1);
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

// Worker cap from SHRINKFLOW_THREADS; defaults to hardware concurrency.
inline int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SHRINKFLOW_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min(v, hw);
  }
  return hw;
}

// Chunked parallel loop. Chunk boundaries are fixed (kReduceBlock) so any
// reduction built on top is independent of the worker count.
constexpr std::size_t kReduceBlock = 4096;

template <class Fn>
void parallel_for_blocks(std::size_t n, Fn&& body) {
  if (n == 0) return;
  std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  int workers = std::min<std::size_t>(thread_count(), nblocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b)
      body(b, b * kReduceBlock, std::min(n, (b + 1) * kReduceBlock));
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < nblocks; b += workers)
        body(b, b * kReduceBlock, std::min(n, (b + 1) * kReduceBlock));
    });
  }
  for (auto& t : pool) t.join();
}

// Deterministic sum of f(i) for i in [0, n): per-block partials folded in
// index order, so the result does not depend on the worker count.
template <class Fn>
double block_reduce(std::size_t n, Fn&& f) {
  if (n == 0) return 0.0;
  std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(nblocks, 0.0);
  parallel_for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace shrinkflow
