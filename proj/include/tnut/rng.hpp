#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cmath>

#include "tnut/cone.hpp"

namespace tnut {

inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based deterministic generator: every draw is a pure function of
/// (seed, stream, index, dim), so parallel sampling is reproducible
/// independent of thread count or evaluation order.
struct CounterRng {
  uint64_t key;

  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key(splitmix64(seed ^ splitmix64(stream * 0xda942042e4dd58b5ULL + 1))) {}

  double u01(uint64_t idx, uint32_t dim) const {
    const uint64_t v = splitmix64(key ^ splitmix64(idx * 0x9e3779b97f4a7c15ULL + dim + 1));
    return static_cast<double>(v >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on dims (2d, 2d+1).
  double gaussian(uint64_t idx, uint32_t dim) const {
    const uint32_t pair = dim / 2;
    double u1 = u01(idx, 2 * pair);
    const double u2 = u01(idx, 2 * pair + 1);
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    return (dim % 2 == 0) ? r * std::cos(th) : r * std::sin(th);
  }

  Eigen::VectorXd gaussian_vector(uint64_t idx, int dim, uint32_t dim_offset = 0) const {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gaussian(idx, dim_offset + i);
    return v;
  }

  Eigen::VectorXd unit_vector(uint64_t idx, int dim, uint32_t dim_offset = 0) const {
    Eigen::VectorXd v = gaussian_vector(idx, dim, dim_offset);
    double n = v.norm();
    uint32_t bump = 64;
    while (n < 1e-12) {  // astronomically rare; keep deterministic anyway
      v = gaussian_vector(idx, dim, dim_offset + bump);
      n = v.norm();
      bump += 64;
    }
    return v / n;
  }

  /// Uniform point in the unit ball.
  Eigen::VectorXd ball_vector(uint64_t idx, int dim) const {
    const Eigen::VectorXd u = unit_vector(idx, dim);
    const double r = std::pow(u01(idx, static_cast<uint32_t>(dim) + 7), 1.0 / dim);
    return r * u;
  }

  Quaternion unit_quaternion(uint64_t idx, uint32_t dim_offset = 0) const {
    const Eigen::VectorXd v = unit_vector(idx, 4, dim_offset);
    return Quaternion(v[0], v[1], v[2], v[3]);
  }

  /// Cone point with rho in [rho_min, rho_max], direction uniform on the sphere.
  ConePoint cone_point(uint64_t idx, int n, double rho_min = 0.5, double rho_max = 2.0) const {
    const Eigen::VectorXd dir = unit_vector(idx, 4 * n);
    const double rho = rho_min + (rho_max - rho_min) * u01(idx, static_cast<uint32_t>(4 * n) + 11);
    return ConePoint(rho * dir);
  }
};

}  // namespace tnut
