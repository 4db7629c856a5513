#include "tnut/exterior.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

namespace tnut {

namespace {

// dense multivector over basis bitmasks; only entries of one degree are used
using Multi = std::vector<std::complex<double>>;

int merge_sign(unsigned a, unsigned b) {
  // sign of e_a ^ e_b with both index sets sorted ascending: count inversions
  int inv = 0;
  for (unsigned bits = b; bits;) {
    const int t = std::countr_zero(bits);
    bits &= bits - 1;
    inv += std::popcount(a >> (t + 1));
  }
  return (inv % 2 == 0) ? 1 : -1;
}

Multi wedge_with_two_form(const Multi& cur, const Eigen::MatrixXcd& W, int dim) {
  Multi out(size_t(1) << dim, std::complex<double>(0, 0));
  for (unsigned mask = 0; mask < cur.size(); ++mask) {
    const std::complex<double> c = cur[mask];
    if (c == std::complex<double>(0, 0)) continue;
    for (int p = 0; p < dim; ++p)
      for (int q = p + 1; q < dim; ++q) {
        const std::complex<double> w = W(p, q);
        if (w == std::complex<double>(0, 0)) continue;
        const unsigned pq = (1u << p) | (1u << q);
        if (mask & pq) continue;
        out[mask | pq] += c * w * double(merge_sign(mask, pq));
      }
  }
  return out;
}

}  // namespace

std::complex<double> top_wedge_power(const Eigen::MatrixXcd& W, int power) {
  const int dim = static_cast<int>(W.rows());
  if (2 * power != dim) throw std::invalid_argument("top_wedge_power: 2*power must equal dim");
  if (dim > 16) throw std::invalid_argument("top_wedge_power: dimension too large");
  Multi cur(size_t(1) << dim, std::complex<double>(0, 0));
  cur[0] = 1.0;
  for (int k = 0; k < power; ++k) cur = wedge_with_two_form(cur, W, dim);
  return cur[(size_t(1) << dim) - 1];
}

std::complex<double> top_omega_pair(const Eigen::MatrixXcd& A, int n) {
  const int dim = static_cast<int>(A.rows());
  if (dim != 4 * n) throw std::invalid_argument("top_omega_pair: dim must be 4n");
  if (dim > 16) throw std::invalid_argument("top_omega_pair: dimension too large");
  Multi cur(size_t(1) << dim, std::complex<double>(0, 0));
  cur[0] = 1.0;
  for (int k = 0; k < n; ++k) cur = wedge_with_two_form(cur, A, dim);
  const Eigen::MatrixXcd Ac = A.conjugate();
  for (int k = 0; k < n; ++k) cur = wedge_with_two_form(cur, Ac, dim);
  return cur[(size_t(1) << dim) - 1];
}

}  // namespace tnut
