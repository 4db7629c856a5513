#pragma once

#include <Eigen/Dense>
#include <complex>

namespace tnut {

/// Top-degree coefficient (against e_0 ^ ... ^ e_{d-1}) of the wedge power
/// W^{^power} of a 2-form with matrix W, w(X,Y) = X^T W Y; requires
/// 2 * power == d.
std::complex<double> top_wedge_power(const Eigen::MatrixXcd& W, int power);

/// Top coefficient of A^{^n} ^ conj(A)^{^n} for a complex 2-form A on R^{4n}.
std::complex<double> top_omega_pair(const Eigen::MatrixXcd& A, int n);

}  // namespace tnut
