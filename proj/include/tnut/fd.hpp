#pragma once

#include <Eigen/Dense>
#include <functional>

namespace tnut {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;
using CovectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using MatrixField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using MapField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Second-order central differences.
Eigen::VectorXd fd_gradient(const ScalarField& f, const Eigen::VectorXd& x, double h);
Eigen::MatrixXd fd_jacobian(const MapField& F, const Eigen::VectorXd& x, double h);

/// Richardson extrapolation of a second-order estimate: r(h), r(h/2) -> order 4.
inline double richardson2(double rh, double rh2) { return (4.0 * rh2 - rh) / 3.0; }
Eigen::MatrixXd richardson2(const Eigen::MatrixXd& rh, const Eigen::MatrixXd& rh2);

/// Matrix of the exterior derivative of a covector field: D - D^T with
/// D(k,l) = d_k beta_l, so (d beta)(X,Y) = X^T (D - D^T) Y.
Eigen::MatrixXd fd_exterior_of_one_form(const CovectorField& beta, const Eigen::VectorXd& x, double h);

/// Max |dW(e_i,e_j,e_k)| over coordinate triples for a 2-form field W,
/// dW(X,Y,Z) = X(W(Y,Z)) - Y(W(X,Z)) + Z(W(X,Y)).
double fd_three_form_residual(const MatrixField& W, const Eigen::VectorXd& x, double h);
double fd_three_form_residual_richardson(const MatrixField& W, const Eigen::VectorXd& x, double h);

/// Pullback of a 2-form through a map by finite-difference Jacobian:
/// J^T W(F(x)) J.
Eigen::MatrixXd fd_pullback_two_form(const MapField& F, const MatrixField& W,
                                     const Eigen::VectorXd& x, double h);

}  // namespace tnut
