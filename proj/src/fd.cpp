#include "tnut/fd.hpp"

namespace tnut {

Eigen::VectorXd fd_gradient(const ScalarField& f, const Eigen::VectorXd& x, double h) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd g(d);
  Eigen::VectorXd xp = x, xm = x;
  for (int k = 0; k < d; ++k) {
    xp[k] += h;
    xm[k] -= h;
    g[k] = (f(xp) - f(xm)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return g;
}

Eigen::MatrixXd fd_jacobian(const MapField& F, const Eigen::VectorXd& x, double h) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd xp = x, xm = x;
  Eigen::MatrixXd J;
  for (int k = 0; k < d; ++k) {
    xp[k] += h;
    xm[k] -= h;
    const Eigen::VectorXd col = (F(xp) - F(xm)) / (2.0 * h);
    if (J.size() == 0) J.resize(col.size(), d);
    J.col(k) = col;
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return J;
}

Eigen::MatrixXd richardson2(const Eigen::MatrixXd& rh, const Eigen::MatrixXd& rh2) {
  return (4.0 * rh2 - rh) / 3.0;
}

Eigen::MatrixXd fd_exterior_of_one_form(const CovectorField& beta, const Eigen::VectorXd& x, double h) {
  const int d = static_cast<int>(x.size());
  Eigen::MatrixXd D(d, d);
  Eigen::VectorXd xp = x, xm = x;
  for (int k = 0; k < d; ++k) {
    xp[k] += h;
    xm[k] -= h;
    D.row(k) = ((beta(xp) - beta(xm)) / (2.0 * h)).transpose();
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return D - D.transpose();
}

double fd_three_form_residual(const MatrixField& W, const Eigen::VectorXd& x, double h) {
  const int d = static_cast<int>(x.size());
  // partials dW[k] = d_k W
  std::vector<Eigen::MatrixXd> dW(d);
  Eigen::VectorXd xp = x, xm = x;
  for (int k = 0; k < d; ++k) {
    xp[k] += h;
    xm[k] -= h;
    dW[k] = (W(xp) - W(xm)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        const double v = dW[i](j, k) - dW[j](i, k) + dW[k](i, j);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

double fd_three_form_residual_richardson(const MatrixField& W, const Eigen::VectorXd& x, double h) {
  const int d = static_cast<int>(x.size());
  auto partials = [&](double step) {
    std::vector<Eigen::MatrixXd> dW(d);
    Eigen::VectorXd xp = x, xm = x;
    for (int k = 0; k < d; ++k) {
      xp[k] += step;
      xm[k] -= step;
      dW[k] = (W(xp) - W(xm)) / (2.0 * step);
      xp[k] = x[k];
      xm[k] = x[k];
    }
    return dW;
  };
  const auto d1 = partials(h);
  const auto d2 = partials(0.5 * h);
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        const double v1 = d1[i](j, k) - d1[j](i, k) + d1[k](i, j);
        const double v2 = d2[i](j, k) - d2[j](i, k) + d2[k](i, j);
        worst = std::max(worst, std::abs(richardson2(v1, v2)));
      }
  return worst;
}

Eigen::MatrixXd fd_pullback_two_form(const MapField& F, const MatrixField& W,
                                     const Eigen::VectorXd& x, double h) {
  const Eigen::MatrixXd J = fd_jacobian(F, x, h);
  return J.transpose() * W(F(x)) * J;
}

}  // namespace tnut
