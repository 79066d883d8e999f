#include "fsflow/chebyshev.hpp"

#include <cmath>
#include <numbers>

namespace fsflow::cheb {

namespace {
constexpr double pi = std::numbers::pi;

// Standard points cos(pi j / M) on [-1, 1].
double ref_node(int j, int m) { return std::cos(pi * j / m); }
}  // namespace

std::vector<double> nodes(int n) {
  const int m = n - 1;
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = 0.5 * (ref_node(j, m) - 1.0);
  x[0] = 0.0;
  x[m] = -1.0;
  return x;
}

Eigen::MatrixXd diff_matrix(int n) {
  const int m = n - 1;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  auto c = [m](int j) { return (j == 0 || j == m) ? 2.0 : 1.0; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      // x_i - x_j via the product form keeps full relative accuracy.
      const double diff = -2.0 * std::sin(pi * (i + j) / (2.0 * m)) * std::sin(pi * (i - j) / (2.0 * m));
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = c(i) / c(j) * sign / diff;
    }
    d(i, i) = -d.row(i).sum();
  }
  // d/dx3 = 2 d/dy for x3 = (y - 1) / 2.
  return 2.0 * d;
}

std::vector<double> cc_weights(int n) {
  const int m = n - 1;
  std::vector<double> w(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double theta = pi * j / m;
    double s = 0.0;
    for (int k = 1; k <= m / 2; ++k) {
      const double b = (2 * k == m) ? 1.0 : 2.0;
      s += b / (4.0 * k * k - 1.0) * std::cos(2.0 * k * theta);
    }
    const double c = (j == 0 || j == m) ? 1.0 : 2.0;
    w[j] = c / m * (1.0 - s);
  }
  // Interval length 1 instead of 2.
  for (double& v : w) v *= 0.5;
  return w;
}

Eigen::MatrixXd interior_extension(int n) {
  const int m = n - 1;
  const std::vector<double> x = nodes(n);
  // Interior nodes are the zeros of U_{M-1}; barycentric weights
  // (-1)^j sin^2(theta_j).
  std::vector<double> bw(n, 0.0);
  for (int j = 1; j < m; ++j) bw[j] = ((j % 2 == 0) ? 1.0 : -1.0) * std::pow(std::sin(pi * j / m), 2);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n - 2);
  for (int i = 0; i < n; ++i) {
    if (i > 0 && i < m) {
      e(i, i - 1) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 1; j < m; ++j) denom += bw[j] / (x[i] - x[j]);
    for (int j = 1; j < m; ++j) e(i, j - 1) = bw[j] / (x[i] - x[j]) / denom;
  }
  return e;
}

namespace {
template <typename Vec>
Vec coefficients_impl(const Vec& f) {
  const int n = static_cast<int>(f.size());
  const int m = n - 1;
  Vec c = Vec::Zero(n);
  for (int k = 0; k <= m; ++k) {
    typename Vec::Scalar s(0);
    for (int j = 0; j <= m; ++j) {
      const double wj = (j == 0 || j == m) ? 0.5 : 1.0;
      s += wj * f(j) * std::cos(pi * j * k / m);
    }
    const double ck = (k == 0 || k == m) ? 1.0 : 2.0;
    c(k) = s * (ck / m);
  }
  return c;
}
}  // namespace

Eigen::VectorXd coefficients(const Eigen::VectorXd& values) { return coefficients_impl(values); }
Eigen::VectorXcd coefficients(const Eigen::VectorXcd& values) { return coefficients_impl(values); }

Eigen::MatrixXd interpolation_matrix(int n, const std::vector<double>& points) {
  const int m = n - 1;
  const std::vector<double> x = nodes(n);
  std::vector<double> bw(n);
  for (int j = 0; j < n; ++j) {
    bw[j] = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == m) ? 0.5 : 1.0);
  }
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double xp = points[p];
    int exact = -1;
    for (int j = 0; j < n; ++j) {
      if (xp == x[j]) exact = j;
    }
    if (exact >= 0) {
      e(static_cast<Eigen::Index>(p), exact) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < n; ++j) denom += bw[j] / (xp - x[j]);
    for (int j = 0; j < n; ++j) e(static_cast<Eigen::Index>(p), j) = bw[j] / (xp - x[j]) / denom;
  }
  return e;
}

}  // namespace fsflow::cheb
