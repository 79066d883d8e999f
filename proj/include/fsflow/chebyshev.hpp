#pragma once
// Chebyshev-Gauss-Lobatto collocation on the vertical interval [-1, 0].
//
// Node j sits at x_j = (cos(pi j / M) - 1) / 2 with M = n - 1, so node 0 is
// the free surface x3 = 0 and node M is the bottom x3 = -1.

#include <Eigen/Dense>
#include <vector>

namespace fsflow::cheb {

std::vector<double> nodes(int n);

// First-derivative collocation matrix with respect to x3 (exact for
// polynomials of degree < n).
Eigen::MatrixXd diff_matrix(int n);

// Clenshaw-Curtis weights on [-1, 0] for the collocation nodes.
std::vector<double> cc_weights(int n);

// Maps values of a polynomial of degree <= n - 3 given at the n - 2 interior
// nodes to its values at all n nodes.
Eigen::MatrixXd interior_extension(int n);

// Chebyshev coefficients c_k of the interpolant: f(x) = sum_k c_k T_k(2x+1).
Eigen::VectorXd coefficients(const Eigen::VectorXd& values);
Eigen::VectorXcd coefficients(const Eigen::VectorXcd& values);

// Evaluation matrix of the degree n - 1 interpolant at arbitrary points in
// [-1, 0].
Eigen::MatrixXd interpolation_matrix(int n, const std::vector<double>& points);

}  // namespace fsflow::cheb
