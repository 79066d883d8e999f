#pragma once
// Closed-form test fields and brute-force quadrature, independent of the
// library's transforms and collocation matrices.
//
// A field is a sum of terms a * cos(k1 x1 + k2 x2 + phase) * P(x3) * exp(kappa x3)
// with integer wavenumber indices (k_i = 2 pi m_i / L_i). All partial
// derivatives are evaluated in closed form.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

constexpr double pi = std::numbers::pi;

struct Term {
  double amp = 1.0;
  int m1 = 0;
  int m2 = 0;
  double phase = 0.0;
  std::vector<double> poly{1.0};  // coefficients in x3, lowest first
  double kappa = 0.0;
};

struct Field {
  double L1 = 1.0;
  double L2 = 1.0;
  std::vector<Term> terms;

  // d1^a d2^b d3^c at (x1, x2, x3).
  double eval(double x1, double x2, double x3, int a = 0, int b = 0, int c = 0) const {
    double s = 0.0;
    for (const Term& t : terms) {
      const double k1 = 2 * pi * t.m1 / L1;
      const double k2 = 2 * pi * t.m2 / L2;
      const double th = k1 * x1 + k2 * x2 + t.phase + (a + b) * pi / 2;
      const double horiz = t.amp * std::pow(k1, a) * std::pow(k2, b) * std::cos(th);
      if (horiz == 0.0) continue;
      // (P e^{kx})^{(c)} = Q e^{kx}, Q built by Q <- Q' + kappa Q.
      std::vector<double> q = t.poly;
      for (int r = 0; r < c; ++r) {
        std::vector<double> nq(q.size(), 0.0);
        for (std::size_t i = 0; i < q.size(); ++i) {
          nq[i] += t.kappa * q[i];
          if (i > 0) nq[i - 1] += static_cast<double>(i) * q[i];
        }
        q = nq;
      }
      double pv = 0.0;
      for (std::size_t i = q.size(); i-- > 0;) pv = pv * x3 + q[i];
      s += horiz * pv * std::exp(t.kappa * x3);
    }
    return s;
  }
};

// Harmonic extension of a surface field made of kappa = 0, poly = {1} terms.
inline Field harmonic_extension(const Field& eta) {
  Field out = eta;
  for (Term& t : out.terms) {
    const double a = t.m1 / eta.L1;
    const double b = t.m2 / eta.L2;
    t.kappa = 2 * pi * std::sqrt(a * a + b * b);
  }
  return out;
}

// Random smooth field: a few low modes times low-degree polynomials in x3.
inline Field random_field(std::mt19937_64& rng, double L1, double L2, int max_mode = 2, int degree = 3,
                          int n_terms = 4, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> mode(-max_mode, max_mode);
  std::uniform_real_distribution<double> ph(0.0, 2 * pi);
  Field f{L1, L2, {}};
  for (int i = 0; i < n_terms; ++i) {
    Term t;
    t.amp = scale * u(rng);
    t.m1 = mode(rng);
    t.m2 = mode(rng);
    t.phase = ph(rng);
    t.poly.resize(degree + 1);
    for (double& c : t.poly) c = u(rng);
    f.terms.push_back(t);
  }
  return f;
}

// Gauss-Legendre rule on [-1, 0] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (z - 1.0);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

// Tensor-product rule on Sigma x [-1, 0]: trapezoid (exact for trig
// polynomials of degree < nh) horizontally, Gauss-Legendre vertically.
struct Quadrature {
  double L1, L2;
  int nh1, nh2;
  std::vector<double> z, wz;

  Quadrature(double l1, double l2, int horizontal = 48, int vertical = 40) : L1(l1), L2(l2), nh1(horizontal), nh2(horizontal) {
    gauss_legendre(vertical, z, wz);
  }

  template <class F>
  double volume(F f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      double plane = 0.0;
      for (int i = 0; i < nh1; ++i)
        for (int j = 0; j < nh2; ++j) plane += f(L1 * i / nh1, L2 * j / nh2, z[k]);
      s += wz[k] * plane;
    }
    return s * L1 * L2 / (nh1 * nh2);
  }

  template <class F>
  double surface(F f) const {
    double s = 0.0;
    for (int i = 0; i < nh1; ++i)
      for (int j = 0; j < nh2; ++j) s += f(L1 * i / nh1, L2 * j / nh2);
    return s * L1 * L2 / (nh1 * nh2);
  }
};

// Volume H^k norm squared by brute force over all multi-indices.
inline double volume_hk_sq(const Field& f, int k, const Quadrature& q) {
  double s = 0.0;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; a + b <= k; ++b)
      for (int c = 0; a + b + c <= k; ++c)
        s += q.volume([&](double x, double y, double z) {
          const double v = f.eval(x, y, z, a, b, c);
          return v * v;
        });
  return s;
}

}  // namespace oracle
