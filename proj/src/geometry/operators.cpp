#include <cassert>

#include "fsflow/geometry.hpp"
#include "fsflow/simd.hpp"
#include "fsflow/spectral.hpp"

namespace fsflow {

VectorField grad(const VolumeField& f) { return {deriv_horizontal(f, 0), deriv_horizontal(f, 1), deriv_vertical(f)}; }

VolumeField div(const VectorField& X) {
  VolumeField out = deriv_horizontal(X[0], 0);
  out += deriv_horizontal(X[1], 1);
  out += deriv_vertical(X[2]);
  return out;
}

TensorField sym_grad(const VectorField& u) {
  std::array<VectorField, 3> du;  // du[j][i] = d_i u_j
  for (int j = 0; j < 3; ++j) du[j] = grad(u[j]);
  TensorField out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = du[j][i] + du[i][j];
  return out;
}

VectorField div_tensor(const TensorField& T) {
  VectorField out;
  for (int i = 0; i < 3; ++i) {
    out[i] = deriv_horizontal(T[i][0], 0);
    out[i] += deriv_horizontal(T[i][1], 1);
    out[i] += deriv_vertical(T[i][2]);
  }
  return out;
}

VectorField laplacian(const VectorField& u) {
  VectorField out;
  for (int i = 0; i < 3; ++i) out[i] = div(grad(u[i]));
  return out;
}

namespace {

Values d3_values(const VolumeField& f) { return deriv_vertical(f).physical(); }

// sum_j c_j * x_j on the physical grid.
Values contract(const ColumnMatrix& m, const std::array<Values, 3>& x) {
  const auto& k = simd::kernels();
  Values out(x[0].size());
  k.mul(m.col[0].data(), x[0].data(), out.data(), out.size());
  k.mul_add(m.col[1].data(), x[1].data(), out.data(), out.size());
  k.mul_add(m.col[2].data(), x[2].data(), out.data(), out.size());
  return out;
}

}  // namespace

VectorField grad_col(const VolumeField& f, const ColumnMatrix& m, bool truncate) {
  assert(m.diag == 0.0);
  const Values d3 = d3_values(f);
  VectorField out;
  Values tmp(d3.size());
  for (int i = 0; i < 3; ++i) {
    simd::kernels().mul(m.col[i].data(), d3.data(), tmp.data(), tmp.size());
    out[i] = from_values(f.grid(), tmp, truncate);
  }
  return out;
}

VolumeField div_col(const VectorField& X, const ColumnMatrix& m, bool truncate) {
  assert(m.diag == 0.0);
  const std::array<Values, 3> d3 = {d3_values(X[0]), d3_values(X[1]), d3_values(X[2])};
  return from_values(X[0].grid(), contract(m, d3), truncate);
}

TensorField sym_grad_col(const VectorField& u, const ColumnMatrix& m, bool truncate) {
  assert(m.diag == 0.0);
  const std::array<Values, 3> d3 = {d3_values(u[0]), d3_values(u[1]), d3_values(u[2])};
  const auto& k = simd::kernels();
  TensorField out;
  Values tmp(d3[0].size());
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      k.mul(m.col[i].data(), d3[j].data(), tmp.data(), tmp.size());
      k.mul_add(m.col[j].data(), d3[i].data(), tmp.data(), tmp.size());
      out[i][j] = from_values(u[0].grid(), tmp, truncate);
      if (j != i) out[j][i] = out[i][j];
    }
  }
  return out;
}

VectorField div_tensor_col(const TensorField& T, const ColumnMatrix& m, bool truncate) {
  assert(m.diag == 0.0);
  VectorField out;
  for (int i = 0; i < 3; ++i) {
    const std::array<Values, 3> d3 = {d3_values(T[i][0]), d3_values(T[i][1]), d3_values(T[i][2])};
    out[i] = from_values(T[0][0].grid(), contract(m, d3), truncate);
  }
  return out;
}

VectorField grad_A(const VolumeField& f, const GeometryCache& g) {
  require_same_grid(f.grid(), g.grid, "grad_A");
  VectorField out = grad(f);
  const VectorField q = grad_col(f, g.I_minus_A, g.dealias());
  for (int i = 0; i < 3; ++i) out[i] -= q[i];
  return out;
}

VolumeField div_A(const VectorField& X, const GeometryCache& g) {
  require_same_grid(X[0].grid(), g.grid, "div_A");
  VolumeField out = div(X);
  out -= div_col(X, g.I_minus_A, g.dealias());
  return out;
}

TensorField sym_grad_A(const VectorField& u, const GeometryCache& g) {
  require_same_grid(u[0].grid(), g.grid, "sym_grad_A");
  TensorField out = sym_grad(u);
  const TensorField q = sym_grad_col(u, g.I_minus_A, g.dealias());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] -= q[i][j];
  return out;
}

TensorField stress_A(const VolumeField& p, const VectorField& u, const GeometryCache& g) {
  require_same_grid(p.grid(), g.grid, "stress_A");
  TensorField s = sym_grad_A(u, g);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      s[i][j] *= -1.0;
      if (i == j) s[i][j] += p;
    }
  }
  return s;
}

VectorField div_tensor_A(const TensorField& T, const GeometryCache& g) {
  require_same_grid(T[0][0].grid(), g.grid, "div_tensor_A");
  VectorField out = div_tensor(T);
  const VectorField q = div_tensor_col(T, g.I_minus_A, g.dealias());
  for (int i = 0; i < 3; ++i) out[i] -= q[i];
  return out;
}

VectorField laplacian_A(const VectorField& u, const GeometryCache& g) {
  VectorField out;
  for (int i = 0; i < 3; ++i) out[i] = div_A(grad_A(u[i], g), g);
  return out;
}

}  // namespace fsflow
