#pragma once
// Scalar data on the surface Sigma and in the slab Omega = Sigma x [-1, 0].
//
// Both field types store Fourier coefficients over the stored half spectrum
// (real data, so the other half is implied by Hermitian symmetry). Volume
// fields keep one coefficient plane per vertical collocation node.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fsflow/grid.hpp"

namespace fsflow {

class SurfaceField {
 public:
  SurfaceField() = default;
  explicit SurfaceField(GridPtr grid, std::string label = {});

  static SurfaceField from_physical(GridPtr grid, std::span<const double> values, std::string label = {});
  static SurfaceField constant(GridPtr grid, double c, std::string label = {});

  std::vector<double> physical() const;

  const GridPtr& grid() const { return grid_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }
  std::vector<cplx>& coeffs() { return c_; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx& at(int i1, int i2) { return c_[static_cast<std::size_t>(i1) * grid_->nh() + i2]; }
  const cplx& at(int i1, int i2) const { return c_[static_cast<std::size_t>(i1) * grid_->nh() + i2]; }
  bool empty() const { return grid_ == nullptr; }

  SurfaceField& operator+=(const SurfaceField& o);
  SurfaceField& operator-=(const SurfaceField& o);
  SurfaceField& operator*=(double s);
  // this += s * o
  SurfaceField& add_scaled(double s, const SurfaceField& o);

 private:
  GridPtr grid_;
  std::vector<cplx> c_;
  std::string label_;
};

SurfaceField operator+(SurfaceField a, const SurfaceField& b);
SurfaceField operator-(SurfaceField a, const SurfaceField& b);
SurfaceField operator*(double s, SurfaceField a);

class VolumeField {
 public:
  VolumeField() = default;
  explicit VolumeField(GridPtr grid, std::string label = {});

  static VolumeField from_physical(GridPtr grid, std::span<const double> values, std::string label = {});
  static VolumeField constant(GridPtr grid, double c, std::string label = {});

  std::vector<double> physical() const;

  const GridPtr& grid() const { return grid_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }
  std::vector<cplx>& coeffs() { return c_; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx* plane(int j) { return c_.data() + static_cast<std::size_t>(j) * grid_->plane_modes(); }
  const cplx* plane(int j) const { return c_.data() + static_cast<std::size_t>(j) * grid_->plane_modes(); }
  cplx& at(int j, int i1, int i2) { return plane(j)[static_cast<std::size_t>(i1) * grid_->nh() + i2]; }
  const cplx& at(int j, int i1, int i2) const {
    return plane(j)[static_cast<std::size_t>(i1) * grid_->nh() + i2];
  }
  bool empty() const { return grid_ == nullptr; }

  // Restriction to the node plane x3 = 0 (j = 0) or x3 = -1 (j = N3 - 1).
  SurfaceField top() const;
  SurfaceField bottom() const;
  SurfaceField level(int j) const;
  void set_level(int j, const SurfaceField& s);

  VolumeField& operator+=(const VolumeField& o);
  VolumeField& operator-=(const VolumeField& o);
  VolumeField& operator*=(double s);
  VolumeField& add_scaled(double s, const VolumeField& o);

 private:
  GridPtr grid_;
  std::vector<cplx> c_;
  std::string label_;
};

VolumeField operator+(VolumeField a, const VolumeField& b);
VolumeField operator-(VolumeField a, const VolumeField& b);
VolumeField operator*(double s, VolumeField a);

using VectorField = std::array<VolumeField, 3>;
using TensorField = std::array<std::array<VolumeField, 3>, 3>;
using SurfaceVector = std::array<SurfaceField, 3>;

VectorField zero_vector(const GridPtr& grid);
SurfaceVector zero_surface_vector(const GridPtr& grid);

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where);

}  // namespace fsflow
