#include "fsflow/fields.hpp"

#include "fsflow/errors.hpp"
#include "fsflow/simd.hpp"

namespace fsflow {

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where) {
  if (!a || !b) throw ConfigError(std::string(where) + ": field without grid");
  if (a != b && !(a->desc() == b->desc())) throw ConfigError(std::string(where) + ": grid mismatch");
}

namespace {
void axpy_complex(double s, const std::vector<cplx>& x, std::vector<cplx>& y) {
  simd::kernels().axpy(s, reinterpret_cast<const double*>(x.data()), reinterpret_cast<double*>(y.data()),
                       2 * x.size());
}
}  // namespace

SurfaceField::SurfaceField(GridPtr grid, std::string label)
    : grid_(std::move(grid)), c_(grid_->plane_modes(), cplx(0.0, 0.0)), label_(std::move(label)) {}

SurfaceField SurfaceField::from_physical(GridPtr grid, std::span<const double> values, std::string label) {
  if (values.size() != grid->plane_points()) throw ConfigError("SurfaceField::from_physical: size mismatch");
  SurfaceField f(std::move(grid), std::move(label));
  f.grid_->forward(values.data(), f.c_.data());
  return f;
}

SurfaceField SurfaceField::constant(GridPtr grid, double c, std::string label) {
  SurfaceField f(std::move(grid), std::move(label));
  f.c_[0] = c;
  return f;
}

std::vector<double> SurfaceField::physical() const {
  std::vector<double> out(grid_->plane_points());
  grid_->inverse(c_.data(), out.data());
  return out;
}

SurfaceField& SurfaceField::operator+=(const SurfaceField& o) { return add_scaled(1.0, o); }
SurfaceField& SurfaceField::operator-=(const SurfaceField& o) { return add_scaled(-1.0, o); }
SurfaceField& SurfaceField::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}
SurfaceField& SurfaceField::add_scaled(double s, const SurfaceField& o) {
  require_same_grid(grid_, o.grid_, "SurfaceField");
  axpy_complex(s, o.c_, c_);
  return *this;
}

SurfaceField operator+(SurfaceField a, const SurfaceField& b) { return a += b; }
SurfaceField operator-(SurfaceField a, const SurfaceField& b) { return a -= b; }
SurfaceField operator*(double s, SurfaceField a) { return a *= s; }

VolumeField::VolumeField(GridPtr grid, std::string label)
    : grid_(std::move(grid)), c_(grid_->volume_modes(), cplx(0.0, 0.0)), label_(std::move(label)) {}

VolumeField VolumeField::from_physical(GridPtr grid, std::span<const double> values, std::string label) {
  if (values.size() != grid->volume_points()) throw ConfigError("VolumeField::from_physical: size mismatch");
  VolumeField f(std::move(grid), std::move(label));
  const std::size_t pp = f.grid_->plane_points();
  for (int j = 0; j < f.grid_->n3(); ++j) f.grid_->forward(values.data() + j * pp, f.plane(j));
  return f;
}

VolumeField VolumeField::constant(GridPtr grid, double c, std::string label) {
  VolumeField f(std::move(grid), std::move(label));
  for (int j = 0; j < f.grid_->n3(); ++j) f.plane(j)[0] = c;
  return f;
}

std::vector<double> VolumeField::physical() const {
  std::vector<double> out(grid_->volume_points());
  const std::size_t pp = grid_->plane_points();
  for (int j = 0; j < grid_->n3(); ++j) grid_->inverse(plane(j), out.data() + j * pp);
  return out;
}

SurfaceField VolumeField::top() const { return level(0); }
SurfaceField VolumeField::bottom() const { return level(grid_->n3() - 1); }

SurfaceField VolumeField::level(int j) const {
  SurfaceField s(grid_);
  std::copy(plane(j), plane(j) + grid_->plane_modes(), s.coeffs().begin());
  return s;
}

void VolumeField::set_level(int j, const SurfaceField& s) {
  require_same_grid(grid_, s.grid(), "VolumeField::set_level");
  std::copy(s.coeffs().begin(), s.coeffs().end(), plane(j));
}

VolumeField& VolumeField::operator+=(const VolumeField& o) { return add_scaled(1.0, o); }
VolumeField& VolumeField::operator-=(const VolumeField& o) { return add_scaled(-1.0, o); }
VolumeField& VolumeField::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}
VolumeField& VolumeField::add_scaled(double s, const VolumeField& o) {
  require_same_grid(grid_, o.grid_, "VolumeField");
  axpy_complex(s, o.c_, c_);
  return *this;
}

VolumeField operator+(VolumeField a, const VolumeField& b) { return a += b; }
VolumeField operator-(VolumeField a, const VolumeField& b) { return a -= b; }
VolumeField operator*(double s, VolumeField a) { return a *= s; }

VectorField zero_vector(const GridPtr& grid) { return {VolumeField(grid), VolumeField(grid), VolumeField(grid)}; }

SurfaceVector zero_surface_vector(const GridPtr& grid) {
  return {SurfaceField(grid), SurfaceField(grid), SurfaceField(grid)};
}

}  // namespace fsflow
