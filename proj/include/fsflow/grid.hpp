#pragma once
// Fourier x Fourier x Chebyshev grid on Sigma x [-1, 0], Sigma the torus
// T_{L1} x T_{L2}.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace fsflow {

using cplx = std::complex<double>;

struct GridDescriptor {
  int N1 = 16;
  int N2 = 16;
  int N3 = 33;
  double L1 = 1.0;
  double L2 = 1.0;

  // Throws ConfigError naming the offending field.
  void validate() const;
  bool operator==(const GridDescriptor&) const = default;
};

struct FftPlans;

// Immutable once constructed; shared by every field living on it.
class Grid {
 public:
  explicit Grid(const GridDescriptor& desc);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  static std::shared_ptr<const Grid> make(const GridDescriptor& desc);

  const GridDescriptor& desc() const { return desc_; }
  int n1() const { return desc_.N1; }
  int n2() const { return desc_.N2; }
  int n3() const { return desc_.N3; }
  // Stored half-spectrum width along axis 2.
  int nh() const { return desc_.N2 / 2 + 1; }
  double l1() const { return desc_.L1; }
  double l2() const { return desc_.L2; }
  double area() const { return desc_.L1 * desc_.L2; }

  std::size_t plane_modes() const { return static_cast<std::size_t>(n1()) * nh(); }
  std::size_t plane_points() const { return static_cast<std::size_t>(n1()) * n2(); }
  std::size_t volume_modes() const { return plane_modes() * n3(); }
  std::size_t volume_points() const { return plane_points() * n3(); }

  // Signed integer wavenumber index along each axis.
  int m1(int i1) const { return i1 <= n1() / 2 ? i1 : i1 - n1(); }
  int m2(int i2) const { return i2; }
  // Angular wavenumbers 2 pi m / L; zero at the Nyquist index.
  double k1(int i1) const { return k1_[i1]; }
  double k2(int i2) const { return k2_[i2]; }
  // Per-mode arrays over a spectral plane (index i1 * nh + i2).
  const std::vector<double>& k1_plane() const { return k1_plane_; }
  const std::vector<double>& k2_plane() const { return k2_plane_; }
  const std::vector<double>& ksq_plane() const { return ksq_plane_; }
  // Number of times a stored half-spectrum mode appears in the full spectrum.
  const std::vector<double>& multiplicity() const { return multiplicity_; }
  bool retained(int i1, int i2) const { return retained_[static_cast<std::size_t>(i1) * nh() + i2]; }
  const std::vector<char>& retained_plane() const { return retained_; }

  const std::vector<double>& x3() const { return x3_; }
  const std::vector<double>& cc_weights() const { return ccw_; }
  const Eigen::MatrixXd& d3() const { return d3_; }
  const Eigen::MatrixXd& interior_extension() const { return ext_; }
  double x1(int i1) const { return desc_.L1 * i1 / n1(); }
  double x2(int i2) const { return desc_.L2 * i2 / n2(); }

  // Plane transforms; `spec` has plane_modes() entries, `phys` plane_points().
  // Forward transform is normalized so that coefficients are Fourier
  // amplitudes: f(x) = sum_n fhat(n) exp(2 pi i n.x).
  void forward(const double* phys, cplx* spec) const;
  void inverse(const cplx* spec, double* phys) const;

 private:
  GridDescriptor desc_;
  std::vector<double> k1_, k2_;
  std::vector<double> k1_plane_, k2_plane_, ksq_plane_, multiplicity_;
  std::vector<char> retained_;
  std::vector<double> x3_, ccw_;
  Eigen::MatrixXd d3_, ext_;
  std::unique_ptr<FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace fsflow
