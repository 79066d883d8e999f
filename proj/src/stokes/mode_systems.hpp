#pragma once
// Per-wavenumber collocation systems in x3.
//
// For horizontal wavenumber (k1, k2) the flat operators decouple into dense
// 1D problems on the N3 Chebyshev nodes. Velocity lives on all nodes; for a
// nonzero wavenumber the pressure is a polynomial of degree N3 - 3 stored by
// its values at the interior nodes (the classical P_N - P_{N-2} pairing).
// The k = 0 column has a compatibility-type singularity in that pairing and
// is assembled separately with the pressure on all nodes.

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include <array>

#include "fsflow/grid.hpp"

namespace fsflow::detail {

enum class TopCondition {
  // v3(0) = R4, with a zero-mean pressure gauge on the k = 0 column.
  Dirichlet,
  // Normal stress q - 2 dv3 - (1 + k^2) eta = R5 and kinematic
  // eta / dt - v3 = R6; eta is an extra unknown.
  FreeSurface,
};

// Right-hand side data for one mode. Vectors are indexed by node.
struct ModeData {
  Eigen::VectorXcd r1[3];
  Eigen::VectorXcd r2;
  cplx r3[2] = {};
  cplx r4 = 0.0;  // Dirichlet: normal velocity; FreeSurface: normal stress
  cplx r5 = 0.0;  // FreeSurface only: kinematic row
};

struct ModeSolution {
  Eigen::VectorXcd v[3];
  Eigen::VectorXcd q;  // on all nodes
  cplx eta = 0.0;
};

// Factorized system for one wavenumber.
class ModeSystem {
 public:
  ModeSystem(const Grid& grid, double k1, double k2, double mass, TopCondition top);
  ModeSolution solve(const ModeData& d) const;
  // The assembled matrix and the load vector, for residual checks.
  const Eigen::MatrixXcd& matrix() const { return a_; }
  Eigen::VectorXcd load(const ModeData& d) const;
  ModeSolution unpack(const Eigen::VectorXcd& x) const;
  bool zero_column() const { return zero_; }
  int unknowns() const { return static_cast<int>(a_.rows()); }

 private:
  void assemble_general(const Grid& grid);
  void assemble_zero(const Grid& grid);
  void realify();

  int n_;
  double k1_, k2_, mass_;
  TopCondition top_;
  bool zero_;
  Eigen::MatrixXd ext_;
  Eigen::MatrixXcd a_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  // With v_a = i w_a and the rows that then become purely imaginary
  // multiplied by -i, every system is real; solved as such when it is.
  bool real_ = false;
  std::vector<char> flip_row_, flip_col_;
  Eigen::MatrixXd br_;  // realified a_, kept for the refinement residual
  Eigen::PartialPivLU<Eigen::MatrixXd> lur_;
};

// One ModeSystem per stored plane mode (empty slots for skipped modes).
class ModeBank {
 public:
  ModeBank(std::shared_ptr<const Grid> grid, double mass, TopCondition top, bool retained_only);
  const ModeSystem* at(std::size_t m) const { return systems_[m].get(); }
  const Grid& grid() const { return *grid_; }
  bool retained_only() const { return retained_only_; }

 private:
  std::shared_ptr<const Grid> grid_;
  bool retained_only_;
  std::vector<std::unique_ptr<ModeSystem>> systems_;
};

// Shared, lazily built banks keyed by grid shape and parameters.
std::shared_ptr<const ModeBank> mode_bank(const std::shared_ptr<const Grid>& grid, double mass, TopCondition top,
                                          bool retained_only);

// -(D^2 - k^2) p = f on interior nodes, p(0) = top, dp/dx3(-1) = bottom.
class PoissonModeBank {
 public:
  explicit PoissonModeBank(std::shared_ptr<const Grid> grid);
  Eigen::VectorXcd solve(std::size_t m, const Eigen::VectorXcd& f, cplx top, cplx bottom) const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu_;
};

int worker_threads();

}  // namespace fsflow::detail

namespace fsflow {
class VolumeField;
class SurfaceField;
}  // namespace fsflow

namespace fsflow::detail {

// Field-level inputs for a sweep over all modes. r5 is used only by the
// free-surface systems.
struct SweepInput {
  const std::array<VolumeField, 3>* r1 = nullptr;
  const VolumeField* r2 = nullptr;
  const SurfaceField* r3[2] = {nullptr, nullptr};
  const SurfaceField* r4 = nullptr;
  const SurfaceField* r5 = nullptr;
};

struct SweepOutput {
  std::array<VolumeField, 3>* v = nullptr;
  VolumeField* q = nullptr;
  SurfaceField* eta = nullptr;
};

// Solve every mode of the bank; modes without a system get zero output.
void sweep(const ModeBank& bank, const SweepInput& in, SweepOutput& out);

}  // namespace fsflow::detail
