#include "mode_systems.hpp"

#include <cstdlib>
#include <deque>
#include <map>
#include <mutex>
#include <tuple>

#include "fsflow/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fsflow::detail {

namespace {
const cplx I(0.0, 1.0);
}

int worker_threads() {
  if (const char* env = std::getenv("FSFLOW_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

ModeSystem::ModeSystem(const Grid& grid, double k1, double k2, double mass, TopCondition top)
    : n_(grid.n3()), k1_(k1), k2_(k2), mass_(mass), top_(top), zero_(k1 == 0.0 && k2 == 0.0) {
  ext_ = grid.interior_extension();
  if (zero_)
    assemble_zero(grid);
  else
    assemble_general(grid);
  realify();
  // PartialPivLU does not report singularity; check the pivots instead.
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  auto scan = [&](const auto& lu) {
    for (int i = 0; i < lu.rows(); ++i) {
      dmax = std::max(dmax, std::abs(lu(i, i)));
      dmin = std::min(dmin, std::abs(lu(i, i)));
    }
  };
  if (real_)
    scan(lur_.matrixLU());
  else
    scan(lu_.matrixLU());
  if (!(dmin > 1e-13 * dmax)) {
    const double two_pi = 2.0 * 3.14159265358979323846;
    throw DiscretizationError("singular per-mode collocation matrix",
                              static_cast<int>(std::lround(k1 * grid.l1() / two_pi)),
                              static_cast<int>(std::lround(k2 * grid.l2() / two_pi)));
  }
}

void ModeSystem::realify() {
  const int size = static_cast<int>(a_.rows());
  flip_col_.assign(size, 0);
  flip_row_.assign(size, 0);
  if (!zero_)
    for (int j = 0; j < 2 * n_; ++j) flip_col_[j] = 1;
  Eigen::MatrixXcd b = a_;
  for (int j = 0; j < size; ++j)
    if (flip_col_[j]) b.col(j) *= cplx(0.0, 1.0);
  real_ = true;
  for (int i = 0; i < size && real_; ++i) {
    const double re = b.row(i).real().cwiseAbs().maxCoeff();
    const double im = b.row(i).imag().cwiseAbs().maxCoeff();
    if (re == 0.0 && im > 0.0) {
      flip_row_[i] = 1;
      b.row(i) *= cplx(0.0, -1.0);
    } else if (im != 0.0) {
      real_ = false;
    }
  }
  if (real_) {
    br_ = b.real();
    lur_.compute(br_);
  } else {
    lu_.compute(a_);
  }
}

// Unknown layout: v1, v2, v3 (n each), then q (n - 2 interior values or n
// values on the zero column), then eta for the free-surface variant.
void ModeSystem::assemble_general(const Grid& grid) {
  const int n = n_;
  const int nq = n - 2;
  const bool free = top_ == TopCondition::FreeSurface;
  const int size = 3 * n + nq + (free ? 1 : 0);
  const Eigen::MatrixXd& d = grid.d3();
  const Eigen::MatrixXd d2 = d * d;
  const Eigen::MatrixXd dext = d * ext_;
  const double ksq = k1_ * k1_ + k2_ * k2_;
  const cplx ik[2] = {I * k1_, I * k2_};
  a_ = Eigen::MatrixXcd::Zero(size, size);
  auto V = [n](int c, int j) { return c * n + j; };
  auto Q = [n](int j) { return 3 * n + j; };
  const int eta = size - 1;

  int row = 0;
  // Momentum at interior nodes:
  // mass v_i - (D^2 - k^2) v_i - d_i div v + d_i q.
  for (int i = 0; i < 3; ++i) {
    for (int r = 1; r < n - 1; ++r, ++row) {
      for (int l = 0; l < n; ++l) a_(row, V(i, l)) -= d2(r, l);
      a_(row, V(i, r)) += mass_ + ksq;
      if (i < 2) {
        a_(row, V(0, r)) -= ik[i] * ik[0];
        a_(row, V(1, r)) -= ik[i] * ik[1];
        for (int l = 0; l < n; ++l) a_(row, V(2, l)) -= ik[i] * d(r, l);
        a_(row, Q(r - 1)) += ik[i];
      } else {
        for (int l = 0; l < n; ++l) {
          a_(row, V(0, l)) -= d(r, l) * ik[0];
          a_(row, V(1, l)) -= d(r, l) * ik[1];
          a_(row, V(2, l)) -= d2(r, l);
        }
        for (int l = 0; l < nq; ++l) a_(row, Q(l)) += dext(r, l);
      }
    }
  }
  // Divergence at interior nodes.
  for (int r = 1; r < n - 1; ++r, ++row) {
    a_(row, V(0, r)) += ik[0];
    a_(row, V(1, r)) += ik[1];
    for (int l = 0; l < n; ++l) a_(row, V(2, l)) += d(r, l);
  }
  // Tangential stress at the top: d3 v_a + d_a v3.
  for (int a = 0; a < 2; ++a, ++row) {
    for (int l = 0; l < n; ++l) a_(row, V(a, l)) += d(0, l);
    a_(row, V(2, 0)) += ik[a];
  }
  if (!free) {
    a_(row++, V(2, 0)) = 1.0;
  } else {
    for (int l = 0; l < nq; ++l) a_(row, Q(l)) += ext_(0, l);
    for (int l = 0; l < n; ++l) a_(row, V(2, l)) -= 2.0 * d(0, l);
    a_(row, eta) -= 1.0 + ksq;
    ++row;
    a_(row, eta) = mass_;
    a_(row, V(2, 0)) = -1.0;
    ++row;
  }
  for (int c = 0; c < 3; ++c, ++row) a_(row, V(c, n - 1)) = 1.0;
  if (row != size) throw Error("mode system row count mismatch");
}

void ModeSystem::assemble_zero(const Grid& grid) {
  const int n = n_;
  const bool free = top_ == TopCondition::FreeSurface;
  const int size = 4 * n + (free ? 1 : 0);
  const Eigen::MatrixXd& d = grid.d3();
  const Eigen::MatrixXd d2 = d * d;
  a_ = Eigen::MatrixXcd::Zero(size, size);
  auto V = [n](int c, int j) { return c * n + j; };
  auto Q = [n](int j) { return 3 * n + j; };
  const int eta = size - 1;
  // Row order mirrors column order so the load mapping stays simple:
  // v_a rows, v3 rows, q rows, eta row.
  for (int a = 0; a < 2; ++a) {
    for (int r = 1; r < n - 1; ++r) {
      const int row = V(a, r);
      for (int l = 0; l < n; ++l) a_(row, V(a, l)) -= d2(r, l);
      a_(row, V(a, r)) += mass_;
    }
    for (int l = 0; l < n; ++l) a_(V(a, 0), V(a, l)) = d(0, l);
    a_(V(a, n - 1), V(a, n - 1)) = 1.0;
  }
  // v3: divergence on every node but the bottom, then no-slip.
  for (int r = 0; r < n - 1; ++r)
    for (int l = 0; l < n; ++l) a_(V(2, r), V(2, l)) = d(r, l);
  a_(V(2, n - 1), V(2, n - 1)) = 1.0;
  // q: vertical momentum on every node but the bottom.
  for (int r = 0; r < n - 1; ++r) {
    const int row = Q(r);
    for (int l = 0; l < n; ++l) {
      a_(row, V(2, l)) -= 2.0 * d2(r, l);
      a_(row, Q(l)) += d(r, l);
    }
    a_(row, V(2, r)) += mass_;
  }
  if (!free) {
    // Zero mean pressure.
    for (int l = 0; l < n; ++l) a_(Q(n - 1), Q(l)) = grid.cc_weights()[l];
  } else {
    a_(Q(n - 1), Q(0)) = 1.0;
    for (int l = 0; l < n; ++l) a_(Q(n - 1), V(2, l)) -= 2.0 * d(0, l);
    a_(Q(n - 1), eta) = -1.0;
    a_(eta, eta) = mass_;
    a_(eta, V(2, 0)) = -1.0;
  }
}

Eigen::VectorXcd ModeSystem::load(const ModeData& dat) const {
  const int n = n_;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(a_.rows());
  const bool free = top_ == TopCondition::FreeSurface;
  if (!zero_) {
    int row = 0;
    for (int i = 0; i < 3; ++i)
      for (int r = 1; r < n - 1; ++r) b[row++] = dat.r1[i][r];
    for (int r = 1; r < n - 1; ++r) b[row++] = dat.r2[r];
    b[row++] = dat.r3[0];
    b[row++] = dat.r3[1];
    b[row++] = dat.r4;
    if (free) b[row++] = dat.r5;
    return b;
  }
  for (int a = 0; a < 2; ++a) {
    for (int r = 1; r < n - 1; ++r) b[a * n + r] = dat.r1[a][r];
    b[a * n] = dat.r3[a];
  }
  for (int r = 0; r < n - 1; ++r) {
    b[2 * n + r] = dat.r2[r];
    b[3 * n + r] = dat.r1[2][r];
  }
  if (free) {
    b[4 * n - 1] = dat.r4;
    b[4 * n] = dat.r5;
  }
  return b;
}

ModeSolution ModeSystem::unpack(const Eigen::VectorXcd& x) const {
  const int n = n_;
  ModeSolution s;
  for (int c = 0; c < 3; ++c) s.v[c] = x.segment(c * n, n);
  if (zero_) {
    s.q = x.segment(3 * n, n);
  } else {
    const auto qi = x.segment(3 * n, n - 2);
    const Eigen::VectorXd re = ext_ * qi.real(), im = ext_ * qi.imag();
    s.q.resize(n);
    s.q.real() = re;
    s.q.imag() = im;
  }
  if (top_ == TopCondition::FreeSurface) s.eta = x[x.size() - 1];
  return s;
}

ModeSolution ModeSystem::solve(const ModeData& d) const {
  Eigen::VectorXcd b = load(d);
  // One step of iterative refinement: the high Chebyshev rows are badly
  // scaled and the first back substitution leaves O(eps N^4) residuals.
  if (!real_) {
    Eigen::VectorXcd x = lu_.solve(b);
    x += lu_.solve(b - a_ * x);
    return unpack(x);
  }
  const int size = static_cast<int>(b.size());
  for (int i = 0; i < size; ++i)
    if (flip_row_[i]) b[i] *= cplx(0.0, -1.0);
  Eigen::MatrixXd rb(size, 2);
  rb.col(0) = b.real();
  rb.col(1) = b.imag();
  Eigen::MatrixXd x = lur_.solve(rb);
  x += lur_.solve(rb - br_ * x);
  Eigen::VectorXcd xc(size);
  for (int i = 0; i < size; ++i) xc[i] = flip_col_[i] ? cplx(-x(i, 1), x(i, 0)) : cplx(x(i, 0), x(i, 1));
  return unpack(xc);
}

ModeBank::ModeBank(std::shared_ptr<const Grid> grid, double mass, TopCondition top, bool retained_only)
    : grid_(std::move(grid)), retained_only_(retained_only), systems_(grid_->plane_modes()) {
  const Grid& g = *grid_;
  const int nm = static_cast<int>(g.plane_modes());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (int m = 0; m < nm; ++m) {
    if (retained_only && !g.retained_plane()[m]) continue;
    try {
      systems_[m] = std::make_unique<ModeSystem>(g, g.k1_plane()[m], g.k2_plane()[m], mass, top);
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::shared_ptr<const ModeBank> mode_bank(const std::shared_ptr<const Grid>& grid, double mass, TopCondition top,
                                          bool retained_only) {
  using Key = std::tuple<int, int, int, double, double, double, int, bool>;
  static std::mutex mu;
  // A few recent banks stay alive so that a time loop does not refactor
  // every step; older ones are dropped once nobody holds them.
  static std::map<Key, std::weak_ptr<const ModeBank>> cache;
  static std::deque<std::shared_ptr<const ModeBank>> recent;
  constexpr std::size_t keep = 4;
  const GridDescriptor& d = grid->desc();
  const Key key{d.N1, d.N2, d.N3, d.L1, d.L2, mass, static_cast<int>(top), retained_only};
  std::lock_guard lock(mu);
  if (auto it = cache.find(key); it != cache.end()) {
    if (auto sp = it->second.lock()) return sp;
  }
  auto bank = std::make_shared<const ModeBank>(grid, mass, top, retained_only);
  cache[key] = bank;
  recent.push_back(bank);
  if (recent.size() > keep) recent.pop_front();
  return bank;
}

PoissonModeBank::PoissonModeBank(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {
  const Grid& g = *grid_;
  const int n = g.n3();
  const Eigen::MatrixXd& d = g.d3();
  const Eigen::MatrixXd d2 = d * d;
  lu_.resize(g.plane_modes());
  for (std::size_t m = 0; m < g.plane_modes(); ++m) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    const double ksq = g.ksq_plane()[m];
    for (int r = 1; r < n - 1; ++r) {
      for (int l = 0; l < n; ++l) a(r, l) = -d2(r, l);
      a(r, r) += ksq;
    }
    a(0, 0) = 1.0;
    for (int l = 0; l < n; ++l) a(n - 1, l) = d(n - 1, l);
    lu_[m].compute(a);
  }
}

Eigen::VectorXcd PoissonModeBank::solve(std::size_t m, const Eigen::VectorXcd& f, cplx top, cplx bottom) const {
  const int n = grid_->n3();
  Eigen::VectorXcd b = f;
  b[0] = top;
  b[n - 1] = bottom;
  return lu_[m].solve(b);
}

}  // namespace fsflow::detail

#include "fsflow/fields.hpp"

namespace fsflow::detail {

void sweep(const ModeBank& bank, const SweepInput& in, SweepOutput& out) {
  const Grid& g = bank.grid();
  const int n = g.n3();
  const int nm = static_cast<int>(g.plane_modes());
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (int m = 0; m < nm; ++m) {
    const ModeSystem* sys = bank.at(m);
    if (sys == nullptr) {
      for (int c = 0; c < 3; ++c)
        for (int j = 0; j < n; ++j) (*out.v)[c].plane(j)[m] = 0.0;
      for (int j = 0; j < n; ++j) out.q->plane(j)[m] = 0.0;
      if (out.eta) out.eta->coeffs()[m] = 0.0;
      continue;
    }
    ModeData d;
    for (int c = 0; c < 3; ++c) {
      d.r1[c].resize(n);
      for (int j = 0; j < n; ++j) d.r1[c][j] = (*in.r1)[c].plane(j)[m];
    }
    d.r2.resize(n);
    for (int j = 0; j < n; ++j) d.r2[j] = in.r2->plane(j)[m];
    for (int a = 0; a < 2; ++a) d.r3[a] = in.r3[a]->coeffs()[m];
    d.r4 = in.r4->coeffs()[m];
    if (in.r5) d.r5 = in.r5->coeffs()[m];
    const ModeSolution s = sys->solve(d);
    for (int c = 0; c < 3; ++c)
      for (int j = 0; j < n; ++j) (*out.v)[c].plane(j)[m] = s.v[c][j];
    for (int j = 0; j < n; ++j) out.q->plane(j)[m] = s.q[j];
    if (out.eta) out.eta->coeffs()[m] = s.eta;
  }
}

}  // namespace fsflow::detail
