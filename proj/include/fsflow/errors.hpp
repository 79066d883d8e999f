#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fsflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad sizes, periods, mismatched grids, invalid option values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The flattening map stopped being a diffeomorphism: min J fell to j_floor.
class DiffeomorphismLost : public Error {
 public:
  DiffeomorphismLost(double min_j, double j_floor)
      : Error("DiffeomorphismLost: min J = " + std::to_string(min_j) +
              " <= j_floor = " + std::to_string(j_floor)),
        min_j_(min_j) {}
  double min_j() const { return min_j_; }

 private:
  double min_j_;
};

// The perturbed-Stokes fixed-point map failed to converge.
class NonContraction : public Error {
 public:
  NonContraction(const std::string& what, std::vector<double> history)
      : Error("NonContraction: " + what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

// A per-mode collocation matrix was singular.
class DiscretizationError : public Error {
 public:
  DiscretizationError(const std::string& what, int m1, int m2)
      : Error("DiscretizationError: " + what + " at mode (" + std::to_string(m1) + ", " +
              std::to_string(m2) + ")"),
        m1_(m1),
        m2_(m2) {}
  int m1() const { return m1_; }
  int m2() const { return m2_; }

 private:
  int m1_;
  int m2_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fsflow
