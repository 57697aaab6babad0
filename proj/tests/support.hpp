#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "mcom/model.hpp"

namespace mcom::test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  // Parameters around the published operating point, including nonreciprocal
  // couplings and both OPA regimes.
  SystemParams params() {
    SystemParams p;
    p.g_m = log_uniform(1e-4, 3e-3);
    p.kappa_a = uniform(0.1, 0.6);
    p.kappa_c = uniform(0.1, 0.6);
    p.delta_a = uniform(-1.5, 2.0);
    p.delta_c = uniform(-1.5, 2.0);
    p.gamma_1 = log_uniform(1e-5, 1e-2);
    p.gamma_2 = log_uniform(1e-5, 1e-2);
    p.drive_a = uniform(0.0, 40.0);
    p.drive_c = uniform(0.0, 40.0);
    p.j_1 = uniform(0.0, 1.2);
    p.j_2 = uniform(0.0, 1.2);
    p.lambda_opa = uniform(0.0, 0.45);
    p.theta = uniform(0.0, 6.283185307179586);
    p.n_total = integer(0, 200);
    p.m_split = integer(0, p.n_total);
    p.temperature = uniform(0.0, 1500.0);
    return p;
  }

  Eigen::MatrixXd gaussian(int rows, int cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = n(rng_);
    return m;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Symplectic form with one [[0, 1], [-1, 0]] block per mode.
inline Eigen::MatrixXd omega(int modes) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    w(2 * k, 2 * k + 1) = 1.0;
    w(2 * k + 1, 2 * k) = -1.0;
  }
  return w;
}

// Random physical covariance S diag(nu) S^T, nu_k >= 1/2, with S a product
// of phase rotations, single-mode squeezers and beam splitters.
inline Eigen::MatrixXd random_physical_covariance(Gen& g, int modes) {
  const int n = 2 * modes;
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
  auto rotation = [&](int k, double phi) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
    r(2 * k, 2 * k) = std::cos(phi);
    r(2 * k, 2 * k + 1) = std::sin(phi);
    r(2 * k + 1, 2 * k) = -std::sin(phi);
    r(2 * k + 1, 2 * k + 1) = std::cos(phi);
    return r;
  };
  auto squeezer = [&](int k, double r) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    m(2 * k, 2 * k) = std::exp(-r);
    m(2 * k + 1, 2 * k + 1) = std::exp(r);
    return m;
  };
  auto splitter = [&](int j, int k, double t) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (int q = 0; q < 2; ++q) {
      m(2 * j + q, 2 * j + q) = std::cos(t);
      m(2 * j + q, 2 * k + q) = std::sin(t);
      m(2 * k + q, 2 * j + q) = -std::sin(t);
      m(2 * k + q, 2 * k + q) = std::cos(t);
    }
    return m;
  };
  for (int layer = 0; layer < 3; ++layer) {
    for (int k = 0; k < modes; ++k) s = rotation(k, g.uniform(0, 6.3)) * squeezer(k, g.uniform(-1.0, 1.0)) * s;
    for (int j = 0; j < modes; ++j)
      for (int k = j + 1; k < modes; ++k) s = splitter(j, k, g.uniform(0, 6.3)) * s;
  }
  Eigen::MatrixXd thermal = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < modes; ++k) thermal(2 * k, 2 * k) = thermal(2 * k + 1, 2 * k + 1) = 0.5 + g.uniform(0.0, 2.0);
  return s * thermal * s.transpose();
}

}  // namespace mcom::test
