#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "pathkernel/manifold.hpp"

namespace pathkernel {

class Potential;

/// exp(t (D2 - V)) for the second-order finite-difference Laplacian on M
/// uniform nodes of a circle (periodic) or Dirichlet interval (interior
/// nodes, zero boundary values). Maps node samples to node samples.
class SpectralOracle {
 public:
  const std::vector<double>& nodes() const { return nodes_; }
  double spacing() const { return h_; }
  const Eigen::MatrixXd& propagator() const { return propagator_; }

  /// (e^{tH} g)(x_i).
  double semigroup_at(std::size_t i, const std::function<double(double)>& g) const;
  /// Kernel density q_t(x_i, x_j) = propagator(i, j) / h.
  double kernel(std::size_t i, std::size_t j) const { return propagator_(i, j) / h_; }
  /// Node index of x, which must coincide with a node up to 1e-9 h.
  std::size_t node_index(double x) const;

 private:
  friend SpectralOracle spectral_oracle(const ManifoldModel&, std::size_t, const Potential&, double);
  std::vector<double> nodes_;
  double h_ = 0.0;
  bool periodic_ = true;
  Eigen::MatrixXd propagator_;
};

SpectralOracle spectral_oracle(const ManifoldModel& domain, std::size_t M, const Potential& V,
                               double t);

}  // namespace pathkernel
