#include "pathkernel/spectral_oracle.hpp"

#include <cmath>

#include "pathkernel/errors.hpp"
#include "pathkernel/feynman_kac.hpp"

namespace pathkernel {

double SpectralOracle::semigroup_at(std::size_t i, const std::function<double(double)>& g) const {
  double s = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) s += propagator_(i, j) * g(nodes_[j]);
  return s;
}

std::size_t SpectralOracle::node_index(double x) const {
  const double offset = periodic_ ? 0.0 : h_;
  const double pos = (x - offset) / h_;
  const double idx = std::nearbyint(pos);
  if (std::abs(pos - idx) > 1e-9 || idx < 0.0 || idx >= static_cast<double>(nodes_.size())) {
    throw DomainError("point is not an oracle grid node");
  }
  return static_cast<std::size_t>(idx);
}

SpectralOracle spectral_oracle(const ManifoldModel& domain, std::size_t M, const Potential& V,
                               double t) {
  if (M < 16) throw DomainError("oracle grid needs M >= 16");
  if (!(t > 0.0)) throw DomainError("time must be positive");
  SpectralOracle o;
  double length = 0.0;
  if (domain.is<model::Circle>()) {
    length = domain.as<model::Circle>().circumference;
    o.periodic_ = true;
    o.h_ = length / static_cast<double>(M);
  } else if (domain.is<model::DirichletInterval>()) {
    length = domain.as<model::DirichletInterval>().length;
    o.periodic_ = false;
    o.h_ = length / static_cast<double>(M + 1);
  } else {
    throw DomainError("spectral oracle supports circle and dirichlet interval domains");
  }
  const double h = o.h_;
  o.nodes_.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    o.nodes_[i] = (o.periodic_ ? static_cast<double>(i) : static_cast<double>(i + 1)) * h;
  }

  const Eigen::Index n = static_cast<Eigen::Index>(M);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  const double inv_h2 = 1.0 / (h * h);
  for (Eigen::Index i = 0; i < n; ++i) {
    H(i, i) = -2.0 * inv_h2 - V(Point{o.nodes_[static_cast<std::size_t>(i)]});
    if (i + 1 < n) H(i, i + 1) = H(i + 1, i) = inv_h2;
  }
  if (o.periodic_) H(0, n - 1) = H(n - 1, 0) = inv_h2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  if (eig.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  const Eigen::VectorXd decay = (t * eig.eigenvalues().array()).exp();
  o.propagator_ = eig.eigenvectors() * decay.asDiagonal() * eig.eigenvectors().transpose();
  o.propagator_ = 0.5 * (o.propagator_ + o.propagator_.transpose()).eval();
  return o;
}

}  // namespace pathkernel
