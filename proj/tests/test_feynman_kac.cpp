#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pathkernel/errors.hpp"
#include "pathkernel/feynman_kac.hpp"
#include "pathkernel/spectral_oracle.hpp"

using namespace pathkernel;

namespace {

constexpr double kPi = std::numbers::pi;
// e^{t(D2 - cos)} 1 at x = 0 on the circle of length 2 pi, t = 1, from an
// independent dense eigendecomposition at M = 512.
constexpr double kCosOracle = 0.5617919342535524;
// matching kernel entry q_1(0, pi)
constexpr double kCosKernelOracle = 0.0495202609636413;

TerminalFunction one() {
  return [](const Point&) { return 1.0; };
}

}  // namespace

TEST_CASE("potentials check their declared bound") {
  const Potential bad([](const Point&) { return 2.0; }, 1.0, "bad");
  CHECK_THROWS_AS(bad(Point{0.0}), DomainError);
  CHECK_THROWS_AS(Potential([](const Point&) { return 0.0; }, -1.0), DomainError);
  CHECK(Potential::step(0.0, 1.0, -3.0)(Point{0.5}) == -3.0);
  CHECK(Potential::step(0.0, 1.0, -3.0)(Point{1.0}) == 0.0);
  CHECK(Potential::cosine().shifted(0.5)(Point{0.0}) == 1.5);
  CHECK(Potential::cosine().shifted(0.5).sup_bound() == 1.5);
  const auto cov = CoveringDescriptor::of(ManifoldModel::circle(2 * kPi));
  CHECK(Potential::cosine().pulled_back(cov)(Point{2 * kPi + 1.0}) == doctest::Approx(std::cos(1.0)));

  FKProblem prob{TransitionKernel(ManifoldModel::circle(1.0)), bad, one(), Point{0.0}, 1.0, 4, 10};
  CHECK_THROWS_AS(fk_expectation(prob), DomainError);
}

TEST_CASE("riemann rules") {
  Path p{TimeGrid::uniform(1.0, 2), {Point{0.0}, Point{1.0}, Point{2.0}}, std::nullopt};
  const Potential id([](const Point& x) { return x.coords[0]; }, 10.0);
  CHECK(riemann_action(p, id, RiemannRule::RightEndpoint) == 1.5);
  CHECK(riemann_action(p, id, RiemannRule::Trapezoid) == 1.0);
}

TEST_CASE("zero potential gives the heat semigroup") {
  FKProblem prob{TransitionKernel(ManifoldModel::hyperbolic3()), Potential::zero(), one(),
                 Point{1.0, 0.0, 0.0, 0.0}, 1.0, 8, 2000, 3};
  const auto e = fk_expectation(prob);
  CHECK(e.value == 1.0);
  CHECK(e.std_error == 0.0);
  CHECK(e.n_samples == 2000);
  CHECK(e.seed == 3);

  // killed paths carry zero weight, so g = 1 recovers the surviving mass
  FKProblem killed{TransitionKernel(ManifoldModel::compactified(ManifoldModel::dirichlet_interval(kPi))),
                   Potential::zero(), one(), Point{kPi / 2}, 1.0, 4, 100000, 4};
  const auto k = fk_expectation(killed);
  CHECK(std::abs(k.value - oracle::dirichlet_mass_series(kPi, kPi / 2, 1.0)) < 3 * k.std_error);
}

TEST_CASE("constant potential factors out per sample") {
  const double c = 0.7, t = 1.3;
  FKProblem base{TransitionKernel(ManifoldModel::euclidean(1)), Potential::zero(),
                 [](const Point& x) { return std::cos(x.coords[0]); }, Point{0.2}, t, 16, 500, 5};
  FKProblem shifted = base;
  shifted.V = Potential::constant(c);
  const auto w0 = fk_weights(base);
  const auto w1 = fk_weights(shifted);
  for (std::size_t i = 0; i < w0.size(); ++i) {
    CHECK(std::abs(w1[i] - std::exp(-c * t) * w0[i]) <= 1e-15 * std::abs(w1[i]) + 1e-300);
  }

  FKKernelProblem kp{TransitionKernel(ManifoldModel::circle(1.0)), Potential::constant(c), Point{0.1},
                     Point{0.6}, t, 16, 200, 6};
  const auto q = fk_kernel(kp);
  CHECK(q.std_error < 1e-15 * q.value);
  CHECK(q.value == doctest::Approx(std::exp(-c * t) * oracle::circle_kernel_fourier(1.0, 0.5, t)).epsilon(1e-12));
}

TEST_CASE("zero potential kernel is the heat kernel with no variance") {
  const Point o{1.0, 0.0, 0.0, 0.0};
  const Point y = hyperboloid_point(0.3, -0.2, 0.4);
  const TransitionKernel h(ManifoldModel::hyperbolic3());
  const auto q = fk_kernel(FKKernelProblem{h, Potential::zero(), o, y, 0.8, 8, 300, 7});
  CHECK(q.value == eval(h, 0.8, y, o));
  CHECK(q.std_error == 0.0);
}

TEST_CASE("weights respect the exp(t |V|) |g| bound") {
  FKProblem prob{TransitionKernel(ManifoldModel::circle(2 * kPi)), Potential::cosine(),
                 [](const Point& x) { return std::sin(x.coords[0]); }, Point{1.0}, 1.5, 16, 2000, 8};
  for (double w : fk_weights(prob)) CHECK(std::abs(w) <= std::exp(1.5));
}

TEST_CASE("cos potential on the circle against the spectral oracle") {
  const auto orc = spectral_oracle(ManifoldModel::circle(2 * kPi), 512, Potential::cosine(), 1.0);
  const double ref = orc.semigroup_at(0, [](double) { return 1.0; });
  CHECK(ref == doctest::Approx(kCosOracle).epsilon(1e-10));
  CHECK(orc.kernel(0, orc.node_index(kPi)) == doctest::Approx(kCosKernelOracle).epsilon(1e-10));

  FKProblem prob{TransitionKernel(ManifoldModel::circle(2 * kPi)), Potential::cosine(), one(), Point{0.0},
                 1.0, 64, 200000, 42, 4};
  const auto e = fk_expectation(prob);
  CHECK(std::abs(e.value - ref) / ref < 0.02);

  const auto q = fk_kernel(FKKernelProblem{TransitionKernel(ManifoldModel::circle(2 * kPi)), Potential::cosine(),
                                           Point{0.0}, Point{kPi}, 1.0, 64, 50000, 43, 4});
  CHECK(std::abs(q.value - kCosKernelOracle) / kCosKernelOracle < 0.02);
}

TEST_CASE("slicing bias shrinks with the step count") {
  const TransitionKernel circ(ManifoldModel::circle(2 * kPi));
  double prev_bias = INFINITY, prev_se = 0.0;
  for (std::size_t n : {4, 16, 64, 256}) {
    FKProblem prob{circ, Potential::cosine(), one(), Point{0.0}, 1.0, n, 20000, 44, 4};
    const auto e = fk_expectation(prob);
    const double bias = std::abs(e.value - kCosOracle);
    CHECK(bias <= prev_bias + 3.0 * std::hypot(e.std_error, prev_se));
    prev_bias = bias;
    prev_se = e.std_error;
  }
}

TEST_CASE("kernel symmetry") {
  const TransitionKernel circ(ManifoldModel::circle(2 * kPi));
  const auto V = Potential::step(0.0, 2.0, 1.5);
  const Point x{0.5}, y{3.0};
  const double t = 0.7;
  const std::size_t n = 32;
  SUBCASE("trapezoid rule is time-reversal symmetric") {
    const auto a = fk_kernel(FKKernelProblem{circ, V, x, y, t, n, 40000, 45, 1, RiemannRule::Trapezoid});
    const auto b = fk_kernel(FKKernelProblem{circ, V, y, x, t, n, 40000, 46, 1, RiemannRule::Trapezoid});
    CHECK(std::abs(a.value - b.value) < 3.0 * std::hypot(a.std_error, b.std_error));
  }
  SUBCASE("right-endpoint rule differs only by the endpoint term") {
    // forward weights see V(y) at the last node, backward ones V(x)
    const auto a = fk_kernel(FKKernelProblem{circ, V, x, y, t, n, 40000, 45});
    const auto b = fk_kernel(FKKernelProblem{circ, V, y, x, t, n, 40000, 46});
    const double endpoint = std::abs(std::expm1(t / n * (V(x) - V(y)))) * std::max(a.value, b.value);
    CHECK(std::abs(a.value - b.value) < 3.0 * std::hypot(a.std_error, b.std_error) + endpoint);
  }
}

TEST_CASE("common random numbers make monotonicity pathwise") {
  const TransitionKernel circ(ManifoldModel::circle(2 * kPi));
  SUBCASE("V1 = 0, V2 = 1") {
    const auto rep = fk_monotonicity_check(circ, Potential::zero(), Potential::constant(1.0), Point{0.0},
                                           one(), 1.0, 8, 500, 50);
    CHECK(rep.pathwise);
    for (std::size_t i = 0; i < 500; ++i) {
      CHECK(rep.weights_first[i] / rep.weights_second[i] == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    }
  }
  SUBCASE("cos against cos + 1/2, kernel mode") {
    const auto rep = fk_monotonicity_check(circ, Potential::cosine(), Potential::cosine().shifted(0.5), Point{0.0},
                                           Point{kPi}, 1.0, 32, 2000, 51, 3);
    CHECK(rep.pathwise);
    CHECK(rep.first.value >= rep.second.value);
  }
  SUBCASE("identical potentials") {
    const auto rep = fk_monotonicity_check(circ, Potential::cosine(), Potential::cosine(), Point{1.0}, one(), 1.0,
                                           16, 500, 52);
    CHECK(rep.weights_first == rep.weights_second);
    CHECK(rep.first.value == rep.second.value);
  }
  SUBCASE("ordering violated") {
    CHECK_THROWS_AS(fk_monotonicity_check(circ, Potential::constant(1.0), Potential::zero(), Point{0.0}, one(), 1.0,
                                          4, 10, 53),
                    DomainError);
  }
}

TEST_CASE("covering sum of Schroedinger kernels") {
  const auto cov = CoveringDescriptor::of(ManifoldModel::circle(2 * kPi));
  SUBCASE("no potential reduces to the theta identity") {
    const auto rep = fk_covering_sum_check(cov, Potential::zero(), Point{0.0}, Point{2.0}, 0.5, 3, 8, 50, 60);
    CHECK(rep.residual < 1e-10);
    CHECK(rep.sigma == 0.0);
    CHECK(rep.pass);
    CHECK(rep.lifted.size() == 7);
  }
  SUBCASE("constant potential scales both sides") {
    const auto rep = fk_covering_sum_check(cov, Potential::constant(0.8), Point{0.0}, Point{2.0}, 0.5, 3, 8, 50, 61);
    CHECK(rep.residual < 1e-10 * rep.base.value);
  }
  SUBCASE("cos potential") {
    const auto rep = fk_covering_sum_check(cov, Potential::cosine(), Point{0.0}, Point{2.0}, 0.5, 3, 32, 20000, 62, 4);
    CHECK(rep.pass);
  }
  SUBCASE("truncation tail is reported") {
    const auto narrow = CoveringDescriptor::of(ManifoldModel::circle(1.0));
    const auto rep = fk_covering_sum_check(narrow, Potential::zero(), Point{0.0}, Point{0.5}, 1.0, 0, 4, 10, 63);
    CHECK(rep.tail_bound > 0.5);
    CHECK(rep.pass);
  }
}

TEST_CASE("spectral oracle") {
  const auto zero = Potential::zero();
  SUBCASE("rows of the free circle propagator sum to one") {
    const auto o = spectral_oracle(ManifoldModel::circle(2 * kPi), 64, zero, 1.0);
    for (Eigen::Index i = 0; i < o.propagator().rows(); ++i) {
      CHECK(std::abs(o.propagator().row(i).sum() - 1.0) < 1e-10);
    }
  }
  SUBCASE("second order convergence to the theta kernel") {
    std::vector<double> errs;
    for (std::size_t M : {64, 128, 256}) {
      const auto o = spectral_oracle(ManifoldModel::circle(2 * kPi), M, zero, 1.0);
      double err = 0.0;
      for (std::size_t j = 0; j < M; ++j) {
        err = std::max(err, std::abs(o.kernel(0, j) - oracle::circle_kernel_fourier(2 * kPi, o.nodes()[j], 1.0)));
      }
      errs.push_back(err);
    }
    for (int i = 0; i < 2; ++i) {
      const double rate = errs[i] / errs[i + 1];
      CHECK(rate > 3.6);
      CHECK(rate < 4.4);
    }
  }
  SUBCASE("constant shift") {
    const auto a = spectral_oracle(ManifoldModel::circle(3.0), 48, Potential::cosine(), 0.7);
    const auto b = spectral_oracle(ManifoldModel::circle(3.0), 48, Potential::cosine().shifted(0.9), 0.7);
    CHECK((b.propagator() - std::exp(-0.9 * 0.7) * a.propagator()).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("dirichlet interval keeps the killed mass") {
    const auto o = spectral_oracle(ManifoldModel::dirichlet_interval(kPi), 255, zero, 1.0);
    const std::size_t mid = o.node_index(kPi / 2);
    CHECK(std::abs(o.propagator().row(mid).sum() - oracle::dirichlet_mass_series(kPi, kPi / 2, 1.0)) < 1e-4);
    CHECK(std::abs(o.kernel(mid, o.node_index(kPi / 4)) - oracle::dirichlet_kernel_series(kPi, kPi / 2, kPi / 4, 1.0)) <
          1e-4);
  }
  SUBCASE("invalid requests") {
    CHECK_THROWS_AS(spectral_oracle(ManifoldModel::circle(1.0), 8, zero, 1.0), DomainError);
    CHECK_THROWS_AS(spectral_oracle(ManifoldModel::euclidean(1), 64, zero, 1.0), DomainError);
    const auto o = spectral_oracle(ManifoldModel::circle(1.0), 16, zero, 1.0);
    CHECK_THROWS_AS(o.node_index(0.03), DomainError);
  }
}
