#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace pathkernel {

class ManifoldModel;

namespace model {
struct Euclidean {
  int dim = 1;
};
/// Hyperboloid model {x0^2 - x1^2 - x2^2 - x3^2 = 1, x0 >= 1}.
struct Hyperbolic3 {};
struct FlatTorus {
  std::vector<double> periods;
};
struct Circle {
  double circumference = 1.0;
};
struct DirichletInterval {
  double length = 1.0;
};
/// One-point compactification: adds a cemetery state carrying lost mass.
struct Compactified {
  std::shared_ptr<const ManifoldModel> base;
};
}  // namespace model

/// Immutable tagged descriptor of a supported model space.
class ManifoldModel {
 public:
  using Variant = std::variant<model::Euclidean, model::Hyperbolic3, model::FlatTorus,
                               model::Circle, model::DirichletInterval, model::Compactified>;

  static ManifoldModel euclidean(int dim);
  static ManifoldModel hyperbolic3();
  static ManifoldModel flat_torus(std::vector<double> periods);
  static ManifoldModel circle(double circumference);
  static ManifoldModel dirichlet_interval(double length);
  static ManifoldModel compactified(const ManifoldModel& base);

  const Variant& variant() const { return v_; }

  template <class T>
  bool is() const { return std::holds_alternative<T>(v_); }
  template <class T>
  const T& as() const { return std::get<T>(v_); }

  /// Intrinsic dimension.
  int dim() const;
  /// Number of chart coordinates stored in a Point (4 for the hyperboloid).
  int coord_count() const;
  /// Periods of the deck lattice for FlatTorus/Circle, empty otherwise.
  std::vector<double> periods() const;
  bool is_periodic() const { return is<model::FlatTorus>() || is<model::Circle>(); }
  /// The wrapped model for Compactified, *this otherwise.
  const ManifoldModel& interior() const;

  std::string name() const;

  friend bool operator==(const ManifoldModel& a, const ManifoldModel& b);

 private:
  explicit ManifoldModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct Point {
  std::vector<double> coords;
  bool cemetery = false;

  Point() = default;
  Point(std::initializer_list<double> c) : coords(c) {}
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}

  static Point cemetery_point() {
    Point p;
    p.cemetery = true;
    return p;
  }

  friend bool operator==(const Point&, const Point&) = default;
};

/// Throws DomainError unless p is a valid point of m.
void validate_point(const ManifoldModel& m, const Point& p);

/// Origin of the chart: zero vector, (1,0,0,0) on H3, the midpoint of an interval.
Point origin(const ManifoldModel& m);

/// Hyperboloid point with the given spatial part (x1,x2,x3).
Point hyperboloid_point(double x1, double x2, double x3);

double distance(const ManifoldModel& m, const Point& x, const Point& y);

/// Exponential map on H3. `direction` is a unit vector in the tangent chart at
/// `base`, identified with R^3 via the Lorentz boost taking (1,0,0,0) to base.
Point exp_point(const ManifoldModel& m, const Point& base, const std::vector<double>& direction,
                double r);

/// Normal Riemannian covering R^n -> R^n / lattice of a torus or circle.
struct CoveringDescriptor {
  ManifoldModel base;
  ManifoldModel total;
  std::vector<double> periods;

  static CoveringDescriptor of(const ManifoldModel& periodic_base);
};

Point project_point(const CoveringDescriptor& cov, const Point& lifted);

/// Preimage of x nearest to anchor; ties go to the smaller lattice coefficient.
Point lift_point_near(const CoveringDescriptor& cov, const Point& x, const Point& anchor);

/// Lattice coefficients k with lifted = representative + sum k_i L_i e_i.
std::vector<long long> lattice_coefficients(const CoveringDescriptor& cov, const Point& lifted);

}  // namespace pathkernel
