#pragma once

// Domain primitives shared by every fiflab module: partitions, interpolation
// data, affine contractions and evaluable real functions on an interval.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fiflab/error.hpp"

namespace fiflab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double y) const noexcept { return lo <= y && y <= hi; }
};

struct Point {
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Ordered knots y_0 < y_1 < ... < y_P with P >= 2 intervals.
///
/// Intervals are indexed 0..P-1 (index p is the one-based A_{p+1}). For
/// point location the intervals are half-open [y_{p}, y_{p+1}) except the
/// last one, which is closed.
class Partition {
 public:
  /// Throws NotStrictlyIncreasing (index = first offending position) or
  /// TooFewKnots.
  static Partition make(std::span<const double> abscissae);

  std::span<const double> knots() const noexcept { return knots_; }
  std::size_t intervals() const noexcept { return knots_.size() - 1; }
  Interval domain() const noexcept { return {knots_.front(), knots_.back()}; }
  Interval interval(std::size_t p) const { return {knots_.at(p), knots_.at(p + 1)}; }

  /// Length of interval p relative to the whole domain (contraction ratio of
  /// the affine map onto that interval).
  double ratio(std::size_t p) const { return interval(p).length() / domain().length(); }

  /// Index of the interval containing y. Points within a relative 1e-12 of the
  /// domain are clamped; anything further out throws OutOfDomain.
  std::size_t locate(double y) const;

 private:
  explicit Partition(std::vector<double> knots) : knots_(std::move(knots)) {}

  std::vector<double> knots_;
};

inline Partition make_partition(std::span<const double> abscissae) {
  return Partition::make(abscissae);
}

/// Knot set {(y_p, z_p)} with strictly increasing abscissae and >= 3 points.
class InterpolationData {
 public:
  static InterpolationData make(std::vector<Point> points);

  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_.at(i); }
  const Partition& partition() const noexcept { return partition_; }
  std::vector<double> abscissae() const;
  std::vector<double> ordinates() const;

  /// True when every point lies within `tol` (absolute, vertical) of the line
  /// through the first and last points.
  bool collinear(double tol = 1e-12) const;

 private:
  InterpolationData(std::vector<Point> points, Partition partition)
      : points_(std::move(points)), partition_(std::move(partition)) {}

  std::vector<Point> points_;
  Partition partition_;
};

/// Vertical scaling factors alpha_1..alpha_P, each with |alpha_p| < 1.
class ScalingVector {
 public:
  static ScalingVector make(std::vector<double> alphas);
  static ScalingVector uniform(double alpha, std::size_t count);

  std::span<const double> values() const noexcept { return alphas_; }
  std::size_t size() const noexcept { return alphas_.size(); }
  double operator[](std::size_t p) const { return alphas_.at(p); }

  double sup_norm() const noexcept;
  double abs_sum() const noexcept;
  bool is_zero() const noexcept { return sup_norm() == 0.0; }

 private:
  explicit ScalingVector(std::vector<double> alphas) : alphas_(std::move(alphas)) {}

  std::vector<double> alphas_;
};

/// y -> a*y + c, a contractive homeomorphism of `domain` onto `codomain`.
/// Domain endpoints map to codomain endpoints exactly.
class AffineMap {
 public:
  double slope() const noexcept { return slope_; }
  double intercept() const noexcept { return intercept_; }
  const Interval& domain() const noexcept { return domain_; }
  const Interval& codomain() const noexcept { return codomain_; }

  double operator()(double y) const noexcept;
  double inverse(double y) const noexcept;

 private:
  friend AffineMap affine_from_endpoints(Interval, Interval);
  AffineMap(double slope, double intercept, Interval domain, Interval codomain)
      : slope_(slope), intercept_(intercept), domain_(domain), codomain_(codomain) {}

  double slope_;
  double intercept_;
  Interval domain_;
  Interval codomain_;
};

/// The unique increasing affine map with L(domain.lo) = codomain.lo and
/// L(domain.hi) = codomain.hi. Throws DegenerateInterval or NotContractive.
AffineMap affine_from_endpoints(Interval domain, Interval codomain);

/// A real function on an interval, either a closed-form callable or a
/// piecewise-linear knot/value table.
class ScalarFunction {
 public:
  using Callable = std::function<double(double)>;

  /// `defined_on_reals` marks callables that may be evaluated outside
  /// `domain` through evaluate_unchecked().
  static ScalarFunction closed_form(Interval domain, Callable body,
                                    std::string description,
                                    bool defined_on_reals = false);
  static ScalarFunction piecewise_linear(std::vector<double> knots,
                                         std::vector<double> values);

  /// Throws OutOfDomain for y outside the domain (beyond a relative 1e-12).
  double operator()(double y) const;
  double evaluate_unchecked(double y) const;

  const Interval& domain() const noexcept { return domain_; }
  const std::string& description() const noexcept { return description_; }
  bool defined_on_reals() const noexcept { return defined_on_reals_; }
  bool is_piecewise_linear() const noexcept { return !knots_.empty(); }
  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> knot_values() const noexcept { return values_; }

 private:
  ScalarFunction() = default;
  double eval_table(double y) const;

  Interval domain_;
  std::string description_;
  bool defined_on_reals_ = false;
  std::shared_ptr<const Callable> body_;
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Piecewise-linear function through the data points.
ScalarFunction linear_interpolant(const InterpolationData& data);

/// b(y) = g(psi(y)) with psi(y) = y_0 + (y - y_0)^2 / (y_P - y_0). psi maps the
/// domain onto itself fixing both endpoints; on [0, 1] it is y^2.
ScalarFunction square_base(const ScalarFunction& g, Interval domain);

/// b(y) = g(y^2) literally. Requires g to be defined at y^2 for every y in the
/// domain: either g is defined on all reals or its domain covers the squares.
ScalarFunction literal_square_base(const ScalarFunction& g, Interval domain);

/// Values on a uniform dyadic refinement of a partition: each interval is cut
/// into 2^depth equal cells, so node count is P * 2^depth + 1 and every
/// partition knot is a node.
class SampledFunction {
 public:
  SampledFunction(Partition partition, unsigned depth, std::vector<double> values);

  static SampledFunction sample(const Partition& partition, unsigned depth,
                                const ScalarFunction& f);

  const Partition& partition() const noexcept { return partition_; }
  unsigned depth() const noexcept { return depth_; }
  std::size_t cells_per_interval() const noexcept { return std::size_t{1} << depth_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> values() const noexcept { return values_; }
  double node(std::size_t i) const { return nodes_.at(i); }
  double value(std::size_t i) const { return values_.at(i); }

  /// Node index of partition knot k.
  std::size_t knot_node(std::size_t k) const noexcept { return k * cells_per_interval(); }
  /// Interval containing node i (nodes on a shared knot belong to the right
  /// interval, the final node to the last one).
  std::size_t interval_of_node(std::size_t i) const noexcept;

  /// Linear interpolation between neighbouring nodes.
  double interpolate(double y) const;

  bool same_grid(const SampledFunction& other) const noexcept;

 private:
  Partition partition_;
  unsigned depth_;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// Node abscissae of the dyadic grid of the given depth.
std::vector<double> dyadic_grid(const Partition& partition, unsigned depth);

}  // namespace fiflab
