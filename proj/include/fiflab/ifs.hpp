#pragma once

// The iterated function system {A x R; w_p} built from interpolation data,
// a scaling vector, a seed function g and a base function b:
//
//   w_p(y, z) = (L_p(y), F_p(y, z)),   F_p(y, z) = alpha_p * z + q_p(y),
//   q_p(y)    = g(L_p(y)) - alpha_p * b(y),
//
// together with attractor renderers and the Hausdorff distance between
// finite point clouds.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fiflab/core.hpp"

namespace fiflab {

struct BoundingBox {
  double y_lo = 0.0;
  double y_hi = 0.0;
  double z_lo = 0.0;
  double z_hi = 0.0;
};

/// A finite multiset of points standing in for a compact subset of the plane.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point> points) : points_(std::move(points)) {}

  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_.at(i); }
  void push_back(Point p) { points_.push_back(p); }
  void reserve(std::size_t n) { points_.reserve(n); }

  /// Throws EmptyCloud.
  BoundingBox bounds() const;

  /// Affine rescale of the bounding box onto [0,1]^2. A degenerate axis maps
  /// to 0.
  PointCloud normalized() const;

  std::vector<Point> release() && { return std::move(points_); }

 private:
  std::vector<Point> points_;
};

PointCloud data_cloud(const InterpolationData& data);

class IfsSystem {
 public:
  const InterpolationData& data() const noexcept { return data_; }
  std::span<const AffineMap> maps() const noexcept { return maps_; }
  const AffineMap& map(std::size_t p) const { return maps_.at(p); }
  const ScalingVector& alpha() const noexcept { return alpha_; }
  const ScalarFunction& seed() const noexcept { return g_; }
  const ScalarFunction& base() const noexcept { return b_; }
  std::size_t size() const noexcept { return maps_.size(); }
  Interval domain() const noexcept { return data_.partition().domain(); }

  double q(std::size_t p, double y) const { return g_(maps_[p](y)) - alpha_[p] * b_(y); }
  double F(std::size_t p, double y, double z) const { return alpha_[p] * z + q(p, y); }
  Point w(std::size_t p, Point pt) const { return {maps_[p](pt.y), F(p, pt.y, pt.z)}; }

  /// q_p as a function on the whole domain.
  ScalarFunction q_function(std::size_t p) const;

 private:
  friend IfsSystem build_ifs(const InterpolationData&, const ScalingVector&,
                             const ScalarFunction&, const ScalarFunction&);
  IfsSystem(InterpolationData data, std::vector<AffineMap> maps, ScalingVector alpha,
            ScalarFunction g, ScalarFunction b)
      : data_(std::move(data)),
        maps_(std::move(maps)),
        alpha_(std::move(alpha)),
        g_(std::move(g)),
        b_(std::move(b)) {}

  InterpolationData data_;
  std::vector<AffineMap> maps_;
  ScalingVector alpha_;
  ScalarFunction g_;
  ScalarFunction b_;
};

/// Assembles the system and verifies its join conditions.
///
/// Errors: LengthMismatch (alpha size != P), SeedMismatch (g misses a data
/// point by more than 1e-10; index = knot), BaseEndpointMismatch (b differs
/// from g at a domain endpoint), BaseEqualsSeed (b == g on a 1025-point probe
/// while alpha is not identically zero).
IfsSystem build_ifs(const InterpolationData& data, const ScalingVector& alpha,
                    const ScalarFunction& g, const ScalarFunction& b);

/// Union of the images of the cloud under every w_p, grouped by map. Throws
/// EmptyCloud.
PointCloud hutchinson_step(const IfsSystem& ifs, const PointCloud& cloud);

/// `iterations` Hutchinson steps from `seed`; after each step a cloud larger
/// than `cap` is thinned by keeping every k-th point, k = ceil(size / cap).
PointCloud deterministic_attractor(const IfsSystem& ifs, const PointCloud& seed,
                                   std::size_t iterations, std::size_t cap);

/// Random iteration from (y_0, z_0): each step applies a map drawn uniformly
/// (or by `weights` when given) from a 64-bit Mersenne Twister seeded with
/// `seed`. The first `burn_in` points are discarded.
PointCloud chaos_game(const IfsSystem& ifs, std::size_t n_points, std::size_t burn_in,
                      std::uint64_t seed, std::span<const double> weights = {});

/// sup over a of the Euclidean distance to the nearest point of b.
double directed_hausdorff(const PointCloud& a, const PointCloud& b);

/// Exact Hausdorff distance (max of both directed distances). Throws
/// EmptyCloud.
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

}  // namespace fiflab
