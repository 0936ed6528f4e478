#include "fiflab/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "fiflab/parallel.hpp"

namespace fiflab {

namespace {

constexpr double kJoinTol = 1e-10;

}  // namespace

// ---------------------------------------------------------------------------
// PointCloud

BoundingBox PointCloud::bounds() const {
  if (points_.empty()) throw Error(ErrorCode::EmptyCloud, "empty point cloud");
  BoundingBox box{points_[0].y, points_[0].y, points_[0].z, points_[0].z};
  for (const auto& p : points_) {
    box.y_lo = std::min(box.y_lo, p.y);
    box.y_hi = std::max(box.y_hi, p.y);
    box.z_lo = std::min(box.z_lo, p.z);
    box.z_hi = std::max(box.z_hi, p.z);
  }
  return box;
}

PointCloud PointCloud::normalized() const {
  const BoundingBox box = bounds();
  const double wy = box.y_hi - box.y_lo;
  const double wz = box.z_hi - box.z_lo;
  std::vector<Point> out;
  out.reserve(points_.size());
  for (const auto& p : points_) {
    Point q{wy > 0.0 ? (p.y - box.y_lo) / wy : 0.0, wz > 0.0 ? (p.z - box.z_lo) / wz : 0.0};
    q.y = std::clamp(q.y, 0.0, 1.0);
    q.z = std::clamp(q.z, 0.0, 1.0);
    out.push_back(q);
  }
  return PointCloud(std::move(out));
}

PointCloud data_cloud(const InterpolationData& data) {
  return PointCloud(std::vector<Point>(data.points().begin(), data.points().end()));
}

// ---------------------------------------------------------------------------
// IfsSystem

ScalarFunction IfsSystem::q_function(std::size_t p) const {
  const auto self = *this;
  return ScalarFunction::closed_form(
      domain(), [self, p](double y) { return self.q(p, y); }, "q_" + std::to_string(p + 1));
}

IfsSystem build_ifs(const InterpolationData& data, const ScalingVector& alpha,
                    const ScalarFunction& g, const ScalarFunction& b) {
  const Partition& part = data.partition();
  const std::size_t P = part.intervals();
  if (alpha.size() != P)
    throw Error(ErrorCode::LengthMismatch, "scaling vector has " + std::to_string(alpha.size()) +
                                               " entries for " + std::to_string(P) +
                                               " intervals");

  for (std::size_t k = 0; k < data.size(); ++k) {
    const double gy = g(data[k].y);
    if (!(std::abs(gy - data[k].z) <= kJoinTol))
      throw Error(ErrorCode::SeedMismatch,
                  "seed misses data point " + std::to_string(k) + " by " +
                      std::to_string(std::abs(gy - data[k].z)),
                  k);
  }

  const Interval dom = part.domain();
  for (double y : {dom.lo, dom.hi})
    if (!(std::abs(b(y) - g(y)) <= kJoinTol))
      throw Error(ErrorCode::BaseEndpointMismatch,
                  "base differs from seed at domain endpoint " + std::to_string(y));

  if (!alpha.is_zero()) {
    constexpr int kProbe = 1024;
    bool differs = false;
    for (int i = 0; i <= kProbe && !differs; ++i) {
      const double y = i == kProbe ? dom.hi : dom.lo + dom.length() * i / kProbe;
      differs = std::abs(b(y) - g(y)) > 1e-12;
    }
    if (!differs)
      throw Error(ErrorCode::BaseEqualsSeed, "base function equals the seed; g^alpha would be g");
  }

  std::vector<AffineMap> maps;
  maps.reserve(P);
  for (std::size_t p = 0; p < P; ++p) maps.push_back(affine_from_endpoints(dom, part.interval(p)));

  IfsSystem ifs(data, std::move(maps), alpha, g, b);

  const Point first = data[0];
  const Point last = data[data.size() - 1];
  for (std::size_t p = 0; p < P; ++p) {
    const Point lo = ifs.w(p, first);
    const Point hi = ifs.w(p, last);
    if (!(std::abs(lo.z - data[p].z) <= kJoinTol && std::abs(hi.z - data[p + 1].z) <= kJoinTol &&
          lo.y == data[p].y && hi.y == data[p + 1].y))
      throw Error(ErrorCode::BaseEndpointMismatch,
                  "join condition fails for map " + std::to_string(p + 1), p);
  }
  return ifs;
}

// ---------------------------------------------------------------------------
// Rendering

PointCloud hutchinson_step(const IfsSystem& ifs, const PointCloud& cloud) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "Hutchinson step on an empty cloud");
  std::vector<Point> out;
  out.reserve(cloud.size() * ifs.size());
  for (std::size_t p = 0; p < ifs.size(); ++p)
    for (const Point& pt : cloud.points()) out.push_back(ifs.w(p, pt));
  return PointCloud(std::move(out));
}

PointCloud deterministic_attractor(const IfsSystem& ifs, const PointCloud& seed,
                                   std::size_t iterations, std::size_t cap) {
  if (seed.empty()) throw Error(ErrorCode::EmptyCloud, "empty seed cloud");
  if (iterations < 1 || cap < 1)
    throw Error(ErrorCode::DegenerateRange, "need iterations >= 1 and cap >= 1");
  PointCloud cloud = seed;
  for (std::size_t it = 0; it < iterations; ++it) {
    cloud = hutchinson_step(ifs, cloud);
    if (cloud.size() > cap) {
      const std::size_t stride = (cloud.size() + cap - 1) / cap;
      std::vector<Point> kept;
      kept.reserve(cloud.size() / stride + 1);
      const auto pts = cloud.points();
      for (std::size_t i = 0; i < pts.size(); i += stride) kept.push_back(pts[i]);
      cloud = PointCloud(std::move(kept));
    }
  }
  return cloud;
}

PointCloud chaos_game(const IfsSystem& ifs, std::size_t n_points, std::size_t burn_in,
                      std::uint64_t seed, std::span<const double> weights) {
  if (n_points < 1) throw Error(ErrorCode::DegenerateRange, "chaos game needs n_points >= 1");
  const std::size_t P = ifs.size();
  std::vector<double> cumulative;
  if (!weights.empty()) {
    if (weights.size() != P)
      throw Error(ErrorCode::LengthMismatch, "one weight per map required");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw Error(ErrorCode::DegenerateRange, "weights must be nonnegative");
      total += w;
      cumulative.push_back(total);
    }
    if (!(total > 0.0)) throw Error(ErrorCode::DegenerateRange, "weights sum to zero");
    for (double& c : cumulative) c /= total;
  }

  std::mt19937_64 rng(seed);
  // Draws are done with plain integer arithmetic rather than <random>
  // distributions so renders are identical across standard libraries.
  auto pick = [&]() -> std::size_t {
    const std::uint64_t r = rng();
    if (cumulative.empty())
      return static_cast<std::size_t>(((r >> 32) * P) >> 32);
    const double u = static_cast<double>(r >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), P - 1);
  };

  Point pt = ifs.data()[0];
  for (std::size_t i = 0; i < burn_in; ++i) pt = ifs.w(pick(), pt);
  std::vector<Point> out;
  out.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    pt = ifs.w(pick(), pt);
    out.push_back(pt);
  }
  return PointCloud(std::move(out));
}

// ---------------------------------------------------------------------------
// Hausdorff distance

double directed_hausdorff(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyCloud, "Hausdorff distance of an empty cloud");
  std::vector<Point> target(b.points().begin(), b.points().end());
  std::sort(target.begin(), target.end(),
            [](const Point& u, const Point& v) { return u.y != v.y ? u.y < v.y : u.z < v.z; });
  const auto src = a.points();

  // Exact nearest-neighbour search sweeping outward in y from the insertion
  // point; a sweep stops once the y gap alone exceeds the best distance, or
  // once the point is known not to raise the running maximum.
  std::vector<double> chunk_max(worker_count(), 0.0);
  parallel_chunks(src.size(), [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    double worst = 0.0;  // squared
    for (std::size_t i = begin; i < end; ++i) {
      const Point& p = src[i];
      const auto mid = std::lower_bound(target.begin(), target.end(), p.y,
                                        [](const Point& u, double y) { return u.y < y; });
      double best = std::numeric_limits<double>::infinity();
      auto consider = [&](const Point& q) {
        const double dy = q.y - p.y;
        const double dz = q.z - p.z;
        best = std::min(best, dy * dy + dz * dz);
      };
      auto right = mid;
      auto left = mid;
      bool go_right = right != target.end();
      bool go_left = left != target.begin();
      while ((go_right || go_left) && best > worst) {
        if (go_right) {
          const double dy = right->y - p.y;
          if (dy * dy > best) {
            go_right = false;
          } else {
            consider(*right);
            go_right = ++right != target.end();
          }
        }
        if (go_left) {
          const double dy = p.y - std::prev(left)->y;
          if (dy * dy > best) {
            go_left = false;
          } else {
            consider(*std::prev(left));
            go_left = --left != target.begin();
          }
        }
      }
      worst = std::max(worst, best);
    }
    chunk_max[chunk] = worst;
  });
  return std::sqrt(*std::max_element(chunk_max.begin(), chunk_max.end()));
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace fiflab
