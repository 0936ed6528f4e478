#include "fiflab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace fiflab {

std::string_view to_string(DimensionMethod method) noexcept {
  return method == DimensionMethod::analytic ? "analytic" : "boxcount";
}

namespace {

double moran_sum(std::span<const double> alpha, std::span<const double> ratios, double d) {
  double s = 0.0;
  for (std::size_t p = 0; p < alpha.size(); ++p)
    s += std::abs(alpha[p]) * std::pow(ratios[p], d - 1.0);
  return s;
}

}  // namespace

DimensionResult analytic_box_dimension(const ScalingVector& alpha,
                                       std::span<const double> ratios) {
  if (ratios.size() != alpha.size())
    throw Error(ErrorCode::LengthMismatch, "one ratio per scaling factor required");
  for (std::size_t p = 0; p < ratios.size(); ++p)
    if (!(ratios[p] > 0.0 && ratios[p] < 1.0))
      throw Error(ErrorCode::InvalidRatios,
                  "ratio " + std::to_string(p + 1) + " outside (0, 1)", p);

  DimensionResult r;
  r.method = DimensionMethod::analytic;
  if (alpha.abs_sum() <= 1.0) {
    r.value = 1.0;
    return r;
  }

  // M(D) decreases strictly from M(1) = sum |alpha| > 1 towards 0.
  const auto a = alpha.values();
  double lo = 1.0;
  double hi = 2.0;
  while (moran_sum(a, ratios, hi) >= 1.0 && hi < 1e6) hi = 1.0 + 2.0 * (hi - 1.0);
  std::size_t it = 0;
  for (; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (moran_sum(a, ratios, mid) > 1.0) lo = mid;
    else hi = mid;
  }
  const double res_lo = moran_sum(a, ratios, lo) - 1.0;
  const double res_hi = moran_sum(a, ratios, hi) - 1.0;
  const bool take_lo = std::abs(res_lo) <= std::abs(res_hi);
  r.value = take_lo ? lo : hi;
  r.residual = take_lo ? res_lo : res_hi;
  r.iterations = it;
  return r;
}

DimensionResult analytic_box_dimension(const ScalingVector& alpha, const Partition& partition) {
  std::vector<double> ratios;
  for (std::size_t p = 0; p < partition.intervals(); ++p) ratios.push_back(partition.ratio(p));
  return analytic_box_dimension(alpha, ratios);
}

DimensionResult fif_box_dimension(const InterpolationData& data, const ScalingVector& alpha) {
  if (data.collinear()) {
    if (alpha.size() != data.partition().intervals())
      throw Error(ErrorCode::LengthMismatch, "one scaling factor per interval required");
    DimensionResult r;
    r.value = 1.0;
    r.warnings.push_back("data are collinear: the attractor is a line segment, D = 1");
    return r;
  }
  return analytic_box_dimension(alpha, data.partition());
}

std::vector<ScaleCount> box_count(const PointCloud& cloud, std::span<const double> epsilons) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "box count of an empty cloud");
  std::vector<ScaleCount> out;
  std::vector<std::uint64_t> keys(cloud.size());
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps <= 1.0))
      throw Error(ErrorCode::DegenerateRange, "box size must lie in (0, 1]");
    const auto cells = static_cast<std::uint64_t>(std::ceil(1.0 / eps - 1e-9));
    auto index = [&](double v) {
      const double c = std::floor(std::clamp(v, 0.0, 1.0) / eps);
      return std::min(static_cast<std::uint64_t>(c), cells - 1);
    };
    std::size_t i = 0;
    for (const Point& p : cloud.points()) keys[i++] = index(p.y) * cells + index(p.z);
    std::sort(keys.begin(), keys.end());
    const auto count = static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
    const double k = -std::log2(eps);
    const int ki = k == std::round(k) ? static_cast<int>(k) : 0;
    out.push_back({ki, eps, count});
  }
  return out;
}

DimensionResult estimate_box_dimension(const PointCloud& cloud, int k_min, int k_max) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "box dimension of an empty cloud");
  if (k_min < 0 || k_max - k_min < 3 || k_max > 30)
    throw Error(ErrorCode::DegenerateRange, "need 0 <= k_min and k_max - k_min >= 3 (k_max <= 30)");

  std::vector<double> eps;
  for (int k = k_min; k <= k_max; ++k) eps.push_back(std::ldexp(1.0, -k));
  DimensionResult r;
  r.method = DimensionMethod::boxcount;
  r.scales = box_count(cloud.normalized(), eps);

  const double recommended = 10.0 * std::pow(4.0, k_max);
  if (static_cast<double>(cloud.size()) < recommended)
    r.warnings.push_back("cloud has " + std::to_string(cloud.size()) +
                         " points; at least 10*4^k_max are recommended");

  // Ordinary least squares of log N on log(1/eps).
  const double n = static_cast<double>(r.scales.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& s : r.scales) {
    const double x = std::log(1.0 / s.epsilon);
    const double y = std::log(static_cast<double>(s.count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double cov = sxy - sx * sy / n;
  const double var_x = sxx - sx * sx / n;
  const double var_y = syy - sy * sy / n;
  const double slope = cov / var_x;
  r.slope = slope;
  r.r2 = var_y > 0.0 ? cov * cov / (var_x * var_y) : 1.0;
  r.value = slope;
  return r;
}

}  // namespace fiflab
