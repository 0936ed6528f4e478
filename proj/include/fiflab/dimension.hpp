#pragma once

// Box-counting dimension of FIF graphs: the analytic value from the
// Moran-type equation  sum_p |alpha_p| a_p^(D-1) = 1  (D = 1 when
// sum_p |alpha_p| <= 1), and empirical estimates by box counting.
//
// The analytic formula assumes non-collinear data and Lipschitz g and b; the
// Lipschitz hypothesis is not checked.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fiflab/core.hpp"
#include "fiflab/ifs.hpp"

namespace fiflab {

enum class DimensionMethod { analytic, boxcount };
std::string_view to_string(DimensionMethod method) noexcept;

struct ScaleCount {
  int k = 0;             // epsilon = 2^-k (0 when the epsilon is not dyadic)
  double epsilon = 0.0;
  std::size_t count = 0;
};

struct DimensionResult {
  DimensionMethod method = DimensionMethod::analytic;
  double value = 1.0;
  // analytic
  std::optional<double> residual;   // M(D) - 1
  std::size_t iterations = 0;       // bisection steps
  // boxcount
  std::vector<ScaleCount> scales;
  std::optional<double> slope;
  std::optional<double> r2;
  std::vector<std::string> warnings;
};

/// Solves sum_p |alpha_p| ratios_p^(D-1) = 1 by bisection. Throws
/// InvalidRatios (a ratio outside (0,1)) or LengthMismatch.
DimensionResult analytic_box_dimension(const ScalingVector& alpha, std::span<const double> ratios);

/// Ratios are the interval lengths relative to the domain length.
DimensionResult analytic_box_dimension(const ScalingVector& alpha, const Partition& partition);

/// Analytic dimension with the collinearity guard: collinear data yield
/// D = 1 and a warning.
DimensionResult fif_box_dimension(const InterpolationData& data, const ScalingVector& alpha);

/// Number of occupied cells [i*eps, (i+1)*eps) x [j*eps, (j+1)*eps) for each
/// epsilon. Points on the top/right boundary are clamped into the last cell.
/// The cloud is expected in the unit square; coordinates outside are clamped.
std::vector<ScaleCount> box_count(const PointCloud& cloud, std::span<const double> epsilons);

/// Least-squares slope of log N(eps) against log(1/eps) over eps = 2^-k,
/// k = k_min..k_max, after normalizing the cloud to the unit square. Throws
/// EmptyCloud or DegenerateRange (fewer than 4 scales).
DimensionResult estimate_box_dimension(const PointCloud& cloud, int k_min = 3, int k_max = 9);

}  // namespace fiflab
