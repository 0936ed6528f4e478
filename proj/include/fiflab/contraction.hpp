#pragma once

// Contraction moduli, the two reference self-maps, grid-scan checkers for the
// Banach, phi-contraction and Suzuki-type generalized phi-contraction
// conditions, and Picard iteration.
//
// The checkers are falsification tools: a clean scan means no violating pair
// exists on the sampled grid at the recorded resolution, nothing more.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fiflab/core.hpp"

namespace fiflab::contraction {

/// Continuous five-branch map: 0 for y <= 4, 2y - 8 on [4,5], 9/2 - y/2 on
/// [5,7], 8 - y on [7,8], 0 for y >= 8.
double example_T_continuous(double y) noexcept;

/// Discrete map: 4 at 5, 0 at 7, 1 elsewhere. Throws NotInCarrier for
/// negative input.
long long example_T_discrete(long long y);

double phi_half(double t) noexcept;
/// t^2/2 for t <= 1, t - 1/3 for t > 1.
double phi_piecewise(double t) noexcept;

/// A comparison function phi on [0, inf) with phi(t) < t. Construction probes
/// 241 log-spaced points in [1e-9, 1e3] and throws InvalidModulus on the
/// first violation.
class ContractionModulus {
 public:
  ContractionModulus(std::function<double(double)> body, std::string name);

  static ContractionModulus half();
  static ContractionModulus piecewise();

  double operator()(double t) const { return body_(t); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::function<double(double)> body_;
  std::string name_;
};

/// Probe points used by ContractionModulus validation.
std::vector<double> modulus_probe_grid();

/// A self-map of a subset of the real line with metric |y - z|. The carrier is
/// either a closed interval or an explicit finite point set.
class MetricSelfMap {
 public:
  static MetricSelfMap on_interval(Interval carrier, std::function<double(double)> body,
                                   std::string name);
  static MetricSelfMap on_points(std::vector<double> carrier,
                                 std::function<double(double)> body, std::string name);

  double operator()(double y) const { return body_(y); }
  const std::string& name() const noexcept { return name_; }
  bool finite_carrier() const noexcept { return !points_.empty(); }
  const Interval& interval() const noexcept { return interval_; }
  const std::vector<double>& points() const noexcept { return points_; }

  /// Interval carriers accept points within 1e-12; finite carriers require an
  /// exact member.
  bool in_carrier(double y) const noexcept;

 private:
  MetricSelfMap() = default;

  Interval interval_{};
  std::vector<double> points_;
  std::function<double(double)> body_;
  std::string name_;
};

MetricSelfMap t_continuous_map(Interval carrier = {0.0, 12.0});
MetricSelfMap t_discrete_map(std::vector<double> carrier);

/// {0, 1, 2, ..., max}: closed under example_T_discrete for max >= 4.
std::vector<double> discrete_carrier_extended(long long max = 99);
/// {0, 2} together with the odd numbers up to max. Not closed under the map
/// (5 -> 4).
std::vector<double> discrete_carrier_odd(long long max = 99);

struct GridSpec {
  double delta = 0.01;                    // spacing on interval carriers
  std::size_t max_pairs = 4'000'000;      // scan budget; delta coarsens above it
};

enum class CheckMode { banach, phi, suzuki };
enum class Verdict { no_counterexample_found, counterexamples_found };

std::string_view to_string(CheckMode mode) noexcept;
std::string_view to_string(Verdict verdict) noexcept;

struct Witness {
  double y = 0.0;
  double z = 0.0;
  double lhs = 0.0;    // d(Ty, Tz)
  double rhs = 0.0;    // the bound it must not exceed
  double slack = 0.0;  // lhs - rhs, positive for a violation
};

struct CheckReport {
  CheckMode mode = CheckMode::banach;
  Verdict verdict = Verdict::no_counterexample_found;
  std::vector<Witness> witnesses;  // sorted by (y, z)
  std::size_t sample_size = 0;     // pairs examined
  std::size_t sample_points = 0;
  double resolution = 0.0;         // effective grid spacing, 0 for finite carriers
  double tolerance = 0.0;
  std::vector<double> carrier_escapes;  // sampled y whose image leaves the carrier

  bool clean() const noexcept { return verdict == Verdict::no_counterexample_found; }
  const Witness* find(double y, double z) const noexcept;
};

/// Sample points of the carrier for a scan; `ordered` selects the pair-count
/// formula used against the budget. Returns the effective spacing through
/// `resolution`.
std::vector<double> sample_carrier(const MetricSelfMap& map, const GridSpec& grid,
                                   bool ordered, double& resolution);

/// Pairs y < z with d(Ty,Tz) > ratio_bound * d(y,z) + tol.
CheckReport check_banach(const MetricSelfMap& map, const GridSpec& grid,
                         double ratio_bound, double tol = 1e-9);

/// Pairs y < z with d(Ty,Tz) > phi(d(y,z)) + tol.
CheckReport check_phi(const MetricSelfMap& map, const ContractionModulus& phi,
                      const GridSpec& grid, double tol = 1e-9);

/// Ordered pairs (y, z), y != z, with d(y,Ty)/2 <= d(y,z) and
/// d(Ty,Tz) > phi(max{d(y,z), d(y,Ty), d(z,Tz)}) + tol.
CheckReport check_suzuki(const MetricSelfMap& map, const ContractionModulus& phi,
                         const GridSpec& grid, double tol = 1e-9);

struct FixedPointResult {
  double point = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;  // d(point, T(point))
  bool converged = false;
};

/// Iterates y <- T(y) until consecutive iterates are within tol or max_iter
/// steps were taken. Throws NotInCarrier if start is outside the carrier.
FixedPointResult picard_fixed_point(const MetricSelfMap& map, double start, double tol,
                                    std::size_t max_iter);

}  // namespace fiflab::contraction
