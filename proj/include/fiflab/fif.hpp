#pragma once

// alpha-fractal interpolation functions as fixed points of the
// Read-Bajraktarevic operator
//
//   (T h)(y) = F_p(L_p^{-1}(y), h(L_p^{-1}(y)))
//            = g(y) + alpha_p * (h - b)(L_p^{-1}(y)),   y in A_p,
//
// iterated on a dyadic grid with linear interpolation for off-node reads.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fiflab/core.hpp"
#include "fiflab/ifs.hpp"

namespace fiflab {

struct FifOptions {
  unsigned depth = 10;           // 2^depth cells per interval, >= 6
  double tol = 1e-10;            // stop on sup-norm step <= tol
  std::size_t max_iter = 200;
  bool require_convergence = true;  // false returns a truncated build instead of throwing
};

class FractalFunction {
 public:
  const IfsSystem& system() const noexcept { return system_; }
  const SampledFunction& samples() const noexcept { return samples_; }
  unsigned depth() const noexcept { return samples_.depth(); }
  std::size_t iterations_used() const noexcept { return sup_steps_.size(); }
  /// Sup-norm distance between the last two iterates.
  double final_residual() const noexcept { return sup_steps_.empty() ? 0.0 : sup_steps_.back(); }
  double tolerance() const noexcept { return tol_; }
  bool converged() const noexcept { return converged_; }
  /// Sup-norm distance between consecutive iterates, one entry per RB step.
  std::span<const double> sup_steps() const noexcept { return sup_steps_; }

 private:
  friend FractalFunction construct_alpha_fif(const IfsSystem&, const FifOptions&);
  FractalFunction(IfsSystem system, SampledFunction samples, std::vector<double> steps,
                  double tol, bool converged)
      : system_(std::move(system)),
        samples_(std::move(samples)),
        sup_steps_(std::move(steps)),
        tol_(tol),
        converged_(converged) {}

  IfsSystem system_;
  SampledFunction samples_;
  std::vector<double> sup_steps_;
  double tol_;
  bool converged_;
};

/// One application of the RB operator on the grid of `h`. Throws GridMismatch
/// when h is not sampled on a dyadic refinement of the system's partition.
SampledFunction rb_apply(const IfsSystem& system, const SampledFunction& h);

/// Iterates rb_apply from the samples of g until the sup-norm step is at most
/// options.tol. Throws NoConvergence when max_iter is exhausted (unless
/// require_convergence is false) and DegenerateRange for depth < 6 or
/// tol <= 0.
FractalFunction construct_alpha_fif(const IfsSystem& system, const FifOptions& options = {});

FractalFunction construct_alpha_fif(const InterpolationData& data, const ScalarFunction& g,
                                    const ScalarFunction& b, const ScalingVector& alpha,
                                    const FifOptions& options = {});

/// Pointwise evaluation by unrolling g^a(y) = g(y) + a_p (g^a - b)(L_p^{-1} y)
/// for K levels (default K = iterations_used) and closing with g. Throws
/// OutOfDomain.
double eval_fif(const FractalFunction& ff, double y,
                std::optional<std::size_t> depth_override = std::nullopt);

/// max over grid nodes of |g^a(y) - g(y) - a_p (g^a - b)(L_p^{-1} y)|.
double residual_sup(const FractalFunction& ff);

/// ||alpha||/(1 - ||alpha||) * max over `grid` of |g - b|.
double perturbation_bound(const ScalarFunction& g, const ScalarFunction& b,
                          const ScalingVector& alpha, std::span<const double> grid);

struct BoundCheck {
  double sup_deviation = 0.0;  // max over nodes of |g^a - g|
  double bound = 0.0;
  bool holds = false;          // sup_deviation <= bound + 1e-9
};

BoundCheck check_bound(const FractalFunction& ff);

}  // namespace fiflab
