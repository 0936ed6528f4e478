#include "fiflab/fif.hpp"

#include <algorithm>
#include <cmath>

namespace fiflab {

namespace {

// Per-node data of the RB operator that does not depend on the iterate:
// the preimage x = L_p^{-1}(y), the interpolation stencil for h(x), and the
// fixed part g(y) - a_p b(x).
struct RbPlan {
  std::vector<std::size_t> left;    // node index of the cell holding x
  std::vector<double> weight;       // interpolation weight of left + 1
  std::vector<double> alpha;        // a_p of the node's interval
  std::vector<double> offset;       // g(y) - a_p * b(x)
};

RbPlan make_plan(const IfsSystem& system, const SampledFunction& grid) {
  const auto nodes = grid.nodes();
  const std::size_t n = nodes.size();
  const std::size_t cells = grid.cells_per_interval();
  const Partition& part = grid.partition();
  const ScalarFunction& g = system.seed();
  const ScalarFunction& b = system.base();

  RbPlan plan;
  plan.left.resize(n);
  plan.weight.resize(n);
  plan.alpha.resize(n);
  plan.offset.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = grid.interval_of_node(i);
    const double x = system.map(p).inverse(nodes[i]);
    const std::size_t q = part.locate(x);
    const Interval a = part.interval(q);
    const double pos = (x - a.lo) / a.length() * static_cast<double>(cells);
    std::size_t j = pos <= 0.0 ? 0 : std::min(static_cast<std::size_t>(pos), cells - 1);
    const std::size_t l = q * cells + j;
    double t = 0.0;
    if (x == nodes[l + 1]) t = 1.0;
    else if (x != nodes[l]) t = std::clamp((x - nodes[l]) / (nodes[l + 1] - nodes[l]), 0.0, 1.0);
    plan.left[i] = l;
    plan.weight[i] = t;
    plan.alpha[i] = system.alpha()[p];
    plan.offset[i] = g(nodes[i]) - plan.alpha[i] * b(x);
  }
  return plan;
}

std::vector<double> apply_plan(const RbPlan& plan, std::span<const double> h) {
  std::vector<double> out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::size_t l = plan.left[i];
    const double t = plan.weight[i];
    const double hx = t == 0.0 ? h[l] : (t == 1.0 ? h[l + 1] : (1.0 - t) * h[l] + t * h[l + 1]);
    out[i] = plan.alpha[i] * hx + plan.offset[i];
  }
  return out;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void require_grid(const IfsSystem& system, const SampledFunction& h) {
  const auto a = system.data().partition().knots();
  const auto k = h.partition().knots();
  if (!std::equal(a.begin(), a.end(), k.begin(), k.end()))
    throw Error(ErrorCode::GridMismatch, "samples are not on the system's partition");
}

}  // namespace

SampledFunction rb_apply(const IfsSystem& system, const SampledFunction& h) {
  require_grid(system, h);
  const RbPlan plan = make_plan(system, h);
  return SampledFunction(h.partition(), h.depth(), apply_plan(plan, h.values()));
}

FractalFunction construct_alpha_fif(const IfsSystem& system, const FifOptions& options) {
  if (options.depth < 6 || options.depth > 20)
    throw Error(ErrorCode::DegenerateRange, "dyadic depth must lie in [6, 20]");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::DegenerateRange, "tolerance must be positive");
  if (options.max_iter < 1) throw Error(ErrorCode::DegenerateRange, "max_iter must be >= 1");

  const Partition& part = system.data().partition();
  SampledFunction seed = SampledFunction::sample(part, options.depth, system.seed());
  const RbPlan plan = make_plan(system, seed);

  std::vector<double> current(seed.values().begin(), seed.values().end());
  std::vector<double> steps;
  bool converged = false;
  for (std::size_t k = 0; k < options.max_iter; ++k) {
    std::vector<double> next = apply_plan(plan, current);
    steps.push_back(sup_distance(next, current));
    current = std::move(next);
    if (steps.back() <= options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged && options.require_convergence)
    throw Error(ErrorCode::NoConvergence,
                "RB iteration did not reach tol after " + std::to_string(options.max_iter) +
                    " steps");
  return FractalFunction(system, SampledFunction(part, options.depth, std::move(current)),
                         std::move(steps), options.tol, converged);
}

FractalFunction construct_alpha_fif(const InterpolationData& data, const ScalarFunction& g,
                                    const ScalarFunction& b, const ScalingVector& alpha,
                                    const FifOptions& options) {
  return construct_alpha_fif(build_ifs(data, alpha, g, b), options);
}

double eval_fif(const FractalFunction& ff, double y, std::optional<std::size_t> depth_override) {
  const IfsSystem& sys = ff.system();
  const Partition& part = sys.data().partition();
  const std::size_t levels = depth_override.value_or(ff.iterations_used());
  if (!part.domain().contains(y)) {
    // locate() clamps values within rounding distance and throws otherwise.
    part.locate(y);
    y = std::clamp(y, part.domain().lo, part.domain().hi);
  }

  double value = 0.0;
  double factor = 1.0;
  double cur = y;
  for (std::size_t level = 0; level < levels && factor != 0.0; ++level) {
    const std::size_t p = part.locate(cur);
    const double x = sys.map(p).inverse(cur);
    const double a = sys.alpha()[p];
    value += factor * (sys.seed()(cur) - a * sys.base()(x));
    factor *= a;
    cur = x;
  }
  if (factor != 0.0) value += factor * sys.seed()(cur);
  return value;
}

double residual_sup(const FractalFunction& ff) {
  const SampledFunction& s = ff.samples();
  const RbPlan plan = make_plan(ff.system(), s);
  return sup_distance(apply_plan(plan, s.values()), s.values());
}

double perturbation_bound(const ScalarFunction& g, const ScalarFunction& b,
                          const ScalingVector& alpha, std::span<const double> grid) {
  const double a = alpha.sup_norm();
  if (a == 0.0) return 0.0;
  double gap = 0.0;
  for (double y : grid) gap = std::max(gap, std::abs(g(y) - b(y)));
  return a / (1.0 - a) * gap;
}

BoundCheck check_bound(const FractalFunction& ff) {
  const SampledFunction& s = ff.samples();
  const ScalarFunction& g = ff.system().seed();
  BoundCheck r;
  for (std::size_t i = 0; i < s.size(); ++i)
    r.sup_deviation = std::max(r.sup_deviation, std::abs(s.value(i) - g(s.node(i))));
  r.bound = perturbation_bound(g, ff.system().base(), ff.system().alpha(), s.nodes());
  r.holds = r.sup_deviation <= r.bound + 1e-9;
  return r;
}

}  // namespace fiflab
