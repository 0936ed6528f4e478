#include "fiflab/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fiflab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotStrictlyIncreasing: return "NotStrictlyIncreasing";
    case ErrorCode::TooFewKnots: return "TooFewKnots";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::NotContractive: return "NotContractive";
    case ErrorCode::InvalidScaling: return "InvalidScaling";
    case ErrorCode::InvalidModulus: return "InvalidModulus";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::NotInCarrier: return "NotInCarrier";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SeedMismatch: return "SeedMismatch";
    case ErrorCode::BaseEndpointMismatch: return "BaseEndpointMismatch";
    case ErrorCode::BaseEqualsSeed: return "BaseEqualsSeed";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidRatios: return "InvalidRatios";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::BadRow: return "BadRow";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::SinkWriteFailure: return "SinkWriteFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

constexpr double kDomainSlack = 1e-12;

// Clamps y into [lo, hi] when it is within a relative slack of the interval.
bool clamp_into(const Interval& d, double& y) noexcept {
  const double slack = kDomainSlack * std::max(1.0, std::max(std::abs(d.lo), std::abs(d.hi)));
  if (y < d.lo) {
    if (d.lo - y > slack) return false;
    y = d.lo;
  } else if (y > d.hi) {
    if (y - d.hi > slack) return false;
    y = d.hi;
  }
  return true;
}

std::string fmt_point(double y) {
  std::ostringstream os;
  os.precision(17);
  os << y;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Partition

Partition Partition::make(std::span<const double> abscissae) {
  if (abscissae.size() < 3)
    throw Error(ErrorCode::TooFewKnots,
                "need at least 3 knots, got " + std::to_string(abscissae.size()));
  for (std::size_t i = 0; i < abscissae.size(); ++i) {
    if (!std::isfinite(abscissae[i]))
      throw Error(ErrorCode::NotStrictlyIncreasing,
                  "non-finite knot at index " + std::to_string(i), i);
    if (i > 0 && !(abscissae[i] > abscissae[i - 1]))
      throw Error(ErrorCode::NotStrictlyIncreasing,
                  "knot " + std::to_string(i) + " does not exceed its predecessor", i);
  }
  return Partition(std::vector<double>(abscissae.begin(), abscissae.end()));
}

std::size_t Partition::locate(double y) const {
  if (!clamp_into(domain(), y))
    throw Error(ErrorCode::OutOfDomain, "y = " + fmt_point(y) + " outside partition domain");
  if (y >= knots_.back()) return intervals() - 1;
  // First knot strictly greater than y closes the half-open interval.
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
  return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

// ---------------------------------------------------------------------------
// InterpolationData

InterpolationData InterpolationData::make(std::vector<Point> points) {
  std::vector<double> ys;
  ys.reserve(points.size());
  for (const auto& p : points) ys.push_back(p.y);
  auto partition = Partition::make(ys);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!std::isfinite(points[i].z))
      throw Error(ErrorCode::BadRow, "non-finite ordinate at index " + std::to_string(i), i);
  return InterpolationData(std::move(points), std::move(partition));
}

std::vector<double> InterpolationData::abscissae() const {
  auto k = partition_.knots();
  return {k.begin(), k.end()};
}

std::vector<double> InterpolationData::ordinates() const {
  std::vector<double> zs;
  zs.reserve(points_.size());
  for (const auto& p : points_) zs.push_back(p.z);
  return zs;
}

bool InterpolationData::collinear(double tol) const {
  const Point& first = points_.front();
  const Point& last = points_.back();
  const double slope = (last.z - first.z) / (last.y - first.y);
  return std::all_of(points_.begin(), points_.end(), [&](const Point& p) {
    return std::abs(first.z + slope * (p.y - first.y) - p.z) <= tol;
  });
}

// ---------------------------------------------------------------------------
// ScalingVector

ScalingVector ScalingVector::make(std::vector<double> alphas) {
  if (alphas.empty()) throw Error(ErrorCode::InvalidScaling, "empty scaling vector");
  for (std::size_t p = 0; p < alphas.size(); ++p)
    if (!std::isfinite(alphas[p]) || !(std::abs(alphas[p]) < 1.0))
      throw Error(ErrorCode::InvalidScaling,
                  "|alpha_" + std::to_string(p + 1) + "| = " + fmt_point(alphas[p]) +
                      " is not below 1",
                  p);
  return ScalingVector(std::move(alphas));
}

ScalingVector ScalingVector::uniform(double alpha, std::size_t count) {
  return make(std::vector<double>(count, alpha));
}

double ScalingVector::sup_norm() const noexcept {
  double m = 0.0;
  for (double a : alphas_) m = std::max(m, std::abs(a));
  return m;
}

double ScalingVector::abs_sum() const noexcept {
  double s = 0.0;
  for (double a : alphas_) s += std::abs(a);
  return s;
}

// ---------------------------------------------------------------------------
// AffineMap

AffineMap affine_from_endpoints(Interval domain, Interval codomain) {
  if (!(domain.length() > 0.0) || !(codomain.length() > 0.0))
    throw Error(ErrorCode::DegenerateInterval, "interval endpoints must satisfy lo < hi");
  const double span = domain.length();
  const double a = codomain.length() / span;
  if (!(std::abs(a) < 1.0))
    throw Error(ErrorCode::NotContractive, "slope " + fmt_point(a) + " is not below 1");
  const double c = (domain.hi * codomain.lo - domain.lo * codomain.hi) / span;
  return AffineMap(a, c, domain, codomain);
}

double AffineMap::operator()(double y) const noexcept {
  if (y == domain_.lo) return codomain_.lo;
  if (y == domain_.hi) return codomain_.hi;
  return codomain_.lo + slope_ * (y - domain_.lo);
}

double AffineMap::inverse(double y) const noexcept {
  if (y == codomain_.lo) return domain_.lo;
  if (y == codomain_.hi) return domain_.hi;
  return domain_.lo + (y - codomain_.lo) / slope_;
}

// ---------------------------------------------------------------------------
// ScalarFunction

ScalarFunction ScalarFunction::closed_form(Interval domain, Callable body,
                                           std::string description,
                                           bool defined_on_reals) {
  if (!(domain.length() > 0.0))
    throw Error(ErrorCode::DegenerateInterval, "function domain must satisfy lo < hi");
  ScalarFunction f;
  f.domain_ = domain;
  f.description_ = std::move(description);
  f.defined_on_reals_ = defined_on_reals;
  f.body_ = std::make_shared<const Callable>(std::move(body));
  return f;
}

ScalarFunction ScalarFunction::piecewise_linear(std::vector<double> knots,
                                                std::vector<double> values) {
  if (knots.size() != values.size())
    throw Error(ErrorCode::LengthMismatch, "knot and value tables differ in length");
  if (knots.size() < 2) throw Error(ErrorCode::TooFewKnots, "need at least 2 knots");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1]))
      throw Error(ErrorCode::NotStrictlyIncreasing,
                  "knot " + std::to_string(i) + " does not exceed its predecessor", i);
  ScalarFunction f;
  f.domain_ = {knots.front(), knots.back()};
  f.description_ = "piecewise-linear (" + std::to_string(knots.size()) + " knots)";
  f.knots_ = std::move(knots);
  f.values_ = std::move(values);
  return f;
}

double ScalarFunction::operator()(double y) const {
  if (!clamp_into(domain_, y))
    throw Error(ErrorCode::OutOfDomain,
                "y = " + fmt_point(y) + " outside [" + fmt_point(domain_.lo) + ", " +
                    fmt_point(domain_.hi) + "]");
  return evaluate_unchecked(y);
}

double ScalarFunction::evaluate_unchecked(double y) const {
  if (body_) return (*body_)(y);
  return eval_table(y);
}

double ScalarFunction::eval_table(double y) const {
  if (y <= knots_.front()) return values_.front();
  if (y >= knots_.back()) return values_.back();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (y == knots_[i]) return values_[i];
  const double t = (y - knots_[i]) / (knots_[i + 1] - knots_[i]);
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

ScalarFunction linear_interpolant(const InterpolationData& data) {
  return ScalarFunction::piecewise_linear(data.abscissae(), data.ordinates());
}

ScalarFunction square_base(const ScalarFunction& g, Interval domain) {
  const double lo = domain.lo;
  const double span = domain.length();
  return ScalarFunction::closed_form(
      domain,
      [g, lo, span](double y) {
        const double u = y - lo;
        return g(lo + u * u / span);
      },
      "square_base(" + g.description() + ")");
}

ScalarFunction literal_square_base(const ScalarFunction& g, Interval domain) {
  if (!g.defined_on_reals()) {
    const double sq_lo = (domain.lo <= 0.0 && domain.hi >= 0.0)
                             ? 0.0
                             : std::min(domain.lo * domain.lo, domain.hi * domain.hi);
    const double sq_hi = std::max(domain.lo * domain.lo, domain.hi * domain.hi);
    if (!(g.domain().contains(sq_lo) && g.domain().contains(sq_hi)))
      throw Error(ErrorCode::OutOfDomain,
                  "g is not defined on the squares of the base domain");
  }
  return ScalarFunction::closed_form(
      domain, [g](double y) { return g.evaluate_unchecked(y * y); },
      "literal_square_base(" + g.description() + ")");
}

// ---------------------------------------------------------------------------
// SampledFunction

std::vector<double> dyadic_grid(const Partition& partition, unsigned depth) {
  const std::size_t cells = std::size_t{1} << depth;
  const auto knots = partition.knots();
  std::vector<double> nodes;
  nodes.reserve(partition.intervals() * cells + 1);
  for (std::size_t p = 0; p < partition.intervals(); ++p) {
    const double lo = knots[p];
    const double len = knots[p + 1] - lo;
    nodes.push_back(lo);
    for (std::size_t j = 1; j < cells; ++j)
      nodes.push_back(lo + len * static_cast<double>(j) / static_cast<double>(cells));
  }
  nodes.push_back(knots.back());
  return nodes;
}

SampledFunction::SampledFunction(Partition partition, unsigned depth,
                                 std::vector<double> values)
    : partition_(std::move(partition)), depth_(depth), values_(std::move(values)) {
  if (depth_ > 24) throw Error(ErrorCode::GridMismatch, "dyadic depth above 24");
  nodes_ = dyadic_grid(partition_, depth_);
  if (values_.size() != nodes_.size())
    throw Error(ErrorCode::GridMismatch,
                "expected " + std::to_string(nodes_.size()) + " values, got " +
                    std::to_string(values_.size()));
}

SampledFunction SampledFunction::sample(const Partition& partition, unsigned depth,
                                        const ScalarFunction& f) {
  auto nodes = dyadic_grid(partition, depth);
  std::vector<double> values;
  values.reserve(nodes.size());
  for (double y : nodes) values.push_back(f(y));
  return SampledFunction(partition, depth, std::move(values));
}

std::size_t SampledFunction::interval_of_node(std::size_t i) const noexcept {
  return std::min(i / cells_per_interval(), partition_.intervals() - 1);
}

double SampledFunction::interpolate(double y) const {
  const std::size_t p = partition_.locate(y);
  const Interval a = partition_.interval(p);
  const std::size_t cells = cells_per_interval();
  const double pos = (y - a.lo) / a.length() * static_cast<double>(cells);
  std::size_t j = pos <= 0.0 ? 0 : static_cast<std::size_t>(pos);
  if (j >= cells) j = cells - 1;
  const std::size_t i = p * cells + j;
  if (y == nodes_[i]) return values_[i];
  if (y == nodes_[i + 1]) return values_[i + 1];
  const double t = std::clamp((y - nodes_[i]) / (nodes_[i + 1] - nodes_[i]), 0.0, 1.0);
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

bool SampledFunction::same_grid(const SampledFunction& other) const noexcept {
  return depth_ == other.depth_ &&
         std::equal(partition_.knots().begin(), partition_.knots().end(),
                    other.partition_.knots().begin(), other.partition_.knots().end());
}

}  // namespace fiflab
