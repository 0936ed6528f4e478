#include "fiflab/contraction.hpp"

#include <algorithm>
#include <cmath>

#include "fiflab/parallel.hpp"

namespace fiflab::contraction {

double example_T_continuous(double y) noexcept {
  if (y <= 4.0) return 0.0;
  if (y <= 5.0) return 2.0 * y - 8.0;
  if (y <= 7.0) return -y / 2.0 + 4.5;
  if (y <= 8.0) return -y + 8.0;
  return 0.0;
}

long long example_T_discrete(long long y) {
  if (y < 0) throw Error(ErrorCode::NotInCarrier, "discrete map is defined on y >= 0");
  if (y == 5) return 4;
  if (y == 7) return 0;
  return 1;
}

double phi_half(double t) noexcept { return t / 2.0; }

double phi_piecewise(double t) noexcept {
  if (t <= 1.0) return t * t / 2.0;
  return t - 1.0 / 3.0;
}

// ---------------------------------------------------------------------------

std::vector<double> modulus_probe_grid() {
  std::vector<double> ts;
  constexpr int kPerDecade = 20;
  for (int i = -9 * kPerDecade; i <= 3 * kPerDecade; ++i)
    ts.push_back(std::pow(10.0, static_cast<double>(i) / kPerDecade));
  return ts;
}

ContractionModulus::ContractionModulus(std::function<double(double)> body,
                                       std::string name)
    : body_(std::move(body)), name_(std::move(name)) {
  for (double t : modulus_probe_grid()) {
    const double v = body_(t);
    if (!(v >= 0.0) || !(v < t))
      throw Error(ErrorCode::InvalidModulus,
                  name_ + " violates 0 <= phi(t) < t at t = " + std::to_string(t));
  }
}

ContractionModulus ContractionModulus::half() { return {phi_half, "half"}; }
ContractionModulus ContractionModulus::piecewise() { return {phi_piecewise, "piecewise"}; }

// ---------------------------------------------------------------------------

MetricSelfMap MetricSelfMap::on_interval(Interval carrier,
                                         std::function<double(double)> body,
                                         std::string name) {
  if (!(carrier.length() >= 0.0))
    throw Error(ErrorCode::DegenerateInterval, "carrier interval must satisfy lo <= hi");
  MetricSelfMap m;
  m.interval_ = carrier;
  m.body_ = std::move(body);
  m.name_ = std::move(name);
  return m;
}

MetricSelfMap MetricSelfMap::on_points(std::vector<double> carrier,
                                       std::function<double(double)> body,
                                       std::string name) {
  if (carrier.empty()) throw Error(ErrorCode::EmptySample, "empty carrier");
  std::sort(carrier.begin(), carrier.end());
  carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
  MetricSelfMap m;
  m.interval_ = {carrier.front(), carrier.back()};
  m.points_ = std::move(carrier);
  m.body_ = std::move(body);
  m.name_ = std::move(name);
  return m;
}

bool MetricSelfMap::in_carrier(double y) const noexcept {
  if (finite_carrier()) return std::binary_search(points_.begin(), points_.end(), y);
  const double slack = 1e-12 * std::max(1.0, std::abs(interval_.hi) + std::abs(interval_.lo));
  return y >= interval_.lo - slack && y <= interval_.hi + slack;
}

MetricSelfMap t_continuous_map(Interval carrier) {
  return MetricSelfMap::on_interval(carrier, example_T_continuous, "t-continuous");
}

MetricSelfMap t_discrete_map(std::vector<double> carrier) {
  return MetricSelfMap::on_points(
      std::move(carrier),
      [](double y) {
        if (y != std::floor(y))
          throw Error(ErrorCode::NotInCarrier, "discrete map needs an integer argument");
        return static_cast<double>(example_T_discrete(static_cast<long long>(y)));
      },
      "t-discrete");
}

std::vector<double> discrete_carrier_extended(long long max) {
  std::vector<double> c;
  for (long long i = 0; i <= max; ++i) c.push_back(static_cast<double>(i));
  return c;
}

std::vector<double> discrete_carrier_odd(long long max) {
  std::vector<double> c{0.0, 2.0};
  for (long long i = 1; i <= max; i += 2) c.push_back(static_cast<double>(i));
  std::sort(c.begin(), c.end());
  return c;
}

std::string_view to_string(CheckMode mode) noexcept {
  switch (mode) {
    case CheckMode::banach: return "banach";
    case CheckMode::phi: return "phi";
    case CheckMode::suzuki: return "suzuki";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) noexcept {
  return verdict == Verdict::no_counterexample_found ? "no-counterexample-found"
                                                     : "counterexamples-found";
}

const Witness* CheckReport::find(double y, double z) const noexcept {
  for (const auto& w : witnesses)
    if (w.y == y && w.z == z) return &w;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Pair scans

namespace {

std::size_t pair_count(std::size_t points, bool ordered) {
  const std::size_t pairs = points * (points - 1);
  return ordered ? pairs : pairs / 2;
}

// Evaluates `violation(i, j)` for every pair in the scan and collects the
// witnesses. Rows are split into contiguous chunks; concatenating chunk
// results in order preserves the (y, z) ordering of the sorted sample.
template <typename Violation>
std::vector<Witness> scan_pairs(const std::vector<double>& ys, bool ordered,
                                Violation&& violation) {
  const std::size_t n = ys.size();
  const std::size_t chunks = std::max<std::size_t>(1, std::min(worker_count(), n));
  std::vector<std::vector<Witness>> found(chunks);
  parallel_chunks(
      n,
      [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        auto& out = found[chunk];
        for (std::size_t i = begin; i < end; ++i)
          for (std::size_t j = ordered ? 0 : i + 1; j < n; ++j) {
            if (i == j) continue;
            Witness w;
            if (violation(i, j, w)) out.push_back(w);
          }
      },
      chunks);
  std::vector<Witness> all;
  for (auto& part : found) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end(), [](const Witness& a, const Witness& b) {
    return a.y != b.y ? a.y < b.y : a.z < b.z;
  });
  return all;
}

struct Sample {
  std::vector<double> ys;
  std::vector<double> images;
  double resolution = 0.0;
};

Sample prepare(const MetricSelfMap& map, const GridSpec& grid, bool ordered,
               CheckReport& report) {
  Sample s;
  s.ys = sample_carrier(map, grid, ordered, s.resolution);
  s.images.reserve(s.ys.size());
  for (double y : s.ys) {
    const double ty = map(y);
    s.images.push_back(ty);
    if (!map.in_carrier(ty)) report.carrier_escapes.push_back(y);
  }
  report.sample_points = s.ys.size();
  report.sample_size = pair_count(s.ys.size(), ordered);
  report.resolution = s.resolution;
  return s;
}

void finish(CheckReport& report) {
  report.verdict = report.witnesses.empty() ? Verdict::no_counterexample_found
                                            : Verdict::counterexamples_found;
}

}  // namespace

std::vector<double> sample_carrier(const MetricSelfMap& map, const GridSpec& grid,
                                   bool ordered, double& resolution) {
  if (map.finite_carrier()) {
    resolution = 0.0;
    if (map.points().size() < 2)
      throw Error(ErrorCode::EmptySample, "carrier has fewer than 2 points");
    return map.points();
  }
  const Interval c = map.interval();
  if (!(grid.delta > 0.0) || !(c.length() > 0.0))
    throw Error(ErrorCode::EmptySample, "interval scan needs delta > 0 and a nondegenerate carrier");

  auto cells = static_cast<std::size_t>(std::ceil(c.length() / grid.delta - 1e-9));
  cells = std::max<std::size_t>(cells, 1);
  if (pair_count(cells + 1, ordered) > grid.max_pairs) {
    // Largest point count whose pair count fits the budget.
    const double budget = static_cast<double>(grid.max_pairs) * (ordered ? 1.0 : 2.0);
    auto points = static_cast<std::size_t>(std::floor((1.0 + std::sqrt(1.0 + 4.0 * budget)) / 2.0));
    while (points > 2 && pair_count(points, ordered) > grid.max_pairs) --points;
    while (pair_count(points + 1, ordered) <= grid.max_pairs) ++points;
    cells = std::max<std::size_t>(points, 2) - 1;
  }
  resolution = c.length() / static_cast<double>(cells);
  std::vector<double> ys;
  ys.reserve(cells + 1);
  for (std::size_t i = 0; i < cells; ++i)
    ys.push_back(c.lo + c.length() * static_cast<double>(i) / static_cast<double>(cells));
  ys.push_back(c.hi);
  return ys;
}

CheckReport check_banach(const MetricSelfMap& map, const GridSpec& grid,
                         double ratio_bound, double tol) {
  CheckReport report;
  report.mode = CheckMode::banach;
  report.tolerance = tol;
  const Sample s = prepare(map, grid, false, report);
  report.witnesses = scan_pairs(s.ys, false, [&](std::size_t i, std::size_t j, Witness& w) {
    const double lhs = std::abs(s.images[i] - s.images[j]);
    const double rhs = ratio_bound * std::abs(s.ys[i] - s.ys[j]);
    if (!(lhs > rhs + tol)) return false;
    w = {s.ys[i], s.ys[j], lhs, rhs, lhs - rhs};
    return true;
  });
  finish(report);
  return report;
}

CheckReport check_phi(const MetricSelfMap& map, const ContractionModulus& phi,
                      const GridSpec& grid, double tol) {
  CheckReport report;
  report.mode = CheckMode::phi;
  report.tolerance = tol;
  const Sample s = prepare(map, grid, false, report);
  report.witnesses = scan_pairs(s.ys, false, [&](std::size_t i, std::size_t j, Witness& w) {
    const double lhs = std::abs(s.images[i] - s.images[j]);
    const double rhs = phi(std::abs(s.ys[i] - s.ys[j]));
    if (!(lhs > rhs + tol)) return false;
    w = {s.ys[i], s.ys[j], lhs, rhs, lhs - rhs};
    return true;
  });
  finish(report);
  return report;
}

CheckReport check_suzuki(const MetricSelfMap& map, const ContractionModulus& phi,
                         const GridSpec& grid, double tol) {
  CheckReport report;
  report.mode = CheckMode::suzuki;
  report.tolerance = tol;
  const Sample s = prepare(map, grid, true, report);
  report.witnesses = scan_pairs(s.ys, true, [&](std::size_t i, std::size_t j, Witness& w) {
    const double d_yz = std::abs(s.ys[i] - s.ys[j]);
    const double d_y = std::abs(s.ys[i] - s.images[i]);
    if (!(0.5 * d_y <= d_yz)) return false;
    const double d_z = std::abs(s.ys[j] - s.images[j]);
    const double lhs = std::abs(s.images[i] - s.images[j]);
    const double rhs = phi(std::max({d_yz, d_y, d_z}));
    if (!(lhs > rhs + tol)) return false;
    w = {s.ys[i], s.ys[j], lhs, rhs, lhs - rhs};
    return true;
  });
  finish(report);
  return report;
}

FixedPointResult picard_fixed_point(const MetricSelfMap& map, double start, double tol,
                                    std::size_t max_iter) {
  if (!map.in_carrier(start))
    throw Error(ErrorCode::NotInCarrier, "Picard start point outside the carrier");
  if (!(tol > 0.0)) throw Error(ErrorCode::DegenerateRange, "tolerance must be positive");
  FixedPointResult r;
  double y = start;
  for (std::size_t k = 1; k <= max_iter; ++k) {
    const double next = map(y);
    r.iterations = k;
    const double step = std::abs(next - y);
    y = next;
    if (step <= tol) {
      r.converged = true;
      break;
    }
  }
  r.point = y;
  r.residual = std::abs(y - map(y));
  r.converged = r.converged && r.residual <= tol;
  return r;
}

}  // namespace fiflab::contraction
