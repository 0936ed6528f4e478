#include <cmath>
#include <random>
#include <vector>

#include "fiflab/dimension.hpp"
#include "helpers.hpp"

using namespace fiflab;

namespace {

std::vector<double> tenths() { return std::vector<double>(10, 0.1); }

PointCloud diagonal(std::size_t n) {
  std::vector<Point> p;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    p.push_back({t, t});
  }
  return PointCloud(std::move(p));
}

}  // namespace

TEST_CASE("analytic dimension of the case-study configurations") {
  const auto r4 = analytic_box_dimension(ScalingVector::uniform(0.4, 10), tenths());
  CHECK(r4.value == doctest::Approx(1 + std::log10(4.0)).epsilon(1e-10));
  CHECK(std::abs(*r4.residual) <= 1e-10);
  const auto r6 = analytic_box_dimension(ScalingVector::uniform(0.6, 10), tenths());
  CHECK(r6.value == doctest::Approx(1 + std::log10(6.0)).epsilon(1e-10));
  const auto rm = analytic_box_dimension(ScalingVector::make(oracle::mixed_alpha()), tenths());
  CHECK(rm.value == doctest::Approx(1 + std::log10(2.6)).epsilon(1e-10));

  CHECK(std::trunc(r4.value * 100) / 100 == doctest::Approx(1.60));
  CHECK(std::trunc(r6.value * 100) / 100 == doctest::Approx(1.77));
  CHECK(std::trunc(rm.value * 100) / 100 == doctest::Approx(1.41));
}

TEST_CASE("otherwise branch") {
  CHECK(analytic_box_dimension(ScalingVector::uniform(0.05, 10), tenths()).value == 1.0);
  CHECK(analytic_box_dimension(ScalingVector::uniform(0.1, 10), tenths()).value == 1.0);
  CHECK(analytic_box_dimension(ScalingVector::uniform(0.0, 10), tenths()).value == 1.0);
}

TEST_CASE("analytic dimension errors") {
  CHECK_CODE(analytic_box_dimension(ScalingVector::uniform(0.5, 2), std::vector<double>{0.5, 1.0}),
             ErrorCode::InvalidRatios);
  CHECK_CODE(analytic_box_dimension(ScalingVector::uniform(0.5, 3), std::vector<double>{0.5, 0.5}),
             ErrorCode::LengthMismatch);
}

TEST_CASE("unequal ratios against an independent root finder") {
  const std::vector<double> ratio{0.05, 0.2, 0.3, 0.45};
  const std::vector<double> alpha{0.9, -0.5, 0.7, 0.6};
  const auto r = analytic_box_dimension(ScalingVector::make(alpha), ratio);
  CHECK(r.value == doctest::Approx(oracle::moran_root(alpha, ratio)).epsilon(1e-10));

  // Tiny intervals push the root above 2.
  const std::vector<double> small{0.001, 0.001, 0.998};
  const std::vector<double> big{0.9, 0.9, 0.01};
  const auto rs = analytic_box_dimension(ScalingVector::make(big), small);
  CHECK(rs.value == doctest::Approx(oracle::moran_root(big, small)).epsilon(1e-10));
  CHECK(std::abs(*rs.residual) <= 1e-10);
}

TEST_CASE("collinear data guard") {
  const auto d = InterpolationData::make({{0, 0}, {0.5, 1}, {1, 2}});
  const auto r = fif_box_dimension(d, ScalingVector::uniform(0.9, 2));
  CHECK(r.value == 1.0);
  CHECK_FALSE(r.warnings.empty());
  CHECK(fif_box_dimension(testing_util::spinach(), ScalingVector::uniform(0.4, 10)).warnings.empty());
}

TEST_CASE("box counting") {
  const std::vector<double> half{0.5};
  CHECK(box_count(PointCloud({{0.3, 0.3}}), half)[0].count == 1);
  CHECK(box_count(PointCloud({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), half)[0].count == 4);
  CHECK_CODE(box_count(PointCloud{}, half), ErrorCode::EmptyCloud);

  const auto diag = diagonal(10'000);
  std::vector<oracle::Pt> pts;
  for (const auto& p : diag.points()) pts.push_back({p.y, p.z});
  for (int k = 1; k <= 7; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const std::vector<double> e{eps};
    const auto c = box_count(diag, e)[0].count;
    CHECK(c == (std::size_t{1} << k));
    CHECK(c == oracle::boxes(pts, eps));
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> cloud(5000);
  std::vector<oracle::Pt> opts;
  for (auto& p : cloud) {
    p = {u(rng), u(rng) * u(rng)};
    opts.push_back({p.y, p.z});
  }
  for (int k = 2; k <= 8; ++k) {
    const std::vector<double> e{std::ldexp(1.0, -k)};
    CHECK(box_count(PointCloud(cloud), e)[0].count == oracle::boxes(opts, e[0]));
  }
}

TEST_CASE("box-count calibration") {
  const auto d = estimate_box_dimension(diagonal(1'000'000), 3, 9);
  CHECK(std::abs(*d.slope - 1.0) <= 0.02);
  CHECK(d.scales.size() == 7);

  std::vector<Point> sq;
  sq.reserve(2048 * 2048);
  for (int i = 0; i < 2048; ++i)
    for (int j = 0; j < 2048; ++j) sq.push_back({(i + 0.5) / 2048, (j + 0.5) / 2048});
  const auto s = estimate_box_dimension(PointCloud(std::move(sq)), 3, 9);
  CHECK(std::abs(*s.slope - 2.0) <= 0.05);

  CHECK_CODE(estimate_box_dimension(diagonal(100), 3, 5), ErrorCode::DegenerateRange);
  CHECK_CODE(estimate_box_dimension(PointCloud{}, 3, 9), ErrorCode::EmptyCloud);
}

TEST_CASE("small cloud produces a warning") {
  const auto r = estimate_box_dimension(diagonal(1000), 3, 9);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("slope is stable under affine rescaling") {
  const auto base = estimate_box_dimension(diagonal(200'000), 3, 9);
  std::vector<Point> stretched;
  for (const auto& p : diagonal(200'000).points()) stretched.push_back({3 * p.y - 7, -0.25 * p.z + 2});
  const auto moved = estimate_box_dimension(PointCloud(std::move(stretched)), 3, 9);
  CHECK(std::abs(*moved.slope - *base.slope) <= 0.02);
}
