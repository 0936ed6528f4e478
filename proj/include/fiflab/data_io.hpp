#pragma once

// Price-series ingestion, built-in datasets, and CSV / SVG / JSON emission.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fiflab/contraction.hpp"
#include "fiflab/core.hpp"
#include "fiflab/dimension.hpp"
#include "fiflab/fif.hpp"
#include "fiflab/ifs.hpp"

namespace fiflab {

using Json = nlohmann::ordered_json;

struct PriceRow {
  std::string label;  // opaque month label
  double min_price = 0.0;
  double max_price = 0.0;
  double avg_price = 0.0;
};

/// Monthly price rows; prices are plain decimals (currency per kg).
struct PriceSeries {
  std::vector<PriceRow> rows;
};

/// Parses a CSV with header exactly "label,min,max,avg". A label may be
/// double-quoted. Errors: BadHeader, BadRow (index = 1-based line number),
/// OrderViolation (min > max or avg outside [min, max]), TooFewRows.
PriceSeries load_price_csv(std::istream& in);

/// y_i = i/(n-1), z_i = average price of row i.
InterpolationData normalize_series(const PriceSeries& series);

/// Average spinach prices, September 2023 to July 2024 (11 months).
PriceSeries spinach_fixture();

/// {(4,0), (5,2), (7,1), (7.5,0.5), (8,0), (9,0), (10,0)}.
InterpolationData figure1_fixture();

/// Shortest text that reads back as the same double, at most 17 significant
/// digits.
std::string format_real(double v);

/// Reads "y,z" CSV rows (header required). Errors: BadHeader, BadRow.
std::vector<Point> load_points_csv(std::istream& in);

// Writers throw SinkWriteFailure on empty input or a failed stream.
void export_points_csv(std::span<const Point> points, std::ostream& out);
void export_samples_csv(const FractalFunction& ff, std::ostream& out);
void export_cloud_csv(const PointCloud& cloud, std::ostream& out);

struct SvgSeries {
  std::vector<Point> points;
  std::string label;
  std::string color = "#1f77b4";
  bool markers = false;  // point markers instead of a polyline
};

struct SvgStyle {
  double width = 100.0;
  double height = 100.0;
  double margin = 0.0;           // inner padding inside the viewbox
  int ticks = 11;                // tick labels along the y (horizontal) axis
  std::size_t max_markers = 20000;  // clouds are thinned by stride above this
  std::string title;
};

/// Static SVG 1.1 document: axes, tick labels, and one polyline (or marker
/// group) per series. The common bounding box of all series is mapped
/// affinely onto the viewbox minus margins, with the vertical axis inverted.
void export_svg(std::span<const SvgSeries> series, const SvgStyle& style, std::ostream& out);

Json to_json(const contraction::CheckReport& report);
Json to_json(const DimensionResult& result);
/// {alpha, depth, iterations, residual, bound, sup_dev} plus convergence
/// details.
Json fif_metadata(const FractalFunction& ff);

/// Pretty-printed JSON followed by a newline.
void export_report_json(const Json& report, std::ostream& out);

}  // namespace fiflab
