#include "fiflab/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace fiflab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

// Splits one CSV line; fields may be double-quoted ("" escapes a quote).
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      quoted = was_quoted = true;
      cur.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorCode::BadRow, "unterminated quote on line " + std::to_string(line_no), line_no);
  fields.push_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

double parse_number(const std::string& field, std::size_t line_no, std::string_view name) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw Error(ErrorCode::BadRow,
                "line " + std::to_string(line_no) + ", field '" + std::string(name) +
                    "': not a number: '" + field + "'",
                line_no);
  return v;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  return true;
}

void require_sink(std::ostream& out, std::string_view what) {
  if (!out) throw Error(ErrorCode::SinkWriteFailure, "failed writing " + std::string(what));
}

}  // namespace

// ---------------------------------------------------------------------------
// Ingestion

PriceSeries load_price_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!read_line(in, line))
    throw Error(ErrorCode::BadHeader, "empty input; expected header 'label,min,max,avg'");
  std::string_view header = trim(line);
  if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  if (header != "label,min,max,avg")
    throw Error(ErrorCode::BadHeader, "expected header 'label,min,max,avg', got '" +
                                          std::string(header) + "'");

  PriceSeries series;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line, line_no);
    if (fields.size() != 4)
      throw Error(ErrorCode::BadRow,
                  "line " + std::to_string(line_no) + ": expected 4 fields, got " +
                      std::to_string(fields.size()),
                  line_no);
    PriceRow row;
    row.label = fields[0];
    row.min_price = parse_number(fields[1], line_no, "min");
    row.max_price = parse_number(fields[2], line_no, "max");
    row.avg_price = parse_number(fields[3], line_no, "avg");
    if (!(row.min_price <= row.max_price) || !(row.min_price <= row.avg_price) ||
        !(row.avg_price <= row.max_price))
      throw Error(ErrorCode::OrderViolation,
                  "line " + std::to_string(line_no) + ": need min <= avg <= max", line_no);
    series.rows.push_back(std::move(row));
  }
  if (series.rows.size() < 3)
    throw Error(ErrorCode::TooFewRows,
                "need at least 3 rows, got " + std::to_string(series.rows.size()));
  return series;
}

InterpolationData normalize_series(const PriceSeries& series) {
  const std::size_t n = series.rows.size();
  if (n < 3) throw Error(ErrorCode::TooFewRows, "need at least 3 rows");
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back({static_cast<double>(i) / static_cast<double>(n - 1), series.rows[i].avg_price});
  return InterpolationData::make(std::move(pts));
}

PriceSeries spinach_fixture() {
  return {{
      {"September 2023", 5, 11, 8.0},
      {"October 2023", 5, 10, 7.5},
      {"November 2023", 3, 9, 6.0},
      {"December 2023", 4, 10, 7.0},
      {"January 2024", 5, 15, 10},
      {"February 2024", 2, 8, 5.0},
      {"March 2024", 4, 10, 7.0},
      {"April 2024", 3, 8, 5.5},
      {"May 2024", 5, 10, 7.5},
      {"June 2024", 7, 10, 8.5},
      {"July 2024", 5, 15, 10},
  }};
}

InterpolationData figure1_fixture() {
  return InterpolationData::make(
      {{4, 0}, {5, 2}, {7, 1}, {7.5, 0.5}, {8, 0}, {9, 0}, {10, 0}});
}

std::vector<Point> load_points_csv(std::istream& in) {
  std::string line;
  if (!read_line(in, line) || trim(line) != "y,z")
    throw Error(ErrorCode::BadHeader, "expected header 'y,z'");
  std::vector<Point> pts;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line, line_no);
    if (fields.size() != 2)
      throw Error(ErrorCode::BadRow, "line " + std::to_string(line_no) + ": expected 2 fields",
                  line_no);
    pts.push_back({parse_number(fields[0], line_no, "y"), parse_number(fields[1], line_no, "z")});
  }
  return pts;
}

// ---------------------------------------------------------------------------
// CSV output

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void export_points_csv(std::span<const Point> points, std::ostream& out) {
  if (points.empty()) throw Error(ErrorCode::SinkWriteFailure, "refusing to write an empty point set");
  std::string buf = "y,z\n";
  for (const Point& p : points) {
    buf += format_real(p.y);
    buf += ',';
    buf += format_real(p.z);
    buf += '\n';
  }
  out << buf;
  out.flush();
  require_sink(out, "CSV");
}

void export_samples_csv(const FractalFunction& ff, std::ostream& out) {
  const SampledFunction& s = ff.samples();
  std::vector<Point> pts;
  pts.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) pts.push_back({s.node(i), s.value(i)});
  export_points_csv(pts, out);
}

void export_cloud_csv(const PointCloud& cloud, std::ostream& out) {
  export_points_csv(cloud.points(), out);
}

// ---------------------------------------------------------------------------
// SVG output

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Rounds screen coordinates to 1e-4 so documents stay compact.
std::string coord(double v) {
  const double r = std::round(v * 1e4) / 1e4;
  return format_real(r == 0.0 ? 0.0 : r);
}

}  // namespace

void export_svg(std::span<const SvgSeries> series, const SvgStyle& style, std::ostream& out) {
  if (series.empty()) throw Error(ErrorCode::SinkWriteFailure, "no series to plot");
  BoundingBox box{};
  bool first = true;
  for (const auto& s : series) {
    if (s.points.empty()) throw Error(ErrorCode::SinkWriteFailure, "empty series '" + s.label + "'");
    const BoundingBox b = PointCloud(s.points).bounds();
    if (first) box = b;
    box.y_lo = std::min(box.y_lo, b.y_lo);
    box.y_hi = std::max(box.y_hi, b.y_hi);
    box.z_lo = std::min(box.z_lo, b.z_lo);
    box.z_hi = std::max(box.z_hi, b.z_hi);
    first = false;
  }

  const double x0 = style.margin;
  const double x1 = style.width - style.margin;
  const double y0 = style.margin;  // top of plot area
  const double y1 = style.height - style.margin;
  const double wy = box.y_hi - box.y_lo;
  const double wz = box.z_hi - box.z_lo;
  auto sx = [&](double y) { return wy > 0.0 ? x0 + (y - box.y_lo) / wy * (x1 - x0) : 0.5 * (x0 + x1); };
  auto sy = [&](double z) { return wz > 0.0 ? y1 - (z - box.z_lo) / wz * (y1 - y0) : 0.5 * (y0 + y1); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << coord(style.width)
     << "\" height=\"" << coord(style.height) << "\" viewBox=\"0 0 " << coord(style.width) << ' '
     << coord(style.height) << "\">\n";
  if (!style.title.empty()) os << "  <title>" << xml_escape(style.title) << "</title>\n";

  os << "  <g class=\"axes\" stroke=\"#000\" stroke-width=\"0.5\">\n"
     << "    <line x1=\"" << coord(x0) << "\" y1=\"" << coord(y1) << "\" x2=\"" << coord(x1)
     << "\" y2=\"" << coord(y1) << "\"/>\n"
     << "    <line x1=\"" << coord(x0) << "\" y1=\"" << coord(y0) << "\" x2=\"" << coord(x0)
     << "\" y2=\"" << coord(y1) << "\"/>\n"
     << "  </g>\n";

  const double font = std::max(2.0, std::min(style.width, style.height) / 40.0);
  os << "  <g class=\"ticks\" font-family=\"sans-serif\" font-size=\"" << coord(font)
     << "\" text-anchor=\"middle\">\n";
  const int ticks = std::max(style.ticks, 2);
  for (int i = 0; i < ticks; ++i) {
    const double v = box.y_lo + wy * static_cast<double>(i) / (ticks - 1);
    const double rounded = std::round(v * 1e6) / 1e6;
    os << "    <text x=\"" << coord(sx(v)) << "\" y=\"" << coord(y1 + font) << "\">"
       << format_real(rounded == 0.0 ? 0.0 : rounded) << "</text>\n";
  }
  os << "  </g>\n";

  for (const auto& s : series) {
    if (s.markers) {
      const std::size_t stride = std::max<std::size_t>(
          1, (s.points.size() + style.max_markers - 1) / std::max<std::size_t>(style.max_markers, 1));
      os << "  <g class=\"cloud\" fill=\"" << xml_escape(s.color) << "\" data-label=\""
         << xml_escape(s.label) << "\">\n";
      for (std::size_t i = 0; i < s.points.size(); i += stride)
        os << "    <circle cx=\"" << coord(sx(s.points[i].y)) << "\" cy=\""
           << coord(sy(s.points[i].z)) << "\" r=\"0.25\"/>\n";
      os << "  </g>\n";
    } else {
      os << "  <polyline fill=\"none\" stroke=\"" << xml_escape(s.color)
         << "\" stroke-width=\"0.3\" data-label=\"" << xml_escape(s.label) << "\" points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i > 0) os << ' ';
        os << coord(sx(s.points[i].y)) << ',' << coord(sy(s.points[i].z));
      }
      os << "\"/>\n";
    }
  }
  os << "</svg>\n";
  out << os.str();
  out.flush();
  require_sink(out, "SVG");
}

// ---------------------------------------------------------------------------
// JSON

Json to_json(const contraction::CheckReport& report) {
  Json j;
  j["mode"] = std::string(contraction::to_string(report.mode));
  j["verdict"] = std::string(contraction::to_string(report.verdict));
  j["resolution"] = report.resolution;
  j["sample_size"] = report.sample_size;
  j["sample_points"] = report.sample_points;
  j["tolerance"] = report.tolerance;
  j["witness_count"] = report.witnesses.size();
  Json ws = Json::array();
  for (const auto& w : report.witnesses)
    ws.push_back({{"y", w.y}, {"z", w.z}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"slack", w.slack}});
  j["witnesses"] = std::move(ws);
  j["carrier_escapes"] = report.carrier_escapes;
  return j;
}

Json to_json(const DimensionResult& result) {
  Json j;
  j["method"] = std::string(to_string(result.method));
  j["value"] = result.value;
  if (result.residual) j["residual"] = *result.residual;
  if (result.method == DimensionMethod::boxcount) {
    Json scales = Json::array();
    for (const auto& s : result.scales)
      scales.push_back({{"k", s.k}, {"epsilon", s.epsilon}, {"count", s.count}});
    j["scales"] = std::move(scales);
    if (result.slope) j["slope"] = *result.slope;
    if (result.r2) j["r2"] = *result.r2;
  }
  if (!result.warnings.empty()) j["warnings"] = result.warnings;
  return j;
}

Json fif_metadata(const FractalFunction& ff) {
  const BoundCheck bc = check_bound(ff);
  const auto alphas = ff.system().alpha().values();
  Json j;
  j["alpha"] = std::vector<double>(alphas.begin(), alphas.end());
  j["depth"] = ff.depth();
  j["iterations"] = ff.iterations_used();
  j["residual"] = residual_sup(ff);
  j["bound"] = bc.bound;
  j["sup_dev"] = bc.sup_deviation;
  j["bound_holds"] = bc.holds;
  j["final_step"] = ff.final_residual();
  j["tolerance"] = ff.tolerance();
  j["converged"] = ff.converged();
  j["grid_nodes"] = ff.samples().size();
  return j;
}

void export_report_json(const Json& report, std::ostream& out) {
  out << report.dump(2) << '\n';
  out.flush();
  require_sink(out, "JSON");
}

}  // namespace fiflab
