#include "realitygame/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>

#include "realitygame/errors.hpp"
#include "realitygame/format.hpp"

namespace rg {
namespace {

constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 18;
constexpr int kMarginTop = 42;
constexpr int kMarginBottom = 52;

// tab10-style palette behind the s0..s9 stroke classes.
constexpr const char* kPalette[10] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct LinearTicks {
  std::vector<double> values;
  int decimals = 0;
};

LinearTicks linear_ticks(double lo, double hi, int target) {
  LinearTicks out;
  const double span = hi - lo;
  const double raw = span / target;
  const int k = static_cast<int>(std::floor(std::log10(raw)));
  const double mag = std::pow(10.0, k);
  const double norm = raw / mag;
  double mant = 10.0;
  if (norm < 1.5) {
    mant = 1.0;
  } else if (norm < 3.0) {
    mant = 2.0;
  } else if (norm < 7.0) {
    mant = 5.0;
  }
  const double step = mant * mag;
  out.decimals = std::max(0, mant == 10.0 ? -(k + 1) : -k);
  const long first = static_cast<long>(std::ceil(lo / step - 1e-9));
  const long last = static_cast<long>(std::floor(hi / step + 1e-9));
  for (long i = first; i <= last; ++i) {
    out.values.push_back(static_cast<double>(i) * step);
  }
  return out;
}

struct Axis {
  double lo = 0.0;      // plotting range in transformed units
  double hi = 1.0;
  bool log_scale = false;

  double transform(double v) const { return log_scale ? std::log10(v) : v; }
  double fraction(double v) const { return (transform(v) - lo) / (hi - lo); }
};

Axis make_axis(double data_lo, double data_hi, bool log_scale, const char* name) {
  Axis ax;
  ax.log_scale = log_scale;
  if (log_scale) {
    if (data_lo <= 0.0) {
      throw DomainError(std::string("log ") + name + " axis requires positive data");
    }
    ax.lo = std::log10(data_lo);
    ax.hi = std::log10(data_hi);
    if (ax.hi - ax.lo < 1e-12) {
      ax.lo -= 1.0;
      ax.hi += 1.0;
    }
  } else {
    ax.lo = data_lo;
    ax.hi = data_hi;
    if (ax.hi - ax.lo < 1e-12) {
      const double pad = std::max(0.5, std::abs(ax.lo) * 0.5);
      ax.lo -= pad;
      ax.hi += pad;
    } else {
      // Breathing room so curves do not sit on the frame.
      const double pad = (ax.hi - ax.lo) * 0.04;
      ax.lo -= pad;
      ax.hi += pad;
    }
  }
  return ax;
}

struct TickSet {
  std::vector<double> positions;  // transformed units
  std::vector<std::string> labels;
};

TickSet ticks_for(const Axis& ax, int target) {
  TickSet out;
  if (ax.log_scale) {
    const int lo_e = static_cast<int>(std::ceil(ax.lo - 1e-9));
    const int hi_e = static_cast<int>(std::floor(ax.hi + 1e-9));
    const int decades = hi_e - lo_e;
    const int stride = decades > target ? (decades + target - 1) / target : 1;
    for (int e = lo_e; e <= hi_e; e += stride) {
      out.positions.push_back(static_cast<double>(e));
      out.labels.push_back(format_double(std::pow(10.0, e)));
    }
  } else {
    const LinearTicks t = linear_ticks(ax.lo, ax.hi, target);
    for (double v : t.values) {
      out.positions.push_back(v);
      out.labels.push_back(format_fixed(v, t.decimals));
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const ChartSpec& spec) {
  if (series.empty()) {
    throw EmptySeriesError("render_svg: no series to draw");
  }
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -std::numeric_limits<double>::infinity();
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  std::size_t points = 0;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size()) {
      throw DomainError("render_svg: series '" + s.label + "' has mismatched x/y lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        continue;
      }
      if (spec.log_x && s.x[i] <= 0.0) {
        throw DomainError("log x axis requires positive data");
      }
      if (spec.log_y && s.y[i] <= 0.0) {
        throw DomainError("log y axis requires positive data");
      }
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
      ++points;
    }
  }
  if (points == 0) {
    throw EmptySeriesError("render_svg: no finite data points");
  }

  const Axis ax = make_axis(x_lo, x_hi, spec.log_x, "x");
  const Axis ay = make_axis(y_lo, y_hi, spec.log_y, "y");
  const double plot_w = spec.width - kMarginLeft - kMarginRight;
  const double plot_h = spec.height - kMarginTop - kMarginBottom;
  const auto px = [&](double v) { return kMarginLeft + ax.fraction(v) * plot_w; };
  const auto py = [&](double v) { return kMarginTop + plot_h - ay.fraction(v) * plot_h; };

  std::string out;
  out.reserve(4096 + points * 16);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  out += "<style>\n"
         "text{font-family:sans-serif;font-size:12px;fill:#333}\n"
         ".title{font-size:15px;font-weight:bold}\n"
         ".frame{stroke:#333;fill:none}\n"
         ".grid{stroke:#ddd;fill:none}\n"
         ".curve{fill:none;stroke-width:1.5}\n";
  for (int i = 0; i < 10; ++i) {
    out += ".s" + std::to_string(i) + "{stroke:" + kPalette[i] + "}\n";
  }
  out += "</style>\n";
  out += "<rect width=\"" + std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" fill=\"#fff\"/>\n";

  const TickSet tx = ticks_for(ax, 6);
  const TickSet ty = ticks_for(ay, 6);
  const std::string plot_left = format_fixed(kMarginLeft, 2);
  const std::string plot_right = format_fixed(kMarginLeft + plot_w, 2);
  const std::string plot_top = format_fixed(kMarginTop, 2);
  const std::string plot_bottom = format_fixed(kMarginTop + plot_h, 2);
  for (std::size_t i = 0; i < tx.positions.size(); ++i) {
    const std::string x = format_fixed(kMarginLeft + (tx.positions[i] - ax.lo) / (ax.hi - ax.lo) * plot_w, 2);
    out += "<line class=\"grid\" x1=\"" + x + "\" y1=\"" + plot_top + "\" x2=\"" + x +
           "\" y2=\"" + plot_bottom + "\"/>\n";
    out += "<text x=\"" + x + "\" y=\"" + format_fixed(kMarginTop + plot_h + 18, 2) +
           "\" text-anchor=\"middle\">" + tx.labels[i] + "</text>\n";
  }
  for (std::size_t i = 0; i < ty.positions.size(); ++i) {
    const std::string y = format_fixed(kMarginTop + plot_h - (ty.positions[i] - ay.lo) / (ay.hi - ay.lo) * plot_h, 2);
    out += "<line class=\"grid\" x1=\"" + plot_left + "\" y1=\"" + y + "\" x2=\"" + plot_right +
           "\" y2=\"" + y + "\"/>\n";
    out += "<text x=\"" + format_fixed(kMarginLeft - 6, 2) + "\" y=\"" + y +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\">" + ty.labels[i] + "</text>\n";
  }
  out += "<rect class=\"frame\" x=\"" + plot_left + "\" y=\"" + plot_top + "\" width=\"" +
         format_fixed(plot_w, 2) + "\" height=\"" + format_fixed(plot_h, 2) + "\"/>\n";
  out += "<clipPath id=\"plot\"><rect x=\"" + plot_left + "\" y=\"" + plot_top + "\" width=\"" +
         format_fixed(plot_w, 2) + "\" height=\"" + format_fixed(plot_h, 2) + "\"/></clipPath>\n";

  out += "<g clip-path=\"url(#plot)\">\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    std::string pts;
    pts.reserve(s.x.size() * 14);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        continue;
      }
      if (!pts.empty()) {
        pts += ' ';
      }
      pts += format_fixed(px(s.x[i]), 2);
      pts += ',';
      pts += format_fixed(py(s.y[i]), 2);
    }
    if (pts.empty()) {
      continue;
    }
    out += "<polyline class=\"curve s" + std::to_string(si % 10) + "\" points=\"" + pts + "\"/>\n";
  }
  out += "</g>\n";

  // Legend: swatch + label per series, top-right inside the frame.
  for (std::size_t si = 0; si < series.size() && si < 10; ++si) {
    const double ly = kMarginTop + 14 + 16.0 * static_cast<double>(si);
    const double lx = kMarginLeft + plot_w - 150;
    out += "<line class=\"curve s" + std::to_string(si) + "\" x1=\"" + format_fixed(lx, 2) +
           "\" y1=\"" + format_fixed(ly - 4, 2) + "\" x2=\"" + format_fixed(lx + 22, 2) +
           "\" y2=\"" + format_fixed(ly - 4, 2) + "\"/>\n";
    out += "<text x=\"" + format_fixed(lx + 28, 2) + "\" y=\"" + format_fixed(ly, 2) + "\">" +
           xml_escape(series[si].label) + "</text>\n";
  }

  out += "<text class=\"title\" x=\"" + format_fixed(spec.width / 2.0, 2) +
         "\" y=\"24\" text-anchor=\"middle\">" + xml_escape(spec.title) + "</text>\n";
  out += "<text x=\"" + format_fixed(kMarginLeft + plot_w / 2.0, 2) + "\" y=\"" +
         format_fixed(spec.height - 14, 2) + "\" text-anchor=\"middle\">" +
         xml_escape(spec.x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + format_fixed(kMarginTop + plot_h / 2.0, 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         format_fixed(kMarginTop + plot_h / 2.0, 2) + ")\">" + xml_escape(spec.y_label) +
         "</text>\n";
  out += "</svg>\n";
  return out;
}

void write_svg(const std::string& path, const std::vector<Series>& series, const ChartSpec& spec) {
  const std::string doc = render_svg(series, spec);
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot open for writing: " + path);
  }
  f << doc;
}

}  // namespace rg
