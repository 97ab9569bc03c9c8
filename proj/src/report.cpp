#include "stablefair/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "stablefair/common.hpp"

namespace stablefair {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string{};
}

}  // namespace

void write_report_csv(const std::string& path, const std::vector<StabilityReport>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("report: cannot write '" + path + "'");
  out << "lambda,acc_mean,acc_std,gamma_mean,gamma_std,stab,beta_hat,beta_bound\n";
  for (const auto& r : rows) {
    out << fmt(r.lambda) << ',' << fmt(r.acc_mean) << ',' << fmt(r.acc_std) << ','
        << fmt(r.gamma_mean) << ',' << fmt(r.gamma_std) << ',' << fmt_opt(r.stab)
        << ',' << fmt_opt(r.beta_hat) << ',' << fmt_opt(r.beta_bound) << '\n';
  }
  if (!out) throw DataError("report: write to '" + path + "' failed");
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 610.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 390.0;

const char* kColors[] = {"#1f6fb2", "#c2452d", "#3a8c3f", "#8051a8"};

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};

AxisRange axis_range(double lo, double hi) {
  if (!(hi > lo)) {  // degenerate or single-point data: pad symmetrically
    const double pad = std::max(0.5, std::abs(lo) * 0.5);
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.08;
  return {lo - pad, hi + pad};
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  bool any = false;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!any) {
        x_lo = x_hi = x;
        y_lo = y_hi = y;
        any = true;
      } else {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
  }
  const AxisRange xr = axis_range(x_lo, x_hi);
  const AxisRange yr = axis_range(y_lo, y_hi);
  const auto sx = [&](double x) {
    return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kRight - kLeft);
  };
  const auto sy = [&](double y) {
    return kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop);
  };

  std::ofstream out(path);
  if (!out) throw DataError("plot: cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Axes and ticks.
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
    out << "<line x1=\"" << fmt(sx(fx)) << "\" y1=\"" << kBottom << "\" x2=\""
        << fmt(sx(fx)) << "\" y2=\"" << kBottom + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << kBottom + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(fx) << "</text>\n";
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(sy(fy)) << "\" x2=\""
        << kLeft << "\" y2=\"" << fmt(sy(fy)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 9 << "\" y=\"" << fmt(sy(fy) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(fy) << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 40
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " << (kTop + kBottom) / 2 << ")\">"
      << y_label << "</text>\n";

  // Data series with a small legend.
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % 4];
    if (!series[k].points.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\" points=\"";
      for (const auto& [x, y] : series[k].points) {
        out << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
      }
      out << "\"/>\n";
      for (const auto& [x, y] : series[k].points) {
        out << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
            << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    const double ly = kTop + 16.0 * static_cast<double>(k);
    out << "<line x1=\"" << kRight - 120 << "\" y1=\"" << ly << "\" x2=\""
        << kRight - 100 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kRight - 94 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[k].name
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw DataError("plot: write to '" + path + "' failed");
}

}  // namespace stablefair
