#include "artlang/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace artlang {

namespace {

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Short fixed format for labels inside plots.
std::string num_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void write_lines(const std::filesystem::path& path,
                 const std::string& content) {
  std::ofstream out(path);
  if (!out)
    throw AnalysisError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw AnalysisError("write failure on '" + path.string() + "'");
}

}  // namespace

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  write_lines(path, content);
}

void write_coefficients_csv(const std::filesystem::path& path,
                            const MixedModelFit& fit) {
  std::ostringstream out;
  out << "label,estimate,stderr\n";
  for (Eigen::Index i = 0; i < fit.beta.size(); ++i)
    out << fit.labels[static_cast<size_t>(i)] << ',' << num(fit.beta(i))
        << ',' << num(fit.se(i)) << '\n';
  write_lines(path, out.str());
}

void write_heatmap_csv(const std::filesystem::path& path,
                       const CoefficientHeatmap& heatmap) {
  std::ostringstream out;
  out << "row,column,value,stderr\n";
  for (Eigen::Index i = 0; i < heatmap.value.rows(); ++i)
    for (Eigen::Index j = 0; j < heatmap.value.cols(); ++j)
      out << heatmap.labels[static_cast<size_t>(i)] << ','
          << heatmap.labels[static_cast<size_t>(j)] << ','
          << num(heatmap.value(i, j)) << ',' << num(heatmap.se(i, j))
          << '\n';
  write_lines(path, out.str());
}

void write_group_csv(const std::filesystem::path& path,
                     const std::vector<GroupReportRow>& rows) {
  std::ostringstream out;
  out << "word_order,grammars,mean_perplexity\n";
  for (const GroupReportRow& r : rows)
    out << r.word_order << ',' << r.grammars << ','
        << num(r.mean_perplexity) << '\n';
  write_lines(path, out.str());
}

void write_density_csv(const std::filesystem::path& path,
                       const std::vector<DistributionReport>& reports) {
  std::ostringstream out;
  out << "label,x,density\n";
  for (const DistributionReport& rep : reports)
    for (const DensityPoint& p : rep.density)
      out << rep.label << ',' << num(p.x) << ',' << num(p.density) << '\n';
  write_lines(path, out.str());
}

namespace {

// Diverging blue-white-red scale on [-1, 1].
std::string diverging_color(double t) {
  t = std::clamp(t, -1.0, 1.0);
  int r, g, b;
  if (t < 0) {
    double a = -t;
    r = static_cast<int>(255 + a * (59 - 255));
    g = static_cast<int>(255 + a * (76 - 255));
    b = static_cast<int>(255 + a * (192 - 255));
  } else {
    r = static_cast<int>(255 + t * (180 - 255));
    g = static_cast<int>(255 + t * (4 - 255));
    b = static_cast<int>(255 + t * (38 - 255));
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

const char* const kSeriesColors[] = {"#3b4cc0", "#b40426", "#2e7d32",
                                     "#9c27b0", "#f57c00", "#00838f"};

}  // namespace

std::string heatmap_svg(const CoefficientHeatmap& heatmap) {
  const int k = static_cast<int>(heatmap.value.rows());
  const int cell = 56, margin = 90, legend = 60;
  const int width = margin + k * cell + legend + 30;
  const int height = margin + k * cell + 30;
  double vmax = heatmap.value.cwiseAbs().maxCoeff();
  if (vmax == 0) vmax = 1;

  std::ostringstream s;
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
    << "' height='" << height << "' font-family='sans-serif'>\n";
  s << "<rect width='100%' height='100%' fill='white'/>\n";
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double v = heatmap.value(i, j);
      int x = margin + j * cell, y = margin + i * cell;
      s << "<rect x='" << x << "' y='" << y << "' width='" << cell
        << "' height='" << cell << "' fill='" << diverging_color(v / vmax)
        << "' stroke='#777'/>\n";
      bool dark = std::abs(v) > 0.6 * vmax;
      s << "<text x='" << x + cell / 2 << "' y='" << y + cell / 2 + 4
        << "' text-anchor='middle' font-size='11' fill='"
        << (dark ? "white" : "black") << "'>" << num_short(v) << "</text>\n";
    }
    int ty = margin + i * cell + cell / 2 + 4;
    s << "<text x='" << margin - 8 << "' y='" << ty
      << "' text-anchor='end' font-size='12'>" << heatmap.labels[i]
      << "</text>\n";
    s << "<text x='" << margin + i * cell + cell / 2 << "' y='"
      << margin - 10 << "' text-anchor='middle' font-size='12'>"
      << heatmap.labels[i] << "</text>\n";
  }
  // Legend: vertical gradient bar from +vmax to -vmax.
  int lx = margin + k * cell + 20, ly = margin, lh = k * cell;
  for (int step = 0; step < lh; ++step) {
    double t = 1.0 - 2.0 * step / (lh - 1);
    s << "<rect x='" << lx << "' y='" << ly + step
      << "' width='16' height='2' fill='" << diverging_color(t) << "'/>\n";
  }
  s << "<text x='" << lx + 20 << "' y='" << ly + 8 << "' font-size='11'>"
    << num_short(vmax) << "</text>\n";
  s << "<text x='" << lx + 20 << "' y='" << ly + lh
    << "' font-size='11'>" << num_short(-vmax) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string density_svg(const std::vector<DistributionReport>& reports) {
  const int width = 640, height = 400, ml = 60, mr = 20, mt = 20, mb = 46;
  double xmin = 0, xmax = 1, ymax = 0;
  bool first = true;
  for (const DistributionReport& rep : reports) {
    for (const DensityPoint& p : rep.density) {
      if (first) {
        xmin = xmax = p.x;
        first = false;
      }
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymax = std::max(ymax, p.density);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= 0) ymax = 1;

  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  auto py = [&](double y) {
    return height - mb - y / ymax * (height - mt - mb);
  };

  std::ostringstream s;
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
    << "' height='" << height << "' font-family='sans-serif'>\n";
  s << "<rect width='100%' height='100%' fill='white'/>\n";
  s << "<line x1='" << ml << "' y1='" << height - mb << "' x2='"
    << width - mr << "' y2='" << height - mb << "' stroke='black'/>\n";
  s << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
    << height - mb << "' stroke='black'/>\n";
  for (int i = 0; i <= 4; ++i) {
    double x = xmin + (xmax - xmin) * i / 4;
    s << "<text x='" << px(x) << "' y='" << height - mb + 18
      << "' text-anchor='middle' font-size='11'>" << num_short(x)
      << "</text>\n";
    double y = ymax * i / 4;
    s << "<text x='" << ml - 6 << "' y='" << py(y) + 4
      << "' text-anchor='end' font-size='11'>" << num_short(y)
      << "</text>\n";
  }
  size_t ci = 0;
  for (const DistributionReport& rep : reports) {
    const char* color = kSeriesColors[ci % 6];
    s << "<polyline fill='none' stroke='" << color
      << "' stroke-width='1.5' points='";
    for (const DensityPoint& p : rep.density)
      s << px(p.x) << ',' << py(p.density) << ' ';
    s << "'/>\n";
    s << "<text x='" << width - mr - 8 << "' y='"
      << mt + 16 + 16 * static_cast<int>(ci)
      << "' text-anchor='end' font-size='12' fill='" << color << "'>"
      << rep.label << "</text>\n";
    ++ci;
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace artlang
