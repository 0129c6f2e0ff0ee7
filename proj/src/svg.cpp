#include "pqlap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pqlap {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string render_diagram_svg(const std::vector<Branch>& branches,
                               const std::vector<double>& reference_eigenvalues,
                               const std::string& title) {
  double x_min = 1e300, x_max = -1e300, y_min = 0.0, y_max = -1e300;
  for (const Branch& br : branches)
    for (const BranchPoint& pt : br.points) {
      x_min = std::min(x_min, pt.lambda);
      x_max = std::max(x_max, pt.lambda);
      y_max = std::max(y_max, pt.norm_1q);
    }
  for (double lam : reference_eigenvalues) {
    x_min = std::min(x_min, lam);
    x_max = std::max(x_max, lam);
  }
  if (!(x_max > x_min)) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (!(y_max > 0.0)) y_max = 1.0;
  const double x_pad = 0.05 * (x_max - x_min);
  x_min -= x_pad;
  x_max += x_pad;
  y_max *= 1.05;

  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  auto px = [&](double lam) {
    return kMarginL + plot_w * (lam - x_min) / (x_max - x_min);
  };
  auto py = [&](double norm) {
    return kMarginT + plot_h * (1.0 - (norm - y_min) / (y_max - y_min));
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // Axes.
  svg << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT + plot_h << "\" x2=\""
      << kMarginL + plot_w << "\" y2=\"" << kMarginT + plot_h
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
      << "\" y2=\"" << kMarginT + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kMarginL + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << "lambda</text>\n";
  svg << "<text x=\"18\" y=\"" << kMarginT + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << kMarginT + plot_h / 2 << ")\">"
      << "||u||_{1,q}</text>\n";

  // Axis ticks (4 per axis).
  for (int i = 0; i <= 4; ++i) {
    const double lam = x_min + (x_max - x_min) * i / 4.0;
    const double x = px(lam);
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kMarginT + plot_h << "\" x2=\""
        << fmt(x) << "\" y2=\"" << kMarginT + plot_h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << kMarginT + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(lam) << "</text>\n";
    const double nv = y_min + (y_max - y_min) * i / 4.0;
    const double y = py(nv);
    svg << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << fmt(y) << "\" x2=\""
        << kMarginL << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kMarginL - 8 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(nv) << "</text>\n";
  }

  // Reference eigenvalues as dashed asymptote markers.
  for (size_t i = 0; i < reference_eigenvalues.size(); ++i) {
    const double x = px(reference_eigenvalues[i]);
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kMarginT << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << kMarginT + plot_h
        << "\" stroke=\"#888\" stroke-dasharray=\"5,4\"/>\n";
    svg << "<text x=\"" << fmt(x + 3) << "\" y=\"" << kMarginT + 14
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\">"
        << "lambda_" << i + 1 << "^D</text>\n";
  }

  // Branch polylines.
  for (size_t b = 0; b < branches.size(); ++b) {
    const Branch& br = branches[b];
    if (br.points.empty()) continue;
    const char* color = kColors[b % (sizeof(kColors) / sizeof(kColors[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (const BranchPoint& pt : br.points)
      svg << fmt(px(pt.lambda)) << ',' << fmt(py(pt.norm_1q)) << ' ';
    svg << "\"/>\n";
    const BranchPoint& last = br.points.front();
    svg << "<text x=\"" << fmt(px(last.lambda) + 4) << "\" y=\""
        << fmt(py(last.norm_1q)) << "\" font-family=\"sans-serif\" font-size=\"11\" "
        << "fill=\"" << color << "\">k=" << br.mode << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pqlap
