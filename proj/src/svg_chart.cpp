#include "dqwifi/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace dqwifi {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 160;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const {
    const double span = x1 > x0 ? x1 - x0 : 1.0;
    return kLeft + (x - x0) / span * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    const double span = y1 > y0 ? y1 - y0 : 1.0;
    return kHeight - kBottom - (y - y0) / span * (kHeight - kTop - kBottom);
  }
};

void open_svg(std::ostringstream& os, const ChartLabels& labels) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(labels.title) << "</text>\n"
     << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\">" << escape(labels.x) << "</text>\n"
     << "<text transform=\"translate(16," << kHeight / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(labels.y) << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f) {
  os << "<g stroke=\"black\">"
     << "<line x1=\"" << num(f.px(f.x0)) << "\" y1=\"" << num(f.py(f.y0)) << "\" x2=\""
     << num(f.px(f.x1)) << "\" y2=\"" << num(f.py(f.y0)) << "\"/>"
     << "<line x1=\"" << num(f.px(f.x0)) << "\" y1=\"" << num(f.py(f.y0)) << "\" x2=\""
     << num(f.px(f.x0)) << "\" y2=\"" << num(f.py(f.y1)) << "\"/></g>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
    os << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(f.py(f.y0) + 16)
       << "\" text-anchor=\"middle\">" << tick(x) << "</text>\n"
       << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(f.py(y) + 4)
       << "\" text-anchor=\"end\">" << tick(y) << "</text>\n";
  }
}

}  // namespace

std::string line_chart_svg(const std::vector<Series>& series, const ChartLabels& labels) {
  Frame f{0, 1, 0, 1};
  bool first = true;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (first) {
        f = {x, x, y, y};
        first = false;
      }
      f.x0 = std::min(f.x0, x);
      f.x1 = std::max(f.x1, x);
      f.y0 = std::min(f.y0, y);
      f.y1 = std::max(f.y1, y);
    }
  }
  f.y0 = std::min(f.y0, 0.0);

  std::ostringstream os;
  open_svg(os, labels);
  axes(os, f);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const char* colour = kPalette[i % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    double prev_y = 0.0;
    bool started = false;
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (s.step && started) os << num(f.px(x)) << ',' << num(f.py(prev_y)) << ' ';
      os << num(f.px(x)) << ',' << num(f.py(y)) << ' ';
      prev_y = y;
      started = true;
    }
    os << "\"/>\n";
    const double ly = kTop + 18.0 * static_cast<double>(i);
    os << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << num(ly) << "\" width=\"12\" "
       << "height=\"3\" fill=\"" << colour << "\"/><text x=\"" << kWidth - kRight + 30
       << "\" y=\"" << num(ly + 5) << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string cdf_chart_svg(const std::vector<std::pair<std::string, DeltaQ>>& curves,
                          const ChartLabels& labels) {
  std::vector<Series> series;
  for (const auto& [name, d] : curves) {
    Series s{name, {}, true};
    double acc = 0.0;
    for (const Atom& a : d.atoms()) {
      if (s.points.empty()) s.points.emplace_back(a.delay, 0.0);
      acc += a.mass;
      s.points.emplace_back(a.delay, acc);
    }
    series.push_back(std::move(s));
  }
  return line_chart_svg(series, labels);
}

std::string heatmap_svg(const std::vector<HeatmapCell>& cells, const ChartLabels& labels) {
  std::set<int> sizes;
  std::set<int> counts;
  double extent = 1e-9;
  for (const HeatmapCell& c : cells) {
    sizes.insert(c.packet_size);
    counts.insert(c.n_stations);
    extent = std::max(extent, std::abs(c.percent_change));
  }
  const std::vector<int> xs(sizes.begin(), sizes.end());
  const std::vector<int> ys(counts.begin(), counts.end());
  const double cw = (kWidth - kLeft - kRight) / std::max<std::size_t>(1, xs.size());
  const double ch = (kHeight - kTop - kBottom) / std::max<std::size_t>(1, ys.size());

  std::ostringstream os;
  open_svg(os, labels);
  for (const HeatmapCell& c : cells) {
    const auto xi = static_cast<double>(
        std::lower_bound(xs.begin(), xs.end(), c.packet_size) - xs.begin());
    const auto yi = static_cast<double>(
        std::lower_bound(ys.begin(), ys.end(), c.n_stations) - ys.begin());
    const double t = std::clamp(c.percent_change / extent, -1.0, 1.0);
    const int fade = static_cast<int>(255 * (1.0 - std::abs(t)));
    char colour[16];
    if (t >= 0) {
      std::snprintf(colour, sizeof colour, "#%02x%02xff", fade, fade);
    } else {
      std::snprintf(colour, sizeof colour, "#ff%02x%02x", fade, fade);
    }
    os << "<rect x=\"" << num(kLeft + xi * cw) << "\" y=\""
       << num(kHeight - kBottom - (yi + 1) * ch) << "\" width=\"" << num(cw)
       << "\" height=\"" << num(ch) << "\" fill=\"" << colour << "\"><title>n="
       << c.n_stations << " size=" << c.packet_size << " " << tick(c.percent_change)
       << "%</title></rect>\n";
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    os << "<text x=\"" << kLeft - 6 << "\" y=\""
       << num(kHeight - kBottom - (static_cast<double>(i) + 0.5) * ch + 4)
       << "\" text-anchor=\"end\">" << ys[i] << "</text>\n";
  }
  const std::size_t stride = std::max<std::size_t>(1, xs.size() / 8);
  for (std::size_t i = 0; i < xs.size(); i += stride) {
    os << "<text x=\"" << num(kLeft + (static_cast<double>(i) + 0.5) * cw) << "\" y=\""
       << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">" << xs[i] << "</text>\n";
  }
  os << "<text x=\"" << kWidth - kRight + 12 << "\" y=\"" << kTop + 10 << "\">blue: +"
     << tick(extent) << "%</text>\n<text x=\"" << kWidth - kRight + 12 << "\" y=\""
     << kTop + 28 << "\">red: -" << tick(extent) << "%</text>\n</svg>\n";
  return os.str();
}

}  // namespace dqwifi
