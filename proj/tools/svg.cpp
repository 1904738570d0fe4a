#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wavelqg::cli::svg {
namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 80, kRight = 110, kTop = 40, kBottom = 60;

struct Rgb {
  double r, g, b;
};

// Viridis sampled at five points.
constexpr std::array<Rgb, 5> kPalette{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string colour(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * (kPalette.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), kPalette.size() - 2);
  const double f = pos - static_cast<double>(i);
  const auto mix = [&](double a, double b) { return static_cast<int>(std::lround(a + f * (b - a))); };
  std::ostringstream os;
  os << "rgb(" << mix(kPalette[i].r, kPalette[i + 1].r) << ',' << mix(kPalette[i].g, kPalette[i + 1].g) << ','
     << mix(kPalette[i].b, kPalette[i + 1].b) << ')';
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
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

struct LogAxis {
  double lo, hi, px0, px1;
  double map(double v) const {
    const double t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return px0 + t * (px1 - px0);
  }
};

std::pair<double, double> positive_range(const std::vector<double>& v) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double x : v) {
    if (x > 0.0 && std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!(lo <= hi)) throw std::invalid_argument("plot data has no positive finite values");
  if (lo == hi) {
    lo /= 2.0;
    hi *= 2.0;
  }
  return {lo, hi};
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

void header(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
}

void decade_ticks(std::ostringstream& os, const LogAxis& ax, bool horizontal, double at) {
  const int d0 = static_cast<int>(std::ceil(std::log10(ax.lo) - 1e-9));
  const int d1 = static_cast<int>(std::floor(std::log10(ax.hi) + 1e-9));
  std::vector<double> ticks;
  for (int d = d0; d <= d1; ++d) ticks.push_back(std::pow(10.0, d));
  if (ticks.size() < 2) ticks = {ax.lo, std::sqrt(ax.lo * ax.hi), ax.hi};
  for (double v : ticks) {
    const double p = ax.map(v);
    if (horizontal) {
      os << "<line x1=\"" << p << "\" y1=\"" << at << "\" x2=\"" << p << "\" y2=\"" << at + 5
         << "\" stroke=\"black\"/>\n<text x=\"" << p << "\" y=\"" << at + 18 << "\" text-anchor=\"middle\">"
         << num(v) << "</text>\n";
    } else {
      os << "<line x1=\"" << at - 5 << "\" y1=\"" << p << "\" x2=\"" << at << "\" y2=\"" << p
         << "\" stroke=\"black\"/>\n<text x=\"" << at - 8 << "\" y=\"" << p + 4 << "\" text-anchor=\"end\">"
         << num(v) << "</text>\n";
    }
  }
}

void axis_labels(std::ostringstream& os, const std::string& x_label, const std::string& y_label) {
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 18
     << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
     << "<text transform=\"translate(22," << (kTop + kHeight - kBottom) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
}

// Cell edges halfway between log-spaced centres.
std::vector<double> edges(const std::vector<double>& c) {
  std::vector<double> e(c.size() + 1);
  if (c.size() == 1) {
    e[0] = c[0] / std::sqrt(10.0);
    e[1] = c[0] * std::sqrt(10.0);
    return e;
  }
  for (std::size_t i = 1; i < c.size(); ++i) e[i] = std::sqrt(c[i - 1] * c[i]);
  e.front() = c.front() * c.front() / e[1];
  e.back() = c.back() * c.back() / e[c.size() - 1];
  return e;
}

}  // namespace

std::string render(const Heatmap& h) {
  if (h.x.empty() || h.y.empty() || h.z.size() != h.y.size()) throw std::invalid_argument("heatmap shape mismatch");
  const auto ex = edges(h.x);
  const auto ey = edges(h.y);
  const LogAxis ax{ex.front(), ex.back(), kLeft, kWidth - kRight};
  const LogAxis ay{ey.front(), ey.back(), kHeight - kBottom, kTop};

  std::vector<double> flat;
  for (const auto& row : h.z) {
    if (row.size() != h.x.size()) throw std::invalid_argument("heatmap shape mismatch");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  const auto [zlo, zhi] = positive_range(flat);
  const double llo = std::log10(zlo), lhi = std::log10(zhi);

  std::ostringstream os;
  header(os, h.title);
  for (std::size_t iy = 0; iy < h.y.size(); ++iy) {
    for (std::size_t ix = 0; ix < h.x.size(); ++ix) {
      const double x0 = ax.map(ex[ix]), x1 = ax.map(ex[ix + 1]);
      const double y0 = ay.map(ey[iy + 1]), y1 = ay.map(ey[iy]);
      const double z = h.z[iy][ix];
      const std::string fill = z > 0.0 && std::isfinite(z) ? colour((std::log10(z) - llo) / (lhi - llo)) : "grey";
      os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0 + 0.3 << "\" height=\""
         << y1 - y0 + 0.3 << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kRight - kLeft << "\" height=\""
     << kHeight - kBottom - kTop << "\" fill=\"none\" stroke=\"black\"/>\n";

  if (!h.overlay.empty()) {
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : h.overlay) {
      if (x < ex.front() || x > ex.back() || y < ey.front() || y > ey.back()) continue;
      os << ax.map(x) << ',' << ay.map(y) << ' ';
    }
    os << "\"/>\n";
  }
  decade_ticks(os, ax, true, kHeight - kBottom);
  decade_ticks(os, ay, false, kLeft);
  axis_labels(os, h.x_label, h.y_label);

  // Colour bar.
  const double bx = kWidth - kRight + 20, bw = 18, top = kTop, bottom = kHeight - kBottom;
  constexpr int kSteps = 64;
  for (int i = 0; i < kSteps; ++i) {
    const double t0 = static_cast<double>(i) / kSteps;
    const double y = bottom - (i + 1) * (bottom - top) / kSteps;
    os << "<rect x=\"" << bx << "\" y=\"" << y << "\" width=\"" << bw << "\" height=\""
       << (bottom - top) / kSteps + 0.3 << "\" fill=\"" << colour(t0 + 0.5 / kSteps) << "\"/>\n";
  }
  os << "<text x=\"" << bx + bw + 4 << "\" y=\"" << bottom << "\">" << num(zlo) << "</text>\n"
     << "<text x=\"" << bx + bw + 4 << "\" y=\"" << top + 10 << "\">" << num(zhi) << "</text>\n"
     << "<text transform=\"translate(" << bx + bw + 30 << ',' << (top + bottom) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(h.z_label) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string render(const LinePlot& p) {
  if (p.x.empty()) throw std::invalid_argument("line plot needs x values");
  std::vector<double> all;
  for (const auto& s : p.series) {
    if (s.y.size() != p.x.size()) throw std::invalid_argument("line plot series length mismatch");
    all.insert(all.end(), s.y.begin(), s.y.end());
  }
  const auto [xlo, xhi] = positive_range(p.x);
  const auto [ylo, yhi] = positive_range(all);
  const LogAxis ax{xlo, xhi, kLeft, kWidth - kRight};
  const LogAxis ay{ylo / 1.2, yhi * 1.2, kHeight - kBottom, kTop};
  static const std::array<const char*, 4> kColours{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ostringstream os;
  header(os, p.title);
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kRight - kLeft << "\" height=\""
     << kHeight - kBottom - kTop << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t s = 0; s < p.series.size(); ++s) {
    const char* stroke = kColours[s % kColours.size()];
    os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      const double y = p.series[s].y[i];
      if (y > 0.0 && std::isfinite(y)) os << ax.map(p.x[i]) << ',' << ay.map(y) << ' ';
    }
    os << "\"/>\n";
    const double ly = kTop + 16 + 18 * static_cast<double>(s);
    os << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 30
       << "\" y2=\"" << ly << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n<text x=\""
       << kWidth - kRight + 34 << "\" y=\"" << ly + 4 << "\">" << escape(p.series[s].name) << "</text>\n";
  }
  decade_ticks(os, ax, true, kHeight - kBottom);
  decade_ticks(os, ay, false, kLeft);
  axis_labels(os, p.x_label, p.y_label);
  os << "</svg>\n";
  return os.str();
}

}  // namespace wavelqg::cli::svg
