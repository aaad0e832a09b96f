#pragma once

// Small SVG writer for scatter, line and contour plots.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ordzero::svg {

struct Style {
  std::string color = "#1f77b4";
  double width = 1.5;
  double radius = 2.5;
  std::string dash;  ///< stroke-dasharray, empty for solid
};

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> p = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                             "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};
  return p;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

inline std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", x);
  return b;
}

inline std::string tick_label(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%g", std::abs(x) < 1e-12 ? 0.0 : x);
  return b;
}

/// Ticks at 1, 2 or 5 times a power of ten, about `target` of them.
inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double x = std::ceil(lo / step) * step; x <= hi + 1e-9 * step; x += step) t.push_back(x);
  return t;
}

using Points = std::vector<std::pair<double, double>>;

/// One segment (x0, y0, x1, y1) per cell crossing of `level` (marching squares).
/// Values are node samples v[b * nx + a] at (x0 + a h, y0 + b h).
inline std::vector<std::array<double, 4>> contour(const std::vector<double>& v, int nx, int ny, double x0, double y0,
                                                  double h, double level) {
  std::vector<std::array<double, 4>> segs;
  const auto at = [&](int a, int b) { return v[static_cast<std::size_t>(b) * nx + a]; };
  for (int b = 0; b + 1 < ny; ++b)
    for (int a = 0; a + 1 < nx; ++a) {
      const double c[4] = {at(a, b), at(a + 1, b), at(a + 1, b + 1), at(a, b + 1)};
      const double px[4] = {0, 1, 1, 0}, py[4] = {0, 0, 1, 1};
      std::vector<std::pair<double, double>> cross;
      for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        if ((c[e] < level) == (c[f] < level)) continue;
        const double t = std::clamp((level - c[e]) / (c[f] - c[e]), 0.0, 1.0);
        cross.emplace_back(x0 + (a + px[e] + t * (px[f] - px[e])) * h, y0 + (b + py[e] + t * (py[f] - py[e])) * h);
      }
      // Saddles give four crossings; pair them in edge order.
      for (std::size_t i = 0; i + 1 < cross.size(); i += 2)
        segs.push_back({cross[i].first, cross[i].second, cross[i + 1].first, cross[i + 1].second});
    }
  return segs;
}

class Plot {
 public:
  Plot(std::string title, std::string xlabel, std::string ylabel, int width = 760, int height = 520)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), w_(width), h_(height) {}

  void log_x(bool on = true) { logx_ = on; }
  void equal_aspect(bool on = true) { equal_ = on; }

  void line(Points pts, Style s, std::string label = {}) { add(Item::polyline, std::move(pts), std::move(s), std::move(label)); }
  void scatter(Points pts, Style s, std::string label = {}) { add(Item::dots, std::move(pts), std::move(s), std::move(label)); }
  /// Circle of radius r in x-data units (meaningful with equal aspect).
  void circle(double cx, double cy, double r, Style s) {
    add(Item::ring, {{cx, cy}, {cx - r, cy - r}, {cx + r, cy + r}}, std::move(s), {});
  }
  void segments(const std::vector<std::array<double, 4>>& segs, Style s, std::string label = {}) {
    Points pts;
    for (const auto& g : segs) {
      pts.emplace_back(g[0], g[1]);
      pts.emplace_back(g[2], g[3]);
    }
    add(Item::pairs, std::move(pts), std::move(s), std::move(label));
  }

  std::string str() const {
    double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
    for (const auto& it : items_)
      for (const auto& [x, y] : it.pts) {
        if (!std::isfinite(x) || !std::isfinite(y) || (logx_ && x <= 0)) continue;
        const double tx = tx_(x);
        xlo = std::min(xlo, tx);
        xhi = std::max(xhi, tx);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
      }
    if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    if (xhi == xlo) xlo -= 1, xhi += 1;
    if (yhi == ylo) ylo -= 1, yhi += 1;
    const double padx = 0.04 * (xhi - xlo), pady = 0.06 * (yhi - ylo);
    xlo -= padx, xhi += padx, ylo -= pady, yhi += pady;

    const double L = 78, R = 24, T = 40, B = 58;
    double pw = w_ - L - R, ph = h_ - T - B;
    if (equal_) {
      const double s = std::min(pw / (xhi - xlo), ph / (yhi - ylo));
      const double cx = 0.5 * (xlo + xhi), cy = 0.5 * (ylo + yhi);
      xlo = cx - 0.5 * pw / s, xhi = cx + 0.5 * pw / s;
      ylo = cy - 0.5 * ph / s, yhi = cy + 0.5 * ph / s;
    }
    const auto X = [&](double x) { return L + (tx_(x) - xlo) / (xhi - xlo) * pw; };
    const auto Xt = [&](double t) { return L + (t - xlo) / (xhi - xlo) * pw; };
    const auto Y = [&](double y) { return T + (yhi - y) / (yhi - ylo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\" viewBox=\"0 0 "
      << w_ << ' ' << h_ << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << w_ / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title_) << "</text>\n";
    o << "<defs><clipPath id=\"plot\"><rect x=\"" << num(L) << "\" y=\"" << num(T) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\"/></clipPath></defs>\n";

    // Axes and ticks.
    o << "<g stroke=\"#999\" stroke-width=\"0.5\">\n";
    std::vector<std::pair<double, std::string>> xt;
    if (logx_) {
      for (int e = int(std::floor(xlo)); e <= int(std::ceil(xhi)); ++e)
        if (e >= xlo && e <= xhi) xt.emplace_back(e, tick_label(std::pow(10.0, e)));
      if (xt.size() < 2) {
        // Narrow ranges: powers of two.
        xt.clear();
        for (int e = int(std::floor(xlo / std::log10(2.0))); e <= int(std::ceil(xhi / std::log10(2.0))); ++e) {
          const double t = e * std::log10(2.0);
          if (t >= xlo && t <= xhi) xt.emplace_back(t, tick_label(std::pow(2.0, e)));
        }
      }
    } else {
      for (double t : nice_ticks(xlo, xhi)) xt.emplace_back(t, tick_label(t));
    }
    for (const auto& [t, s] : xt)
      o << "<line x1=\"" << num(Xt(t)) << "\" y1=\"" << num(T) << "\" x2=\"" << num(Xt(t)) << "\" y2=\"" << num(T + ph)
        << "\" stroke-dasharray=\"2,3\"/>\n";
    const auto yt = nice_ticks(ylo, yhi);
    for (double t : yt)
      o << "<line x1=\"" << num(L) << "\" y1=\"" << num(Y(t)) << "\" x2=\"" << num(L + pw) << "\" y2=\"" << num(Y(t))
        << "\" stroke-dasharray=\"2,3\"/>\n";
    o << "</g>\n";
    o << "<rect x=\"" << num(L) << "\" y=\"" << num(T) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const auto& [t, s] : xt)
      o << "<text x=\"" << num(Xt(t)) << "\" y=\"" << num(T + ph + 16) << "\" text-anchor=\"middle\">" << s << "</text>\n";
    for (double t : yt)
      o << "<text x=\"" << num(L - 6) << "\" y=\"" << num(Y(t) + 4) << "\" text-anchor=\"end\">" << tick_label(t)
        << "</text>\n";
    o << "<text x=\"" << num(L + pw / 2) << "\" y=\"" << h_ - 16 << "\" text-anchor=\"middle\">" << escape(xlabel_)
      << "</text>\n";
    o << "<text transform=\"translate(18," << num(T + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(ylabel_) << "</text>\n";

    o << "<g clip-path=\"url(#plot)\">\n";
    for (const auto& it : items_) {
      const std::string dash = it.style.dash.empty() ? "" : " stroke-dasharray=\"" + it.style.dash + "\"";
      switch (it.kind) {
        case Item::polyline: {
          o << "<polyline fill=\"none\" stroke=\"" << it.style.color << "\" stroke-width=\"" << it.style.width << "\""
            << dash << " points=\"";
          for (const auto& [x, y] : it.pts)
            if (std::isfinite(x) && std::isfinite(y)) o << num(X(x)) << ',' << num(Y(y)) << ' ';
          o << "\"/>\n";
          break;
        }
        case Item::dots:
          for (const auto& [x, y] : it.pts)
            if (std::isfinite(x) && std::isfinite(y))
              o << "<circle cx=\"" << num(X(x)) << "\" cy=\"" << num(Y(y)) << "\" r=\"" << it.style.radius
                << "\" fill=\"" << it.style.color << "\"/>\n";
          break;
        case Item::ring: {
          const double r = std::abs(X(it.pts[2].first) - X(it.pts[0].first));
          o << "<circle cx=\"" << num(X(it.pts[0].first)) << "\" cy=\"" << num(Y(it.pts[0].second)) << "\" r=\""
            << num(r) << "\" fill=\"none\" stroke=\"" << it.style.color << "\" stroke-width=\"" << it.style.width
            << "\"" << dash << "/>\n";
          break;
        }
        case Item::pairs: {
          o << "<path fill=\"none\" stroke=\"" << it.style.color << "\" stroke-width=\"" << it.style.width << "\""
            << dash << " d=\"";
          for (std::size_t i = 0; i + 1 < it.pts.size(); i += 2)
            o << 'M' << num(X(it.pts[i].first)) << ' ' << num(Y(it.pts[i].second)) << 'L'
              << num(X(it.pts[i + 1].first)) << ' ' << num(Y(it.pts[i + 1].second));
          o << "\"/>\n";
          break;
        }
      }
    }
    o << "</g>\n";

    // Legend.
    double ly = T + 14;
    for (const auto& it : items_) {
      if (it.label.empty()) continue;
      o << "<rect x=\"" << num(L + 10) << "\" y=\"" << num(ly - 9) << "\" width=\"12\" height=\"10\" fill=\""
        << it.style.color << "\"/>\n";
      o << "<text x=\"" << num(L + 28) << "\" y=\"" << num(ly) << "\">" << escape(it.label) << "</text>\n";
      ly += 16;
    }
    o << "</svg>\n";
    return o.str();
  }

 private:
  struct Item {
    enum Kind { polyline, dots, ring, pairs } kind;
    Points pts;
    Style style;
    std::string label;
  };

  void add(typename Item::Kind k, Points pts, Style s, std::string label) {
    items_.push_back({k, std::move(pts), std::move(s), std::move(label)});
  }
  double tx_(double x) const { return logx_ ? std::log10(x) : x; }

  std::string title_, xlabel_, ylabel_;
  int w_, h_;
  bool logx_ = false, equal_ = false;
  std::vector<Item> items_;
};

}  // namespace ordzero::svg
