#include "recip/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace recip {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

std::string fmt(long double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(x));
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

struct Canvas {
  const RenderOptions &o;
  long double scale, height;

  explicit Canvas(const RenderOptions &opt)
      : o(opt), scale(opt.width / (opt.xmax - opt.xmin)), height((opt.ymax - opt.ymin) * scale) {}

  std::string X(long double x) const { return fmt((x - o.xmin) * scale); }
  std::string Y(long double y) const { return fmt((o.ymax - y) * scale); }

  bool inside(Cx z) const {
    const long double e = 1e-12L;
    return z.real() >= o.xmin - e && z.real() <= o.xmax + e && z.imag() >= o.ymin - e && z.imag() <= o.ymax + e;
  }

  // path data for the part of L over [sIn, sOut] inside the window
  std::string segment(const GeoLine &L, long double sIn, long double sOut) const {
    std::vector<long double> cuts{sIn, sOut};
    for (const GenCircle &b : {GenCircle{0, 0, 1, -o.ymax}, GenCircle{0, 0, 1, -o.ymin}, GenCircle{0, 1, 0, -o.xmin},
                               GenCircle{0, 1, 0, -o.xmax}})
      for (long double s : crossings(L, b, sIn, sOut)) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    bool vertical = std::isinf(L.u) || std::isinf(L.v);
    long double r = vertical ? 0 : std::fabs(L.u - L.v) / 2;
    std::string d;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      long double a = cuts[i], b = cuts[i + 1];
      if (!(b > a)) continue;
      if (std::isinf(a) && std::isinf(b)) continue;
      long double mid = std::isinf(b) ? a + 1 : std::isinf(a) ? b - 1 : (a + b) / 2;
      if (!inside(L.at(mid))) continue;
      if (std::isinf(a) || std::isinf(b)) continue; // unbounded piece above the window never survives
      Cx p = L.at(a), q = L.at(b);
      d += "M" + X(p.real()) + " " + Y(p.imag());
      if (vertical) {
        d += " L" + X(q.real()) + " " + Y(q.imag());
      } else {
        std::string R = fmt(r * scale);
        d += " A" + R + " " + R + " 0 0 " + (p.real() < q.real() ? "1" : "0") + " " + X(q.real()) + " " + Y(q.imag());
      }
      d += " ";
    }
    if (!d.empty()) d.pop_back();
    return d;
  }
};

template <class S> GeoLine sideLine(const DomainSide<S> &s) {
  auto [u, v] = s.q.endpoints();
  return GeoLine::through(u, v);
}

} // namespace

template <class S> RenderOptions defaultView(const GroupPreset<S> &g) {
  const auto &D = g.domain;
  long double xlo = kInf, xhi = -kInf, ytop = 0;
  for (const auto &v : D.vertices) {
    xlo = std::min(xlo, v.real());
    xhi = std::max(xhi, v.real());
    ytop = std::max(ytop, v.imag());
  }
  for (const auto &s : D.sides) {
    GeoLine L = sideLine(s);
    auto c = clipLine(D, L);
    if (!c || std::isinf(c->sIn) || std::isinf(c->sOut)) continue;
    for (int k = 0; k <= 64; ++k) ytop = std::max(ytop, L.at(c->sIn + (c->sOut - c->sIn) * k / 64).imag());
  }
  RenderOptions o;
  long double pad = 0.1L * std::max(xhi - xlo, 0.5L);
  o.xmin = xlo - pad;
  o.xmax = xhi + pad;
  o.ymin = 0;
  o.ymax = D.cusped ? ytop + 1 : ytop + pad;
  return o;
}

template <class S>
std::string renderSVG(const GroupPreset<S> &g, const std::vector<ArcDecomposition<S>> &classes,
                      const RenderOptions &opt, const std::vector<std::string> &labels) {
  if (!(opt.xmax > opt.xmin) || !(opt.ymax > opt.ymin) || opt.ymin < 0 || opt.width <= 0 || !(opt.strokeWidth > 0))
    throw Error(Errc::InvalidConfiguration, "render window must have positive size");
  Canvas cv(opt);
  std::ostringstream os;
  std::string W = std::to_string(opt.width), H = fmt(cv.height);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<desc>" << escape(opt.comment.empty() ? g.name : opt.comment) << "</desc>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"#ffffff\"/>\n";
  os << "<g id=\"domain\" fill=\"none\" stroke=\"#000000\" stroke-width=\"" << fmt(1.5 * opt.strokeWidth) << "\">\n";
  for (const auto &s : g.domain.sides) {
    GeoLine L = sideLine(s);
    auto c = clipLine(g.domain, L);
    if (!c) continue;
    // ideal ends: go far enough that the window clip decides
    long double sIn = std::isinf(c->sIn) ? std::min(c->sOut, 0.0L) - 60 : c->sIn;
    long double sOut = std::isinf(c->sOut) ? std::max(c->sIn, 0.0L) + 60 : c->sOut;
    std::string d = cv.segment(L, sIn, sOut);
    if (!d.empty()) os << "<path d=\"" << d << "\"/>\n";
  }
  os << "</g>\n";
  os << "<g id=\"geodesics\" fill=\"none\" stroke-width=\"" << fmt(opt.strokeWidth) << "\">\n";
  constexpr std::size_t nColors = sizeof(kPalette) / sizeof(kPalette[0]);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    std::size_t shift = static_cast<std::size_t>(((opt.colorSeed % static_cast<int>(nColors)) + nColors) % nColors);
    os << "<g class=\"geodesic\" data-rank=\"" << k << "\" stroke=\"" << kPalette[(k + shift) % nColors] << "\">\n";
    for (const auto &arc : classes[k].arcs) {
      std::string d = cv.segment(arc.line, arc.clip.sIn, arc.clip.sOut);
      if (!d.empty()) os << "<path d=\"" << d << "\"/>\n";
    }
    if (opt.labels && k < labels.size() && !classes[k].arcs.empty()) {
      const auto &a = classes[k].arcs.front();
      Cx m = a.line.at((a.clip.sIn + a.clip.sOut) / 2);
      if (cv.inside(m))
        os << "<text x=\"" << cv.X(m.real()) << "\" y=\"" << cv.Y(m.imag()) << "\" font-size=\"10\" stroke=\"none\" fill=\""
           << kPalette[(k + shift) % nColors] << "\">" << escape(labels[k]) << "</text>\n";
    }
    os << "</g>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void writeFile(const std::string &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(Errc::Io, "write to " + path + " failed");
}

template RenderOptions defaultView(const GroupPreset<AlgebraicInt> &);
template RenderOptions defaultView(const GroupPreset<Real> &);
template std::string renderSVG(const GroupPreset<AlgebraicInt> &, const std::vector<ArcDecomposition<AlgebraicInt>> &,
                               const RenderOptions &, const std::vector<std::string> &);
template std::string renderSVG(const GroupPreset<Real> &, const std::vector<ArcDecomposition<Real>> &,
                               const RenderOptions &, const std::vector<std::string> &);

} // namespace recip
