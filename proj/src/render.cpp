#include "geocake/render.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <string_view>

namespace geocake {

namespace {

constexpr double kPanel = 320;
constexpr double kMargin = 24;
constexpr std::array<std::string_view, 8> kPalette{"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                                    "#b07aa1", "#76b7b2", "#edc948", "#9c755f"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

// Maps cake coordinates into a panel with y pointing up.
struct Frame {
  Box world;
  double ox = 0;
  double oy = 0;
  double scale = 1;

  Frame(const Box& w, double left, double top) : world(w), ox(left), oy(top) {
    scale = kPanel / std::max(w.width(), w.height());
  }
  double x(double wx) const { return ox + (wx - world.xmin) * scale; }
  double y(double wy) const { return oy + (world.ymax - wy) * scale; }

  std::string rect(const Box& b) const {
    return "<rect x=\"" + num(x(b.xmin)) + "\" y=\"" + num(y(b.ymax)) + "\" width=\"" + num(b.width() * scale) +
           "\" height=\"" + num(b.height() * scale) + "\"/>";
  }

  std::string shape(const Region& r) const {
    if (r.is_empty()) return {};
    if (const auto* p = r.as_polygon()) {
      std::string pts;
      for (const auto& v : p->vertices) pts += (pts.empty() ? "" : " ") + num(x(v.x)) + "," + num(y(v.y));
      return "<polygon points=\"" + pts + "\"/>";
    }
    const auto boxes = r.is_raster() ? r.as_raster()->row_runs() : r.boxes();
    std::string out;
    for (const auto& b : boxes) out += rect(b);
    return out;
  }
};

std::string header(double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string cake_outline(const Frame& f, const Region& cake) {
  return "<g fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">" + f.shape(cake) + "</g>\n";
}

}  // namespace

std::string render_svg(const Allocation& alloc, const Region& cake) {
  const double legend = 20.0 * static_cast<double>(alloc.shares.size() + 1);
  const Frame f(cake.bounds(), kMargin, kMargin);
  std::string out = header(kPanel + 2 * kMargin, kPanel + 2 * kMargin + legend);
  out += "<g fill=\"#eeeeee\" stroke=\"none\">" + f.shape(cake) + "</g>\n";
  for (std::size_t i = 0; i < alloc.shares.size(); ++i) {
    const auto color = std::string(kPalette[i % kPalette.size()]);
    const auto& s = alloc.shares[i];
    out += "<g fill=\"" + color + "\" fill-opacity=\"0.45\" stroke=\"none\">" + f.shape(s.piece) + "</g>\n";
    out += "<g fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" stroke-dasharray=\"5,3\">" +
           f.shape(s.usable) + "</g>\n";
  }
  out += cake_outline(f, cake);
  double y = kPanel + 2 * kMargin;
  out += "<text x=\"" + num(kMargin) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"12\">" +
         escape(alloc.procedure + ", guarantee " + alloc.guarantee.str()) + "</text>\n";
  for (std::size_t i = 0; i < alloc.shares.size(); ++i) {
    y += 20;
    const auto& s = alloc.shares[i];
    out += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(y - 10) + "\" width=\"12\" height=\"12\" fill=\"" +
           std::string(kPalette[i % kPalette.size()]) + "\" fill-opacity=\"0.45\"/>";
    out += "<text x=\"" + num(kMargin + 18) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(s.agent + ": value " + num(s.value)) + "</text>\n";
  }
  return out + "</svg>\n";
}

std::string render_panels(const Region& cake, const std::vector<std::vector<Region>>& partitions,
                          const std::vector<std::string>& captions) {
  const double step = kPanel + 2 * kMargin;
  std::string out = header(step * static_cast<double>(std::max<std::size_t>(1, partitions.size())), step + 20);
  for (std::size_t p = 0; p < partitions.size(); ++p) {
    const Frame f(cake.bounds(), kMargin + step * static_cast<double>(p), kMargin + 20);
    if (p < captions.size()) {
      out += "<text x=\"" + num(f.ox) + "\" y=\"" + num(kMargin + 10) +
             "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(captions[p]) + "</text>\n";
    }
    for (std::size_t i = 0; i < partitions[p].size(); ++i) {
      out += "<g fill=\"" + std::string(kPalette[i % kPalette.size()]) +
             "\" fill-opacity=\"0.45\" stroke=\"black\" stroke-width=\"0.5\" stroke-dasharray=\"2,2\">" +
             f.shape(partitions[p][i]) + "</g>\n";
    }
    out += cake_outline(f, cake);
  }
  return out + "</svg>\n";
}

}  // namespace geocake
