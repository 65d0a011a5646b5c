#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractal_spectra {

namespace detail {
/// Locale-independent fixed-point formatting; keeps the emitted bytes
/// identical across runs and platforms.
inline std::string fixed(double v, int precision = 4) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  if (res.ec != std::errc{}) throw std::runtime_error("svg: number formatting failed");
  return std::string(buf, res.ptr);
}
}  // namespace detail

/// Polyline chart of a vertex function over arc-length position, with the
/// Dirichlet zeros pinned to the frame edges and tick marks at the local
/// extrema. Fixed 800x400 frame; output is byte-deterministic.
inline std::string eigenfunction_svg(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("eigenfunction_svg: need at least 2 points");
  const double w = 800.0, h = 400.0, pad = 20.0;
  double amp = 0.0;
  for (double v : values) amp = std::max(amp, std::fabs(v));
  if (amp == 0.0) amp = 1.0;

  const auto px = [&](std::size_t i) {
    return pad + (w - 2 * pad) * static_cast<double>(i) / static_cast<double>(values.size() - 1);
  };
  const auto py = [&](double v) { return h / 2.0 - v / amp * (h / 2.0 - pad); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 400\" "
         "width=\"800\" height=\"400\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"400\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + detail::fixed(pad) + "\" y1=\"" + detail::fixed(h / 2) +
         "\" x2=\"" + detail::fixed(w - pad) + "\" y2=\"" + detail::fixed(h / 2) +
         "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  svg += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) svg += ' ';
    svg += detail::fixed(px(i)) + "," + detail::fixed(py(values[i]));
  }
  svg += "\"/>\n";
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const bool peak = values[i] > values[i - 1] && values[i] >= values[i + 1];
    const bool valley = values[i] < values[i - 1] && values[i] <= values[i + 1];
    if (!peak && !valley) continue;
    svg += "<line x1=\"" + detail::fixed(px(i)) + "\" y1=\"" + detail::fixed(h / 2 - 4) +
           "\" x2=\"" + detail::fixed(px(i)) + "\" y2=\"" + detail::fixed(h / 2 + 4) +
           "\" stroke=\"#c44\" stroke-width=\"1\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

inline void write_eigenfunction_svg(const std::string& path, const std::vector<double>& values) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("svg: cannot open " + path);
  os << eigenfunction_svg(values);
}

}  // namespace fractal_spectra
