#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kinel::svg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// short viridis ramp, linearly interpolated
struct Color {
  double r, g, b;
};
constexpr Color kRamp[] = {
    {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
    {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
    {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.478, 0.821, 0.318},
    {0.741, 0.873, 0.150}, {0.993, 0.906, 0.144}};

std::string color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int n = sizeof(kRamp) / sizeof(kRamp[0]) - 1;
  const double x = t * n;
  const int i = std::min(static_cast<int>(x), n - 1);
  const double f = x - i;
  const auto mix = [&](double a, double b) { return a + f * (b - a); };
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(255 * mix(kRamp[i].r, kRamp[i + 1].r)),
                static_cast<int>(255 * mix(kRamp[i].g, kRamp[i + 1].g)),
                static_cast<int>(255 * mix(kRamp[i].b, kRamp[i + 1].b)));
  return buf;
}

}  // namespace

void write_panels(const std::string& path, const std::vector<Panel>& panels,
                  int columns) {
  if (panels.empty()) throw std::invalid_argument("no panels");
  const int cell = 2;
  const int pw = panels[0].n_phi * cell;
  const int ph = panels[0].n_theta * cell;
  const int margin = 28;
  const int rows = (static_cast<int>(panels.size()) + columns - 1) / columns;
  const int width = columns * (pw + margin) + margin;
  const int height = rows * (ph + margin) + margin;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    const int px = margin + (static_cast<int>(p) % columns) * (pw + margin);
    const int py = margin + (static_cast<int>(p) / columns) * (ph + margin);

    double lo = panel.values[0], hi = panel.values[0];
    for (double v : panel.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double span = (hi > lo) ? hi - lo : 1.0;

    out << "<text x='" << px << "' y='" << py - 8
        << "' font-family='monospace' font-size='11'>" << panel.title
        << " [" << lo << ", " << hi << "]</text>\n";
    for (int i = 0; i < panel.n_theta; ++i)
      for (int j = 0; j < panel.n_phi; ++j) {
        const double v = panel.values[i * panel.n_phi + j];
        out << "<rect x='" << px + j * cell << "' y='" << py + i * cell
            << "' width='" << cell << "' height='" << cell << "' fill='"
            << color((v - lo) / span) << "'/>\n";
      }
    for (const Vector3d& m : panel.markers) {
      for (int sgn : {1, -1}) {
        const Vector3d d = sgn * m;
        const double th = std::acos(std::clamp(d[2], -1.0, 1.0));
        double phi = std::atan2(d[1], d[0]);
        if (phi < 0) phi += 2 * kPi;
        const double x = px + phi / (2 * kPi) * pw;
        const double y = py + th / kPi * ph;
        out << "<circle cx='" << x << "' cy='" << y
            << "' r='3' fill='none' stroke='red' stroke-width='1.2'/>\n";
      }
    }
  }
  out << "</svg>\n";
}

}  // namespace kinel::svg
