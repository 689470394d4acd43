#include "kinel/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kinel/parallel.hpp"

namespace kinel {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  // Newton iteration on P_n with the three-term recurrence; symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

SphereRule build_rule(int n_polar, int n_azimuth) {
  if (n_polar < 1 || n_azimuth < 1)
    throw std::invalid_argument("build_rule: orders must be >= 1");
  std::vector<double> ct, cw;
  gauss_legendre(n_polar, ct, cw);

  SphereRule rule;
  rule.n_polar = n_polar;
  rule.n_azimuth = n_azimuth;
  rule.nodes.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  rule.weights.reserve(rule.nodes.capacity());
  const double wphi = 2.0 * kPi / n_azimuth;
  for (int i = 0; i < n_polar; ++i) {
    const double cos_th = ct[i];
    const double sin_th = std::sqrt(std::max(0.0, 1.0 - cos_th * cos_th));
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = 2.0 * kPi * j / n_azimuth;
      rule.nodes.emplace_back(sin_th * std::cos(phi), sin_th * std::sin(phi),
                              cos_th);
      rule.weights.push_back(cw[i] * wphi);
    }
  }
  return rule;
}

double integrate(const SphereRule& rule,
                 const std::function<double(std::size_t, const Vector3d&)>& f) {
  std::vector<double> terms(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = f(i, rule.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrate: non-finite integrand at node " << i << " ("
         << rule.nodes[i][0] << ", " << rule.nodes[i][1] << ", "
         << rule.nodes[i][2] << ")";
      throw std::runtime_error(os.str());
    }
    terms[i] = rule.weights[i] * v;
  }
  return pairwise_sum(terms);
}

}  // namespace kinel
