#include <doctest.h>

#include <cmath>
#include <complex>

#include "kinel/quadrature.hpp"
#include "oracles.hpp"

using namespace kinel;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("rule structure") {
  const auto rule = build_rule(12, 24);
  CHECK(rule.size() == 12 * 24);
  double wsum = 0.0;
  for (double w : rule.weights) {
    CHECK(w > 0.0);
    wsum += w;
  }
  CHECK(std::abs(wsum - 4 * kPi) <= 1e-13 * 4 * kPi);
  for (const auto& n : rule.nodes)
    CHECK(std::abs(n.norm() - 1.0) <= 1e-14);

  CHECK_THROWS_AS(build_rule(0, 8), std::invalid_argument);
}

TEST_CASE("basic moments") {
  const auto rule = build_rule(4, 8);
  const double one = integrate(rule, [](std::size_t, const Vector3d&) {
    return 1.0;
  });
  CHECK(std::abs(one - 4 * kPi) <= 1e-13 * 4 * kPi);

  const double zz = integrate(rule, [](std::size_t, const Vector3d& n) {
    return n[2] * n[2];
  });
  CHECK(std::abs(zz - 4 * kPi / 3) <= 1e-12);

  // odd moment vanishes by symmetry
  const double z = integrate(rule, [](std::size_t, const Vector3d& n) {
    return n[2];
  });
  CHECK(std::abs(z) <= 1e-14);
}

TEST_CASE("spherical harmonic products up to l = 8 at (16, 33)") {
  const auto rule = build_rule(16, 33);
  // Gram matrix of all (l, m) pairs with l <= 8
  struct LM {
    int l, m;
  };
  std::vector<LM> lm;
  for (int l = 0; l <= 8; ++l)
    for (int m = -l; m <= l; ++m) lm.push_back({l, m});

  std::vector<std::vector<std::complex<double>>> vals(
      lm.size(), std::vector<std::complex<double>>(rule.size()));
  for (std::size_t a = 0; a < lm.size(); ++a)
    for (std::size_t i = 0; i < rule.size(); ++i)
      vals[a][i] = oracle::spherical_harmonic(lm[a].l, lm[a].m, rule.nodes[i]);

  double worst = 0.0;
  for (std::size_t a = 0; a < lm.size(); ++a)
    for (std::size_t b = a; b < lm.size(); ++b) {
      std::complex<double> s = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i)
        s += rule.weights[i] * vals[a][i] * std::conj(vals[b][i]);
      const double expect = (a == b) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(s - expect));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("refinement monotonicity on smooth integrands") {
  const auto f1 = [](std::size_t, const Vector3d& n) {
    return std::exp(n[2]);
  };
  const auto f2 = [](std::size_t, const Vector3d& n) {
    return 1.0 / (2.0 + n[0] + 0.4 * n[1] * n[2]);
  };
  const auto f3 = [](std::size_t, const Vector3d& n) {
    return std::cos(3.0 * n[0] + n[1] - 2.0 * n[2]);
  };
  // exact values from a very fine rule
  const auto fine = build_rule(64, 128);
  const std::function<double(std::size_t, const Vector3d&)> fns[] = {f1, f2, f3};
  for (const auto& f : fns) {
    const double exact = integrate(fine, f);
    double prev = std::abs(integrate(build_rule(4, 8), f) - exact);
    for (int n = 8; n <= 16; n *= 2) {
      const double err = std::abs(integrate(build_rule(n, 2 * n), f) - exact);
      // decreasing until it bottoms out at roundoff
      CHECK((err <= prev || err < 1e-13));
      prev = err;
    }
  }
}

TEST_CASE("non-finite integrand is reported with its node") {
  const auto rule = build_rule(2, 4);
  CHECK_THROWS_WITH_AS(
      integrate(rule,
                [](std::size_t i, const Vector3d&) {
                  return (i == 3) ? std::nan("") : 1.0;
                }),
      doctest::Contains("node 3"), std::runtime_error);
}

TEST_CASE("gauss-legendre nodes match known values") {
  std::vector<double> x, w;
  gauss_legendre(2, x, w);
  CHECK(x[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-15));

  gauss_legendre(5, x, w);
  CHECK(x[2] == 0.0);
  CHECK(w[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));

  // exactness: integrates x^8 on [-1,1] with n = 5
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += w[i] * std::pow(x[i], 8);
  CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}
