#ifndef KINEL_QUADRATURE_HPP
#define KINEL_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

#include "kinel/material.hpp"

namespace kinel {

//! Product Gaussian rule on the unit sphere: Gauss-Legendre in cos(theta)
//! times a uniform (trapezoid) rule in phi. Exact for spherical polynomials
//! of degree <= min(2 n_polar - 1, n_azimuth - 1). Weights sum to 4 pi.
struct SphereRule {
  int n_polar = 0;
  int n_azimuth = 0;
  std::vector<Vector3d> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

SphereRule build_rule(int n_polar, int n_azimuth);

//! Fixed-order weighted sum of f over the nodes (deterministic pairwise
//! reduction). Throws if f returns a non-finite value, naming the node.
double integrate(const SphereRule& rule,
                 const std::function<double(std::size_t, const Vector3d&)>& f);

//! Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace kinel

#endif
