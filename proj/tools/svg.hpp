#ifndef KINEL_TOOLS_SVG_HPP
#define KINEL_TOOLS_SVG_HPP

#include <string>
#include <vector>

#include "kinel/material.hpp"

namespace kinel::svg {

//! One latitude-longitude panel: values laid out polar-major on an
//! equiangular grid (n_theta rows from the north pole, n_phi columns).
struct Panel {
  std::string title;
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> values;
  std::vector<Vector3d> markers;  // drawn twice, direction and antipode
};

//! Write a row-major grid of panels with a shared fixed colormap.
void write_panels(const std::string& path, const std::vector<Panel>& panels,
                  int columns);

}  // namespace kinel::svg

#endif
