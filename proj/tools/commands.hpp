#ifndef KINEL_TOOLS_COMMANDS_HPP
#define KINEL_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>

namespace kinel::cli {

inline constexpr const char* kVersion = "0.1.0";

// validation errors exit 2; convergence warnings exit 3 under --strict
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConvergence = 3;

struct Options {
  std::string material;   // builtin name or a .json file path
  std::string corr_file;  // empty: all-ones Markov model over the material class
  double corr_a = 1e-3;   // [m], used when corr_file is empty
  double ak = 1.0;
  int rule_polar = 32;
  int rule_azimuth = 64;
  double grid_deg = 2.0;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out = ".";
  bool strict = false;
};

int cmd_materials_list(bool as_json);
int cmd_materials_show(const std::string& name, bool as_json);
int cmd_surfaces(const Options& opt);
int cmd_axes(const Options& opt);
int cmd_xsection(const Options& opt);
int cmd_transport(const std::string& config_path, const Options& opt);

}  // namespace kinel::cli

#endif
