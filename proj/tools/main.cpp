#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace kinel::cli;

  CLI::App app{"kinel: anisotropic elastic wave dispersion and "
               "multiple-scattering transport"};
  app.require_subcommand(1);

  Options opt;
  bool as_json = false;
  std::string show_name, transport_config;

  auto add_common = [&](CLI::App* c, bool needs_material) {
    if (needs_material)
      c->add_option("--material", opt.material,
                    "builtin material name or JSON file")
          ->required();
    c->add_option("--out", opt.out, "output directory");
    c->add_option("--threads", opt.threads, "worker thread budget");
    c->add_option("--tol", opt.tol, "degeneracy tolerance");
  };

  auto* mat = app.add_subcommand("materials", "material database");
  auto* mat_list = mat->add_subcommand("list", "list built-in materials");
  mat_list->add_flag("--json", as_json);
  auto* mat_show = mat->add_subcommand("show", "print one material");
  mat_show->add_option("name", show_name)->required();
  mat_show->add_flag("--json", as_json);

  auto* surf = app.add_subcommand("surfaces", "velocity surface maps");
  add_common(surf, true);
  surf->add_option("--grid", opt.grid_deg, "map grid spacing [deg]");

  auto* axes = app.add_subcommand("axes", "acoustic axis detection");
  add_common(axes, true);

  auto* xsec = app.add_subcommand("xsection",
                                  "scattering cross-section tables and maps");
  add_common(xsec, true);
  xsec->add_option("--corr", opt.corr_file, "correlation model JSON file");
  xsec->add_option("--corr-a", opt.corr_a,
                   "correlation length [m] for the default model");
  xsec->add_option("--ak", opt.ak, "nondimensional frequency a|k|");
  xsec->add_option("--rule", [&opt](const std::vector<std::string>& v) {
        return 2 == std::sscanf(v[0].c_str(), "%d,%d", &opt.rule_polar,
                                &opt.rule_azimuth);
      },
      "sphere rule orders Np,Na");
  xsec->add_option("--grid", opt.grid_deg, "map grid spacing [deg]");
  xsec->add_flag("--strict", opt.strict, "escalate convergence warnings");

  auto* tr = app.add_subcommand("transport", "Monte Carlo transport run");
  tr->add_option("--config", transport_config, "simulation config JSON")
      ->required();
  add_common(tr, false);
  tr->add_option("--seed", opt.seed, "seed override when config has none");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mat_list->parsed()) return cmd_materials_list(as_json);
    if (mat_show->parsed()) return cmd_materials_show(show_name, as_json);
    if (surf->parsed()) return cmd_surfaces(opt);
    if (axes->parsed()) return cmd_axes(opt);
    if (xsec->parsed()) return cmd_xsection(opt);
    if (tr->parsed()) return cmd_transport(transport_config, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  std::cerr << "error: no command\n";
  return kExitValidation;
}
