// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "kinel/database.hpp"
#include "kinel/transport.hpp"
#include "oracles.hpp"

using namespace kinel;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> check;
  double max_seconds = 0.0;  // 0 = no budget
};

Vector3d random_direction(Rng& rng) {
  Vector3d d;
  rng.isotropic_direction(d[0], d[1], d[2]);
  return d;
}

// ------------------------------------------------------------------ 1
bool isotropic_equivalence(std::string& note) {
  const auto iso = MaterialDatabase::builtin().get("isoref").material;
  const auto corr = CorrelationModel::markov(1e-3, SymmetryClass::isotropic);
  const ScatteringKernel kern(iso, corr);
  const auto closed = oracle::make_isotropic_kernel(iso, corr);

  Rng rng(2024);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vector3d khat = random_direction(rng);
    const Vector3d qhat = random_direction(rng);
    const double ak = 0.2 + 2.0 * rng.uniform();
    const double omega = closed.cP() * ak / corr.a();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double got = kern.differential(omega, khat, a, qhat, b).value;
        const double expect = closed.sigma(omega, khat, a, qhat, b);
        worst = std::max(worst, std::abs(got - expect) /
                                    std::max(std::abs(expect), 1e-300));
      }
  }
  std::ostringstream os;
  os << "max rel err " << worst << " over 100 channels x 9 mode pairs";
  note = os.str();
  return worst <= 1e-10;
}

// ------------------------------------------------------------------ 2
bool cubic_degeneration(std::string& note) {
  const double c2 = 152e9, c3 = 124e9, rho = 8910.0;
  const double c1 = c2 + 2 * c3;  // anisotropy factor zero
  const auto cub = build_cubic(c1, c2, c3, rho);
  const double cs2 = c3 / rho, cp2 = (c2 + 2 * c3) / rho;

  Rng rng(5);
  double worst_gap = 0.0, worst_matrix = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const Vector3d khat = random_direction(rng);
    const auto d = decompose(cub, khat);
    worst_gap = std::max(worst_gap, (d.speed[1] - d.speed[0]) / d.speed[1]);

    const Matrix3d g = christoffel(cub, khat);
    const Matrix3d ref = cs2 * Matrix3d::Identity() +
                         (cp2 - cs2) * khat * khat.transpose();
    worst_matrix = std::max(
        worst_matrix, (g - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << "max c1/c2 gap " << worst_gap << ", max matrix dev " << worst_matrix;
  note = os.str();
  return worst_gap <= 1e-12 && worst_matrix <= 1e-12;
}

// ------------------------------------------------------------------ 3
bool acoustic_axes(std::string& note) {
  const auto db = MaterialDatabase::builtin();

  const auto ni = detect_acoustic_axes(db.get("nickel").material);
  int ni_edge = 0, ni_diag = 0;
  for (const auto& ax : ni.axes) {
    const Vector3d a = ax.direction.cwiseAbs();
    if (a.maxCoeff() > 1 - 1e-6) ++ni_edge;
    if ((a - Vector3d(1, 1, 1).normalized()).norm() < 1e-3) ++ni_diag;
  }

  const auto zn = detect_acoustic_axes(db.get("zinc").material);
  const bool zn_ok = zn.axes.size() == 1 &&
                     (zn.axes[0].direction - Vector3d(0, 0, 1)).norm() < 1e-4;

  const auto sr = detect_acoustic_axes(db.get("celestite").material);
  const std::vector<Vector3d> published = {
      {0, 0.77, 0.64},     {0, 0.77, -0.64},   {0, 0.70, 0.71},
      {0, 0.70, -0.71},    {0.49, 0.87, 0},    {0.49, -0.87, 0},
      {0.43, 0.88, 0.22},  {-0.43, 0.88, 0.22}, {0.43, -0.88, 0.22},
      {0.43, 0.88, -0.22}};
  int matched = 0;
  for (const Vector3d& p : published)
    for (const auto& ax : sr.axes) {
      const Vector3d d = (ax.direction.dot(p) >= 0) ? ax.direction
                                                    : Vector3d(-ax.direction);
      if ((d - p).cwiseAbs().maxCoeff() < 0.01) {
        ++matched;
        break;
      }
    }

  std::ostringstream os;
  os << "Ni " << ni.axes.size() << " axes (" << ni_edge << " edges, " << ni_diag
     << " diagonals), Zn " << zn.axes.size() << ", SrSO4 " << sr.axes.size()
     << " (" << matched << "/10 published matched)";
  note = os.str();
  return ni.axes.size() == 7 && ni_edge == 3 && ni_diag == 4 && zn_ok &&
         sr.axes.size() == 10 && matched == 10;
}

// ------------------------------------------------------------------ 4
bool reciprocity(std::string& note) {
  const auto db = MaterialDatabase::builtin();
  struct Case {
    const char* name;
    SymmetryClass cls;
  } cases[] = {{"nickel", SymmetryClass::cubic},
               {"zinc", SymmetryClass::transverse_isotropic},
               {"celestite", SymmetryClass::orthotropic}};
  double worst = 0.0;
  for (const auto& cs : cases) {
    const auto& mat = db.get(cs.name).material;
    const auto corr = CorrelationModel::markov(1e-3, cs.cls);
    const ScatteringKernel kern(mat, corr);
    const double omega = kern.frame(Vector3d::UnitZ()).speed[2] / corr.a();
    worst = std::max(worst, reciprocity_check(kern, omega, 1000, 77));
  }
  std::ostringstream os;
  os << "max rel violation " << worst << " over 3 x 1000 channels";
  note = os.str();
  return worst <= 1e-10;
}

// ------------------------------------------------------------------ 5
bool quadrature_exactness(std::string& note) {
  const auto rule = build_rule(16, 33);
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
      worst = std::max(worst, std::abs(s - ((a == b) ? 1.0 : 0.0)));
    }
  std::ostringstream os;
  os << "max harmonic-product error " << worst << " at (16, 33)";
  note = os.str();
  return worst < 1e-12;
}

// ------------------------------------------------------------------ 6
bool xsection_structure(std::string& note) {
  const auto db = MaterialDatabase::builtin();
  struct Case {
    const char* name;
    SymmetryClass cls;
  } cases[] = {{"nickel", SymmetryClass::cubic},
               {"zinc", SymmetryClass::transverse_isotropic},
               {"celestite", SymmetryClass::orthotropic}};
  const auto rule = build_rule(64, 128);
  const auto rule2 = build_rule(128, 256);

  bool ok = true;
  std::ostringstream os;
  Rng rng(31415);
  for (const auto& cs : cases) {
    const auto& mat = db.get(cs.name).material;
    const auto corr = CorrelationModel::markov(1e-3, cs.cls);
    const ScatteringKernel kern(mat, corr);
    const ShellCache shell(kern, rule, 2);
    const ShellCache shell2(kern, rule2, 2);
    const auto ops = oracle::point_group_ops(cs.cls);
    const double knorm = 1.0 / corr.a();  // a|k| = 1

    double worst_rowsum = 0.0, worst_group = 0.0, worst_refine = 0.0;
    for (int t = 0; t < 4; ++t) {
      const Vector3d khat = random_direction(rng);
      for (int a = 0; a < 3; ++a) {
        const double omega = kern.frame(khat).speed[a] * knorm;
        const auto x = total_xsection_row(shell, omega, khat, a);
        worst_rowsum = std::max(
            worst_rowsum, std::abs(x.normalized[0] + x.normalized[1] +
                                   x.normalized[2] - 1.0));

        // invariance under the material point group
        for (const Matrix3d& g : ops) {
          const Vector3d mapped = g * khat;
          const double omega_m = kern.frame(mapped).speed[a] * knorm;
          const auto xm = total_xsection_row(shell, omega_m, mapped, a);
          for (int b = 0; b < 3; ++b)
            worst_group = std::max(
                worst_group, std::abs(xm.partial[b] - x.partial[b]) / x.total);
        }

        // doubled orders
        const auto x2 = total_xsection_row(shell2, omega, khat, a);
        for (int b = 0; b < 3; ++b)
          worst_refine = std::max(worst_refine,
                                  std::abs(x.partial[b] - x2.partial[b]) /
                                      std::abs(x2.partial[b]));
      }
    }
    const bool mat_ok =
        worst_rowsum <= 1e-12 && worst_group <= 1e-8 && worst_refine < 1e-6;
    ok = ok && mat_ok;
    os << cs.name << "(rowsum " << worst_rowsum << ", group " << worst_group
       << ", refine " << worst_refine << (mat_ok ? "" : " <- FAIL") << ") ";
  }
  note = os.str();
  return ok;
}

// ------------------------------------------------------------------ 7
bool rayleigh_scaling(std::string& note) {
  const auto iso = MaterialDatabase::builtin().get("isoref").material;
  const auto corr = CorrelationModel::markov(1e-3, SymmetryClass::isotropic);
  const auto closed = oracle::make_isotropic_kernel(iso, corr);
  const auto rule = build_rule(16, 32);
  const Vector3d khat = Vector3d::UnitZ();
  const double c3 = std::pow(closed.cP(), 3);

  std::vector<double> lw, ls;
  for (double ak = 1e-3; ak <= 1.0001e-2; ak *= std::pow(10.0, 1.0 / 6.0)) {
    const double omega = closed.cP() * ak / corr.a();
    const double s = integrate(rule, [&](std::size_t, const Vector3d& qhat) {
      return closed.sigma(omega, khat, 2, qhat, 2) / c3;
    });
    lw.push_back(std::log(omega));
    ls.push_back(std::log(2 * kPi * omega * omega * s));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    mx += lw[i];
    my += ls[i];
  }
  mx /= lw.size();
  my /= ls.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    num += (lw[i] - mx) * (ls[i] - my);
    den += (lw[i] - mx) * (lw[i] - mx);
  }
  const double slope = num / den;
  std::ostringstream os;
  os << "fitted log-log slope " << slope << " over a|k| in [1e-3, 1e-2]";
  note = os.str();
  return std::abs(slope - 4.0) <= 0.05;
}

// ------------------------------------------------------------------ 8
bool transport_equilibrium(std::string& note) {
  const auto ni = MaterialDatabase::builtin().get("nickel").material;
  const auto corr = CorrelationModel::markov(1e-3, SymmetryClass::cubic);
  const ScatteringKernel kern(ni, corr);

  SimConfig cfg;
  cfg.rule_polar = 12;
  cfg.rule_azimuth = 24;
  cfg.omega = kern.frame(Vector3d::UnitZ()).speed[2] / corr.a();
  cfg.particles = 100000;
  cfg.seed = 99;
  cfg.threads = 2;
  cfg.emitter.type = EmitterConfig::Type::point_isotropic;
  cfg.emitter.mode = 2;

  const RateTable table(kern, cfg.omega, build_rule(12, 24), 2);
  double min_rate = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 3; ++m)
    for (std::size_t i = 0; i < table.nodes(); ++i)
      min_rate = std::min(min_rate, table.row(m, i).rate);
  cfg.end_time = 25.0 / min_rate;
  cfg.tally_dt = cfg.end_time / 5;

  const auto res = run(cfg, kern);

  bool conserved = true;
  for (const auto& fr : res.frames)
    conserved = conserved && (fr.mode_energy[0] + fr.mode_energy[1] +
                                  fr.mode_energy[2] ==
                              double(cfg.particles));

  // independent linear-algebra oracle on the same grid
  const std::size_t n = table.nodes();
  const std::size_t states = 3 * n;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(states, states);
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < n; ++i) {
      const auto density = table.shell().outgoing_density(
          cfg.omega, kern.frame(table.node_direction(i)), a);
      const std::size_t col = a * n + i;
      for (std::size_t s = 0; s < states; ++s) q(s, col) += density[s];
      q(col, col) -= std::accumulate(density.begin(), density.end(), 0.0);
    }
  q /= q.cwiseAbs().maxCoeff();  // keep the normalization row comparable
  q.row(0).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(states);
  b[0] = 1.0;
  const Eigen::VectorXd p = q.fullPivLu().solve(b);
  std::array<double, 3> expect{};
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < n; ++i) expect[a] += p[a * n + i];

  double worst_sigmas = 0.0;
  for (int m = 0; m < 3; ++m) {
    const double got = res.frames.back().mode_energy[m] / double(cfg.particles);
    const double se =
        std::sqrt(expect[m] * (1 - expect[m]) / double(cfg.particles));
    worst_sigmas = std::max(worst_sigmas, std::abs(got - expect[m]) / se);
  }
  std::ostringstream os;
  os << (conserved ? "weight conserved exactly" : "WEIGHT NOT CONSERVED")
     << "; equilibrium dev " << worst_sigmas << " sigma (oracle fractions "
     << expect[0] << ", " << expect[1] << ", " << expect[2] << ")";
  note = os.str();
  return conserved && worst_sigmas < 3.0;
}

// ------------------------------------------------------------------ 9
bool determinism(std::string& note) {
#ifdef KINEL_BIN
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const fs::path base = fs::temp_directory_path() / "kinel_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);

  // a|k| ~ 1 for the fast mode; the horizon spans a few mean free times of
  // the per-unit-variance rates
  const fs::path cfg = base / "config.json";
  std::ofstream(cfg) << R"({
    "material": "nickel",
    "corr": {"kind": "markov", "a_m": 1e-3, "class": "cubic"},
    "omega_rad_s": 5.3e6,
    "particles": 4000,
    "end_time_s": 2.0e17,
    "tally_dt_s": 0.5e17,
    "seed": 4,
    "rule": [8, 16],
    "threads": 2
  })";

  const auto shell = [&](const std::string& cmd) {
    return std::system((std::string(KINEL_BIN) + " " + cmd + " > /dev/null 2>&1")
                           .c_str());
  };
  bool ok = true;
  ok &= 0 == shell("transport --config " + cfg.string() + " --out " +
                   (base / "t1").string());
  ok &= 0 == shell("transport --config " + cfg.string() + " --out " +
                   (base / "t2").string());
  ok &= slurp(base / "t1/frames.jsonl") == slurp(base / "t2/frames.jsonl");
  ok &= slurp(base / "t1/summary.csv") == slurp(base / "t2/summary.csv");
  ok &= slurp(base / "t1/spatial.grid") == slurp(base / "t2/spatial.grid");

  ok &= 0 == shell("xsection --material celestite --ak 1.0 --rule 12,24 "
                   "--grid 30 --threads 1 --out " + (base / "x1").string());
  ok &= 0 == shell("xsection --material celestite --ak 1.0 --rule 12,24 "
                   "--grid 30 --threads 2 --out " + (base / "x2").string());
  ok &= slurp(base / "x1/xsection.csv") == slurp(base / "x2/xsection.csv");
  ok &= slurp(base / "x1/xsection.json") == slurp(base / "x2/xsection.json");

  note = ok ? "transport replay and cross-thread xsection sweeps byte-identical"
            : "byte mismatch between replays";
  return ok;
#else
  note = "binary path not configured";
  return false;
#endif
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1. isotropic closed-form equivalence (<= 1e-10)", isotropic_equivalence, 60},
      {"2. cubic degeneration to isotropy (<= 1e-12)", cubic_degeneration, 0},
      {"3. acoustic axes: Ni 7, Zn 1, SrSO4 10 (components +-0.01)", acoustic_axes, 120},
      {"4. reciprocity over 1000 channels/material (<= 1e-10)", reciprocity, 0},
      {"5. sphere rule exact for harmonics l <= 8 (< 1e-12)", quadrature_exactness, 0},
      {"6. Sigma# row sums, point-group invariance, refinement", xsection_structure, 0},
      {"7. Rayleigh slope 4.0 +- 0.05", rayleigh_scaling, 0},
      {"8. transport conservation + equilibrium (3 sigma)", transport_equilibrium, 300},
      {"9. bit-exact determinism of outputs", determinism, 0},
  };

  int failures = 0;
  for (auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string note;
    bool ok = false;
    try {
      ok = c.check(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (c.max_seconds > 0 && secs > c.max_seconds) {
      ok = false;
      note += " [OVER TIME BUDGET]";
    }
    std::printf("[%s] %s — %s (%.1f s)\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                note.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d/%zu acceptance criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
