#ifndef KINEL_TRANSPORT_HPP
#define KINEL_TRANSPORT_HPP

#include <cstdint>
#include <vector>

#include "kinel/rng.hpp"
#include "kinel/scattering.hpp"

namespace kinel {

//! Walker alias table over a discrete distribution; O(1) sampling,
//! deterministic construction.
class AliasTable {
public:
  AliasTable() = default;
  static AliasTable build(std::span<const double> weights);

  std::size_t size() const { return prob_.size(); }
  std::uint32_t sample(Rng& rng) const;

  //! Outcome distribution encoded by the table (diagnostics): each slot
  //! contributes prob/n to itself and (1 - prob)/n to its alias.
  std::vector<double> implied_probabilities() const;

private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

//! Collision data for one (mode, direction): total rate, outgoing sampler
//! over flattened (beta * nodes + n) states, and the group velocity.
struct RateRow {
  double rate = 0.0;  // [1/s per unit variance]
  AliasTable alias;
  Vector3d group_velocity = Vector3d::Zero();
  bool degenerate = false;  // direction needed the tolerance perturbation
};

//! Precomputed collision kernel on the quadrature grid: one row per
//! (mode, incoming node). Rates and outgoing densities use the same shell
//! discretization as the cross-section integrals, so the row normalization
//! reproduces the normalized cross-sections exactly.
class RateTable {
public:
  //! The rule is copied; the kernel must outlive the table.
  RateTable(const ScatteringKernel& kernel, double omega,
            const SphereRule& rule, int threads = 1);
  RateTable(const RateTable&) = delete;
  RateTable& operator=(const RateTable&) = delete;

  const ScatteringKernel& kernel() const { return shell_.kernel(); }
  const ShellCache& shell() const { return shell_; }
  const SphereRule& rule() const { return rule_; }
  double omega() const { return omega_; }
  std::size_t nodes() const { return shell_.nodes(); }

  const RateRow& row(int mode, std::size_t node) const {
    return rows_[static_cast<std::size_t>(mode) * nodes() + node];
  }
  const Vector3d& node_direction(std::size_t node) const {
    return rule().nodes[node];
  }

  //! Row for an off-grid direction (emitters); the outgoing sampler still
  //! targets the grid states.
  RateRow make_row(int mode, const Vector3d& khat) const;

  //! Number of grid rows that required the degeneracy perturbation.
  int degenerate_rows() const { return degenerate_rows_; }
  //! True when some row has zero total rate (particles go ballistic).
  bool has_ballistic_rows() const { return ballistic_rows_ > 0; }

private:
  SphereRule rule_;   // owned; shell_ points into it
  ShellCache shell_;
  double omega_;
  std::vector<RateRow> rows_;
  int degenerate_rows_ = 0;
  int ballistic_rows_ = 0;
};

//! Factory spelling of the table construction (guaranteed elision; the
//! table type itself is pinned in place).
inline RateTable scatter_rate_table(const ScatteringKernel& kernel,
                                    double omega, const SphereRule& rule,
                                    int threads = 1) {
  return RateTable(kernel, omega, rule, threads);
}

//! Monte Carlo carrier of specific intensity. The statistical weight is
//! fixed at construction and never modified (conservative scattering); the
//! frequency is invariant through collisions (elastic shell).
struct ParticleState {
  Vector3d position = Vector3d::Zero();
  Vector3d direction = Vector3d::UnitZ();
  std::int64_t node = -1;  // quadrature node index, -1 while off-grid
  int mode = 0;
  double weight = 1.0;
  double omega = 0.0;
};

struct StepResult {
  double dt = 0.0;
  bool collided = false;
};

//! One flight + (possibly) one collision, capped at dt_max. Free flight is a
//! straight line along the group velocity (homogeneous background); collision
//! times are exponential with the row's total rate. `offgrid_rows`, when
//! given, provides per-mode rows for particles not yet on the grid.
StepResult step(ParticleState& p, Rng& rng, const RateTable& table,
                const RateRow* offgrid_rows, double dt_max);

struct EmitterConfig {
  enum class Type { point_isotropic, plane_wave };
  Type type = Type::point_isotropic;
  int mode = 2;
  Vector3d direction = Vector3d::UnitZ();  // plane_wave only
  Vector3d position = Vector3d::Zero();
};

struct SimConfig {
  double omega = 0.0;  // [rad/s]
  std::size_t particles = 10000;
  double end_time = 0.0;  // [s]
  double tally_dt = 0.0;
  std::uint64_t seed = 0;
  int rule_polar = 16;
  int rule_azimuth = 32;
  EmitterConfig emitter;
  int spatial_bins = 16;           // per axis, centered on the emitter
  double spatial_halfwidth = 0.0;  // [m]; <= 0 picks one from c_max * end_time
  int dir_bins_polar = 8;
  int dir_bins_azimuth = 16;
  int threads = 1;

  void validate() const;
};

//! Per-frame tallies. mode_energy sums the (constant) particle weights, so
//! the total is conserved bit-exactly frame to frame.
struct TallyFrame {
  double time = 0.0;
  std::array<double, 3> mode_energy{};
  std::vector<double> direction_hist;  // [mode * nbins + bin]
  std::vector<double> spatial;         // [bins^3 + 1], last = outside
};

struct RunResult {
  std::vector<TallyFrame> frames;
  std::uint64_t collisions = 0;
  int degenerate_rows = 0;
  bool ballistic = false;
  double spatial_halfwidth = 0.0;
};

//! Reproducible given (seed, thread count); thread count does not change any
//! output (per-particle streams, block-ordered tally reduction).
RunResult run(const SimConfig& config, const ScatteringKernel& kernel);

}  // namespace kinel

#endif
