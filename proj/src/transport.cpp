#include "kinel/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kinel/parallel.hpp"

namespace kinel {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vector3d perturb_direction(const Vector3d& khat, double angle) {
  const auto [z1, z2] = transverse_basis(khat);
  return (std::cos(angle) * khat + std::sin(angle) * z1).normalized();
}

}  // namespace

AliasTable AliasTable::build(std::span<const double> weights) {
  AliasTable t;
  const std::size_t n = weights.size();
  t.prob_.assign(n, 1.0);
  t.alias_.assign(n, 0);
  if (n == 0) return t;

  double total = pairwise_sum(weights);
  if (!(total > 0)) throw std::invalid_argument("alias table: zero total weight");

  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0)
      throw std::invalid_argument("alias table: negative weight");
    scaled[i] = weights[i] * n / total;
  }
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    const std::uint32_t l = large.back();
    small.pop_back();
    t.prob_[s] = scaled[s];
    t.alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // leftovers are 1 within roundoff
  for (std::uint32_t i : large) t.prob_[i] = 1.0;
  for (std::uint32_t i : small) t.prob_[i] = 1.0;
  return t;
}

std::uint32_t AliasTable::sample(Rng& rng) const {
  const std::size_t n = prob_.size();
  const double u = rng.uniform() * static_cast<double>(n);
  std::size_t i = static_cast<std::size_t>(u);
  if (i >= n) i = n - 1;
  const double frac = u - static_cast<double>(i);
  return frac < prob_[i] ? static_cast<std::uint32_t>(i) : alias_[i];
}

RateTable::RateTable(const ScatteringKernel& kernel, double omega,
                     const SphereRule& rule, int threads)
    : rule_(rule), shell_(kernel, rule_, threads), omega_(omega) {
  const std::size_t n = shell_.nodes();
  rows_.resize(3 * n);
  std::vector<int> degenerate(3 * n, 0), ballistic(3 * n, 0);
  parallel_for(3 * n, threads, [&](std::size_t idx) {
    const int mode = static_cast<int>(idx / n);
    const std::size_t node = idx % n;
    rows_[idx] = make_row(mode, rule_.nodes[node]);
    degenerate[idx] = rows_[idx].degenerate ? 1 : 0;
    ballistic[idx] = rows_[idx].rate > 0 ? 0 : 1;
  });
  for (std::size_t i = 0; i < 3 * n; ++i) {
    degenerate_rows_ += degenerate[i];
    ballistic_rows_ += ballistic[i];
  }
}

RateRow RateTable::make_row(int mode, const Vector3d& khat) const {
  const ScatteringKernel& kern = shell_.kernel();
  const double rho = kern.material().density();
  RateRow row;

  const ModeFrame in = kern.frame(khat);
  const std::vector<double> density = shell_.outgoing_density(omega_, in, mode);
  row.rate = pairwise_sum(density);
  if (row.rate > 0) row.alias = AliasTable::build(density);

  // group velocity; an isolated acoustic-axis direction gets a tolerance
  // rotation, a degeneracy that rotation cannot lift (isotropic media) is
  // transported with the subspace-averaged pair velocity
  Vector3d dir = khat;
  for (int attempt = 0;; ++attempt) {
    try {
      row.group_velocity =
          group_velocity(kern.blocked(), rho, mode, dir, kern.degeneracy_tol());
      break;
    } catch (const DegenerateModeError&) {
      row.degenerate = true;
      if (attempt < 2) {
        dir = perturb_direction(khat, 8.0 * kern.degeneracy_tol() * (1 << attempt));
        continue;
      }
      const ModeDecomposition d = decompose(kern.blocked(), rho, khat);
      const int partner = (mode == 0) ? 1 : (mode == 2) ? 1 : (d.gap(0, 1) < d.gap(1, 2) ? 0 : 2);
      row.group_velocity = group_velocity_pair(kern.blocked(), rho,
                                               std::min(mode, partner),
                                               std::max(mode, partner), khat);
      break;
    }
  }
  return row;
}

StepResult step(ParticleState& p, Rng& rng, const RateTable& table,
                const RateRow* offgrid_rows, double dt_max) {
  const RateRow& row = (p.node >= 0)
                           ? table.row(p.mode, static_cast<std::size_t>(p.node))
                           : offgrid_rows[p.mode];
  StepResult res;
  const double tau = (row.rate > 0)
                         ? rng.exponential(row.rate)
                         : std::numeric_limits<double>::infinity();
  res.dt = std::min(tau, dt_max);
  p.position += row.group_velocity * res.dt;
  if (tau <= dt_max) {
    res.collided = true;
    const std::size_t n = table.nodes();
    const std::uint32_t out = row.alias.sample(rng);
    p.mode = static_cast<int>(out / n);
    p.node = static_cast<std::int64_t>(out % n);
    p.direction = table.node_direction(static_cast<std::size_t>(p.node));
  }
  return res;
}

void SimConfig::validate() const {
  if (!(omega > 0)) throw std::invalid_argument("config: omega must be > 0");
  if (particles < 1) throw std::invalid_argument("config: particles must be >= 1");
  if (!(end_time > 0)) throw std::invalid_argument("config: end time must be > 0");
  if (!(tally_dt > 0) || tally_dt > end_time)
    throw std::invalid_argument("config: tally_dt must be in (0, end_time]");
  if (rule_polar < 1 || rule_azimuth < 1)
    throw std::invalid_argument("config: rule orders must be >= 1");
  if (spatial_bins < 1 || dir_bins_polar < 1 || dir_bins_azimuth < 1)
    throw std::invalid_argument("config: bin counts must be >= 1");
  if (emitter.mode < 0 || emitter.mode > 2)
    throw std::invalid_argument("config: emitter mode must be in 0..2");
}

namespace {

struct Binning {
  int sb, dbp, dba;
  double halfwidth;
  Vector3d origin;

  int spatial_index(const Vector3d& x) const {
    int idx[3];
    for (int c = 0; c < 3; ++c) {
      const double u = (x[c] - origin[c] + halfwidth) / (2 * halfwidth);
      if (u < 0.0 || u >= 1.0) return sb * sb * sb;  // outside
      idx[c] = static_cast<int>(u * sb);
    }
    return (idx[0] * sb + idx[1]) * sb + idx[2];
  }

  int direction_index(const Vector3d& d) const {
    const double ct = std::clamp(d[2], -1.0, 1.0);
    int ib = static_cast<int>((ct + 1.0) / 2.0 * dbp);
    ib = std::min(ib, dbp - 1);
    double phi = std::atan2(d[1], d[0]);
    if (phi < 0) phi += 2 * kPi;
    int jb = static_cast<int>(phi / (2 * kPi) * dba);
    jb = std::min(jb, dba - 1);
    return ib * dba + jb;
  }
};

}  // namespace

RunResult run(const SimConfig& config, const ScatteringKernel& kernel) {
  config.validate();
  const SphereRule rule = build_rule(config.rule_polar, config.rule_azimuth);
  const RateTable table(kernel, config.omega, rule, config.threads);

  // emitters: the isotropic point source draws a grid node with probability
  // w_n / 4pi; the plane wave starts off-grid along the configured direction
  AliasTable node_sampler;
  std::array<RateRow, 3> offgrid{};
  bool offgrid_needed = false;
  if (config.emitter.type == EmitterConfig::Type::point_isotropic) {
    node_sampler = AliasTable::build(rule.weights);
  } else {
    offgrid_needed = true;
    const Vector3d dir = config.emitter.direction.normalized();
    offgrid[config.emitter.mode] = table.make_row(config.emitter.mode, dir);
  }

  const std::size_t nframes =
      static_cast<std::size_t>(std::llround(config.end_time / config.tally_dt)) + 1;
  const int ndirbins = config.dir_bins_polar * config.dir_bins_azimuth;
  const int nspatial = config.spatial_bins * config.spatial_bins * config.spatial_bins + 1;

  double halfwidth = config.spatial_halfwidth;
  if (!(halfwidth > 0)) {
    double cmax = 0.0;
    for (std::size_t i = 0; i < table.nodes(); ++i)
      for (int m = 0; m < 3; ++m)
        cmax = std::max(cmax, table.row(m, i).group_velocity.norm());
    halfwidth = std::max(cmax * config.end_time, 1e-300);
  }
  const Binning bins{config.spatial_bins, config.dir_bins_polar,
                     config.dir_bins_azimuth, halfwidth,
                     config.emitter.position};

  struct BlockTally {
    std::vector<double> mode_energy;  // [frame*3 + mode]
    std::vector<double> dir_hist;     // [frame*3*ndirbins + ...]
    std::vector<double> spatial;      // [frame*nspatial + ...]
    std::uint64_t collisions = 0;
  };

  constexpr std::size_t kBlock = 4096;
  const std::size_t nblocks = (config.particles + kBlock - 1) / kBlock;
  std::vector<BlockTally> tallies(nblocks);

  parallel_for(nblocks, config.threads, [&](std::size_t b) {
    BlockTally& tb = tallies[b];
    tb.mode_energy.assign(nframes * 3, 0.0);
    tb.dir_hist.assign(nframes * 3 * ndirbins, 0.0);
    tb.spatial.assign(nframes * nspatial, 0.0);

    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(config.particles, lo + kBlock);
    for (std::size_t pi = lo; pi < hi; ++pi) {
      Rng rng = Rng::stream(config.seed, pi);
      ParticleState p;
      p.position = config.emitter.position;
      p.weight = 1.0;
      p.omega = config.omega;
      p.mode = config.emitter.mode;
      if (config.emitter.type == EmitterConfig::Type::point_isotropic) {
        p.node = node_sampler.sample(rng);
        p.direction = table.node_direction(static_cast<std::size_t>(p.node));
      } else {
        p.node = -1;
        p.direction = config.emitter.direction.normalized();
      }

      double t = 0.0;
      for (std::size_t f = 0; f < nframes; ++f) {
        const double tframe = static_cast<double>(f) * config.tally_dt;
        while (t < tframe) {
          const StepResult s =
              step(p, rng, table, offgrid_needed ? offgrid.data() : nullptr,
                   tframe - t);
          if (s.collided) {
            t += s.dt;
            ++tb.collisions;
          } else {
            t = tframe;  // flew the whole remaining interval
          }
        }
        tb.mode_energy[f * 3 + p.mode] += p.weight;
        tb.dir_hist[(f * 3 + p.mode) * ndirbins + bins.direction_index(p.direction)] +=
            p.weight;
        tb.spatial[f * nspatial + bins.spatial_index(p.position)] += p.weight;
      }
    }
  });

  RunResult out;
  out.degenerate_rows = table.degenerate_rows();
  out.ballistic = table.has_ballistic_rows();
  out.spatial_halfwidth = halfwidth;
  out.frames.resize(nframes);
  for (std::size_t f = 0; f < nframes; ++f) {
    TallyFrame& fr = out.frames[f];
    fr.time = static_cast<double>(f) * config.tally_dt;
    fr.direction_hist.assign(3 * ndirbins, 0.0);
    fr.spatial.assign(nspatial, 0.0);
  }
  for (std::size_t b = 0; b < nblocks; ++b) {  // fixed merge order
    const BlockTally& tb = tallies[b];
    out.collisions += tb.collisions;
    for (std::size_t f = 0; f < nframes; ++f) {
      for (int m = 0; m < 3; ++m)
        out.frames[f].mode_energy[m] += tb.mode_energy[f * 3 + m];
      for (int i = 0; i < 3 * ndirbins; ++i)
        out.frames[f].direction_hist[i] += tb.dir_hist[(f * 3) * ndirbins + i];
      for (int i = 0; i < nspatial; ++i)
        out.frames[f].spatial[i] += tb.spatial[f * nspatial + i];
    }
  }
  return out;
}

}  // namespace kinel
