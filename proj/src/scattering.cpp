#include "kinel/scattering.hpp"

#include <cmath>

#include "kinel/parallel.hpp"
#include "kinel/rng.hpp"

namespace kinel {

namespace {

constexpr double kPi = 3.14159265358979323846;

// u_{3i+j} = e_i d_j, i.e. M(dhat) e
inline void mode_vector(const Vector3d& dhat, const Vector3d& e, double u[9]) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) u[3 * i + j] = e[i] * dhat[j];
}

inline double dot9(const double* a, const double* b) {
  double s = 0.0;
  for (int i = 0; i < 9; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<Matrix6d> fluctuation_basis(SymmetryClass cls) {
  const int n = class_constant_count(cls);
  std::vector<Matrix6d> basis;
  basis.reserve(n);
  for (int m = 0; m < n; ++m) {
    std::vector<double> c(n, 0.0);
    c[m] = 1.0;
    basis.push_back(class_pattern(cls, c));
  }
  return basis;
}

ScatteringKernel::ScatteringKernel(const ElasticityMatrix& mat,
                                   const CorrelationModel& corr,
                                   double degeneracy_tol)
    : mat_(mat), blocked_(to_blocked(mat)), corr_(corr), tol_(degeneracy_tol) {
  for (const Matrix6d& e : fluctuation_basis(corr.fluctuation_class()))
    basis_.push_back(to_blocked(e));
}

ModeFrame ScatteringKernel::frame(const Vector3d& khat) const {
  const ModeDecomposition d = decompose(blocked_, mat_.density(), khat);
  ModeFrame f;
  f.khat = khat;
  f.speed = d.speed;
  f.polarization = d.polarization;
  if (d.gap(0, 1) < tol_) {
    const auto [z1, z2] = transverse_basis(khat);
    f.polarization.col(0) = z1;
    f.polarization.col(1) = z2;
    f.degenerate = true;
  }
  return f;
}

double ScatteringKernel::basis_symbol(int m, const Vector3d& k, int alpha,
                                      const Vector3d& q, int beta) const {
  if (m < 0 || m >= channels())
    throw std::out_of_range("basis_symbol: channel index out of range");
  if (alpha < 0 || alpha > 2 || beta < 0 || beta > 2)
    throw std::out_of_range("basis_symbol: mode index out of range");
  const double knorm = k.norm(), qnorm = q.norm();
  const ModeFrame fin = frame(k / knorm);
  const ModeFrame fout = frame(q / qnorm);
  double u[9], v[9], t[9];
  mode_vector(fin.khat, fin.polarization.col(alpha), u);
  mode_vector(fout.khat, fout.polarization.col(beta), v);
  Eigen::Map<Eigen::Matrix<double, 9, 1>> tm(t);
  tm = basis_[m] * Eigen::Map<const Eigen::Matrix<double, 9, 1>>(v);
  return knorm * qnorm / mat_.density() * dot9(u, t);
}

double ScatteringKernel::differential(double omega, const ModeFrame& in,
                                      int alpha, const ModeFrame& out,
                                      int beta) const {
  const double knorm = omega / in.speed[alpha];
  const double qnorm = omega / out.speed[beta];
  double u[9], v[9];
  mode_vector(in.khat, in.polarization.col(alpha), u);
  mode_vector(out.khat, out.polarization.col(beta), v);

  const int n = channels();
  Eigen::VectorXd h(n);
  Eigen::Matrix<double, 9, 1> t;
  const Eigen::Map<const Eigen::Matrix<double, 9, 1>> vm(v);
  for (int m = 0; m < n; ++m) {
    t = basis_[m] * vm;
    h[m] = dot9(u, t.data());
  }
  const double bilinear = h.dot(corr_.rho() * h);

  const double qdiff = (knorm * in.khat - qnorm * out.khat).norm();
  const double scale = knorm * qnorm / mat_.density();
  return kPi / (2.0 * omega * omega) * scale * scale *
         corr_.psd_radial(qdiff) * bilinear;
}

ScatterChannel ScatteringKernel::make_channel(double omega,
                                              const Vector3d& khat, int alpha,
                                              const Vector3d& qhat,
                                              int beta) const {
  if (alpha < 0 || alpha > 2 || beta < 0 || beta > 2)
    throw std::out_of_range("make_channel: mode index out of range");
  const ModeFrame in = frame(khat);
  const ModeFrame out = frame(qhat);
  ScatterChannel ch;
  ch.incoming_mode = alpha;
  ch.outgoing_mode = beta;
  ch.omega = omega;
  ch.k = (omega / in.speed[alpha]) * khat;
  ch.q = (omega / out.speed[beta]) * qhat;
  return ch;
}

SigmaResult ScatteringKernel::differential(double omega, const Vector3d& khat,
                                           int alpha, const Vector3d& qhat,
                                           int beta) const {
  if (alpha < 0 || alpha > 2 || beta < 0 || beta > 2)
    throw std::out_of_range("differential: mode index out of range");
  const ModeFrame in = frame(khat);
  const ModeFrame out = frame(qhat);
  SigmaResult r;
  r.value = differential(omega, in, alpha, out, beta);
  r.degenerate = (in.degenerate && alpha < 2) || (out.degenerate && beta < 2);
  return r;
}

ShellCache::ShellCache(const ScatteringKernel& kernel, const SphereRule& rule,
                       int threads)
    : kernel_(&kernel), rule_(&rule) {
  const std::size_t n = rule.size();
  const int nch = kernel.channels();
  frames_.resize(n);
  tvec_.assign(n * 3 * nch * 9, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    frames_[i] = kernel.frame(rule.nodes[i]);
    double v[9];
    for (int beta = 0; beta < 3; ++beta) {
      mode_vector(frames_[i].khat, frames_[i].polarization.col(beta), v);
      const Eigen::Map<const Eigen::Matrix<double, 9, 1>> vm(v);
      for (int m = 0; m < nch; ++m)
        Eigen::Map<Eigen::Matrix<double, 9, 1>>(tptr(i, beta, m)) =
            kernel.basis_blocked()[m] * vm;
    }
  });
  for (const ModeFrame& f : frames_)
    if (f.degenerate) any_degenerate_ = true;
}

std::vector<double> ShellCache::outgoing_density(double omega,
                                                 const ModeFrame& in,
                                                 int alpha) const {
  const std::size_t n = nodes();
  const int nch = kernel_->channels();
  const double density = kernel_->material().density();
  const double knorm = omega / in.speed[alpha];
  const Vector3d kvec = knorm * in.khat;

  double u[9];
  mode_vector(in.khat, in.polarization.col(alpha), u);
  Eigen::VectorXd h(nch);

  std::vector<double> out(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int beta = 0; beta < 3; ++beta) {
      const double c = frames_[i].speed[beta];
      const double qnorm = omega / c;
      for (int m = 0; m < nch; ++m) h[m] = dot9(u, tptr(i, beta, m));
      const double bilinear = h.dot(kernel_->correlation().rho() * h);
      const double qdiff = (kvec - qnorm * frames_[i].khat).norm();
      const double scale = knorm * qnorm / density;
      const double sigma = kPi / (2.0 * omega * omega) * scale * scale *
                           kernel_->correlation().psd_radial(qdiff) * bilinear;
      out[beta * n + i] =
          2.0 * kPi * omega * omega * rule_->weights[i] * sigma / (c * c * c);
    }
  }
  return out;
}

std::array<double, 3> ShellCache::xsection_row(double omega,
                                               const ModeFrame& in,
                                               int alpha) const {
  const std::vector<double> d = outgoing_density(omega, in, alpha);
  const std::size_t n = nodes();
  std::array<double, 3> partial;
  for (int beta = 0; beta < 3; ++beta)
    partial[beta] = pairwise_sum(std::span(d).subspan(beta * n, n));
  return partial;
}

double partial_total_xsection(const ScatteringKernel& kernel, double omega,
                              const Vector3d& khat, int alpha, int beta,
                              const SphereRule& rule) {
  const ModeFrame in = kernel.frame(khat);
  const double s = integrate(rule, [&](std::size_t, const Vector3d& qhat) {
    const ModeFrame out = kernel.frame(qhat);
    const double c = out.speed[beta];
    return kernel.differential(omega, in, alpha, out, beta) / (c * c * c);
  });
  return 2.0 * kPi * omega * omega * s;
}

TotalXsection total_xsection_row(const ShellCache& shell, double omega,
                                 const Vector3d& khat, int alpha) {
  const ModeFrame in = shell.kernel().frame(khat);
  TotalXsection x;
  x.partial = shell.xsection_row(omega, in, alpha);
  x.total = x.partial[0] + x.partial[1] + x.partial[2];
  x.degenerate = in.degenerate && alpha < 2;
  if (!(x.total > 0.0))
    throw std::domain_error(
        "total scattering cross-section vanishes (no fluctuations); "
        "normalized cross-sections undefined");
  for (int b = 0; b < 3; ++b) x.normalized[b] = x.partial[b] / x.total;
  return x;
}

TotalXsection total_xsection(const ScatteringKernel& kernel, double omega,
                             const Vector3d& khat, int alpha,
                             const SphereRule& rule) {
  const ShellCache shell(kernel, rule);
  return total_xsection_row(shell, omega, khat, alpha);
}

CrossSectionTable build_xsection_table(const ScatteringKernel& kernel,
                                       double ak,
                                       const std::vector<Vector3d>& directions,
                                       const SphereRule& rule, int threads) {
  if (kernel.correlation().rho().cwiseAbs().maxCoeff() == 0.0)
    throw std::domain_error("no fluctuations: correlation matrix is zero");
  const double knorm = ak / kernel.correlation().a();

  CrossSectionTable table;
  table.ak = ak;
  table.n_polar = rule.n_polar;
  table.n_azimuth = rule.n_azimuth;
  table.directions = directions;
  table.rows.resize(directions.size());

  const ShellCache shell(kernel, rule, threads);
  parallel_for(directions.size(), threads, [&](std::size_t i) {
    const ModeFrame in = kernel.frame(directions[i]);
    for (int alpha = 0; alpha < 3; ++alpha) {
      const double omega = in.speed[alpha] * knorm;
      TotalXsection x;
      x.partial = shell.xsection_row(omega, in, alpha);
      x.total = x.partial[0] + x.partial[1] + x.partial[2];
      x.degenerate = in.degenerate && alpha < 2;
      for (int b = 0; b < 3; ++b)
        x.normalized[b] = (x.total > 0) ? x.partial[b] / x.total : 0.0;
      table.rows[i][alpha] = x;
    }
  });
  return table;
}

double reciprocity_check(const ScatteringKernel& kernel, double omega,
                         int samples, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector3d khat, qhat;
    rng.isotropic_direction(khat[0], khat[1], khat[2]);
    rng.isotropic_direction(qhat[0], qhat[1], qhat[2]);
    const int alpha = static_cast<int>(rng.next_u64() % 3);
    const int beta = static_cast<int>(rng.next_u64() % 3);

    const double s1 = kernel.differential(omega, khat, alpha, qhat, beta).value;
    const double s2 = kernel.differential(omega, qhat, beta, khat, alpha).value;
    const double s3 =
        kernel.differential(omega, -qhat, beta, -khat, alpha).value;
    const double ref = std::max({std::abs(s1), std::abs(s2), std::abs(s3),
                                 1e-300});
    worst = std::max(worst,
                     std::max(std::abs(s1 - s2), std::abs(s1 - s3)) / ref);
  }
  return worst;
}

}  // namespace kinel
