#ifndef KINEL_SCATTERING_HPP
#define KINEL_SCATTERING_HPP

#include <array>
#include <vector>

#include "kinel/christoffel.hpp"
#include "kinel/correlation.hpp"
#include "kinel/material.hpp"
#include "kinel/quadrature.hpp"

namespace kinel {

//! Canonical unit-stiffness patterns of a symmetry class, one per independent
//! constant and in the constructor argument order. Any stiffness fluctuation
//! of the class is a linear combination of these.
std::vector<Matrix6d> fluctuation_basis(SymmetryClass cls);

//! Mode data at one unit direction as used by the collision kernels. When the
//! two slow modes are degenerate within tolerance, their polarizations are
//! replaced by the deterministic transverse pair and the frame is flagged.
struct ModeFrame {
  Vector3d khat;
  std::array<double, 3> speed{};  // ascending
  Matrix3d polarization;          // columns
  bool degenerate = false;
};

struct SigmaResult {
  double value = 0.0;
  bool degenerate = false;  // an involved mode sits on an acoustic axis
};

//! One collision channel on the elastic shell: |k| = omega / c_alpha(khat)
//! and |q| = omega / c_beta(qhat) by construction.
struct ScatterChannel {
  int incoming_mode = 0;
  int outgoing_mode = 0;
  Vector3d k = Vector3d::Zero();
  Vector3d q = Vector3d::Zero();
  double omega = 0.0;
};

//! Differential and total scattering cross-sections of one material/
//! correlation pair. Values are per unit fluctuation variance.
class ScatteringKernel {
public:
  ScatteringKernel(const ElasticityMatrix& mat, const CorrelationModel& corr,
                   double degeneracy_tol = 1e-6);

  const ElasticityMatrix& material() const { return mat_; }
  const CorrelationModel& correlation() const { return corr_; }
  const Matrix9d& blocked() const { return blocked_; }
  double degeneracy_tol() const { return tol_; }
  int channels() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix9d>& basis_blocked() const { return basis_; }

  ModeFrame frame(const Vector3d& khat) const;

  //! Mode-projected symbol of the m-th fluctuation channel,
  //! h^(m)_{ab}(k, q) = e_a(khat)^T [rho^-1 M(k)^T E_m M(q)] e_b(qhat).
  //! Bilinear in (|k|, |q|) and symmetric under (a,k) <-> (b,q).
  double basis_symbol(int m, const Vector3d& k, int alpha, const Vector3d& q,
                      int beta) const;

  //! sigma_ab(k, q) with the on-shell channel built from (omega, khat, a,
  //! qhat, b): pi/(2 omega_a omega_b) sum_mn Rhat_mn(k-q) h^(m) h^(n).
  SigmaResult differential(double omega, const Vector3d& khat, int alpha,
                           const Vector3d& qhat, int beta) const;

  //! Same with caller-provided frames (grid sweeps).
  double differential(double omega, const ModeFrame& in, int alpha,
                      const ModeFrame& out, int beta) const;

  ScatterChannel make_channel(double omega, const Vector3d& khat, int alpha,
                              const Vector3d& qhat, int beta) const;

private:
  ElasticityMatrix mat_;
  Matrix9d blocked_;
  CorrelationModel corr_;
  std::vector<Matrix9d> basis_;
  double tol_;
};

//! Outgoing-shell data cached on a sphere rule: frames and the per-node,
//! per-mode channel contractions that make grid sweeps cheap.
class ShellCache {
public:
  //! Both referents must outlive the cache.
  ShellCache(const ScatteringKernel& kernel, const SphereRule& rule,
             int threads = 1);
  ShellCache(const ShellCache&) = delete;
  ShellCache& operator=(const ShellCache&) = delete;

  const SphereRule& rule() const { return *rule_; }
  const ScatteringKernel& kernel() const { return *kernel_; }
  std::size_t nodes() const { return rule_->size(); }
  const ModeFrame& frame(std::size_t node) const { return frames_[node]; }
  double speed(std::size_t node, int beta) const {
    return frames_[node].speed[beta];
  }
  bool any_degenerate() const { return any_degenerate_; }

  //! Sigma_ab(omega k/c_a) = 2 pi omega^2 int c_b(q)^-3 sigma_ab dOmega(q),
  //! all three b at once, deterministic fixed-order reduction.
  std::array<double, 3> xsection_row(double omega, const ModeFrame& in,
                                     int alpha) const;

  //! Un-normalized collision densities over flattened outgoing states
  //! (beta * nodes + n): w_n c_b^-3 2 pi omega^2 sigma_ab. Their sum is the
  //! total rate of (alpha, in).
  std::vector<double> outgoing_density(double omega, const ModeFrame& in,
                                       int alpha) const;

private:
  const ScatteringKernel* kernel_;
  const SphereRule* rule_;
  std::vector<ModeFrame> frames_;
  // contraction cache: for node n, mode b, channel m the 9-vector
  // E_m * (M(qhat_n) e_b), flattened
  std::vector<double> tvec_;
  bool any_degenerate_ = false;

  double* tptr(std::size_t node, int beta, int m) {
    return &tvec_[((node * 3 + beta) * kernel_->channels() + m) * 9];
  }
  const double* tptr(std::size_t node, int beta, int m) const {
    return &tvec_[((node * 3 + beta) * kernel_->channels() + m) * 9];
  }
};

//! Partial scattering cross-section Sigma_ab at one incoming direction.
double partial_total_xsection(const ScatteringKernel& kernel, double omega,
                              const Vector3d& khat, int alpha, int beta,
                              const SphereRule& rule);

struct TotalXsection {
  double total = 0.0;                     // Sigma_a = sum_b Sigma_ab
  std::array<double, 3> partial{};        // Sigma_ab
  std::array<double, 3> normalized{};     // Sigma#_ab, rows sum to 1
  bool degenerate = false;
};

//! Sigma_a and the normalized row Sigma#; throws std::domain_error when the
//! total rate vanishes (no fluctuations).
TotalXsection total_xsection(const ScatteringKernel& kernel, double omega,
                             const Vector3d& khat, int alpha,
                             const SphereRule& rule);
TotalXsection total_xsection_row(const ShellCache& shell, double omega,
                                 const Vector3d& khat, int alpha);

//! Cross-sections sampled over an incoming-direction grid at fixed
//! nondimensional frequency a|k|, with omega = c_a(khat) |k| per mode.
struct CrossSectionTable {
  double ak = 0.0;
  int n_polar = 0, n_azimuth = 0;
  std::vector<Vector3d> directions;
  std::vector<std::array<TotalXsection, 3>> rows;
};

CrossSectionTable build_xsection_table(const ScatteringKernel& kernel,
                                       double ak,
                                       const std::vector<Vector3d>& directions,
                                       const SphereRule& rule, int threads = 1);

//! Max relative violation of the on-shell reciprocity relations
//! sigma_ab(omega khat/c_a, omega qhat/c_b) = sigma_ba(omega qhat/c_b, ...)
//! and sigma_ab(k, q) = sigma_ba(-q, -k) over random channels.
double reciprocity_check(const ScatteringKernel& kernel, double omega,
                         int samples, std::uint64_t seed);

}  // namespace kinel

#endif
