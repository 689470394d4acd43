// Independent reference implementations used only by the test suites. Each
// one evaluates a quantity through a different route than the library:
// closed-form matrices instead of generic assembly, unfactorized full-matrix
// kernels instead of the channel sum, finite differences instead of analytic
// derivatives.
#ifndef KINEL_TESTS_ORACLES_HPP
#define KINEL_TESTS_ORACLES_HPP

#include <complex>
#include <vector>

#include "kinel/correlation.hpp"
#include "kinel/material.hpp"
#include "kinel/scattering.hpp"

namespace kinel::oracle {

// --- Christoffel closed forms per symmetry class (unit |k|) ---------------
Matrix3d christoffel_closed_form(const ElasticityMatrix& mat,
                                 const Vector3d& k);

// --- positive definiteness by Sylvester's criterion (leading minors) ------
bool sylvester_positive_definite(const Matrix6d& m);

// --- finite-difference group velocity --------------------------------------
Vector3d group_velocity_fd(const ElasticityMatrix& mat, int alpha,
                           const Vector3d& k, double rel_step = 1e-6);

// --- isotropic closed-form kernels (deterministic transverse basis) --------
// Mode convention: S branches are 0,1 (the transverse pair z1, z2), P is 2.
struct IsotropicKernel {
  double rho;      // density
  double lambda;   // Lame lambda
  double mu;       // Lame mu
  // 2x2 correlation coefficients over the (lambda, mu) channels
  double r_ll, r_lm, r_mm;
  const CorrelationModel* corr;  // supplies the Markov radial factor

  double cP() const { return std::sqrt((lambda + 2 * mu) / rho); }
  double cS() const { return std::sqrt(mu / rho); }

  // scalar sigma for any basis-contracted mode pair, on the elastic shell
  double sigma(double omega, const Vector3d& khat, int alpha,
               const Vector3d& qhat, int beta) const;
};

IsotropicKernel make_isotropic_kernel(const ElasticityMatrix& iso,
                                      const CorrelationModel& corr);

// --- closed-form scattering symbol matrices --------------------------------
// The unprojected 3x3 symbol M(k)^T C M(q) (unit density) written out
// entrywise per symmetry class, with the channel coefficients supplied as c.
Matrix3d symbol_matrix_closed_form(SymmetryClass cls,
                                   const std::vector<double>& c,
                                   const Vector3d& k, const Vector3d& q);

// --- unfactorized brute-force differential cross-section -------------------
// Assembles sigma_ab from the full 9x9 blocked canonical tensors and the 9x3
// wave-vector matrices, double loop over all channel pairs, both factor
// orders evaluated explicitly. Shares only the mode frames with the library.
double brute_force_sigma(const ScatteringKernel& kernel, double omega,
                         const Vector3d& khat, int alpha, const Vector3d& qhat,
                         int beta);

// --- radial inverse transform of the Markov PSD ----------------------------
// r(y) = 4 pi int_0^inf qhat^2 Rhat(q) sinc(q y) dq, evaluated by half-period
// panel quadrature (tan substitution at y = 0).
double psd_inverse_transform(const CorrelationModel& corr, double y);

// --- point-group operations -------------------------------------------------
// Orthogonal matrices leaving the class pattern invariant (a finite sample
// for the continuous transverse-isotropic group).
std::vector<Matrix3d> point_group_ops(SymmetryClass cls);

// --- spherical harmonics (theta part from std::sph_legendre) ---------------
std::complex<double> spherical_harmonic(int l, int m, const Vector3d& n);

}  // namespace kinel::oracle

#endif
