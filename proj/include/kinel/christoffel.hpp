#ifndef KINEL_CHRISTOFFEL_HPP
#define KINEL_CHRISTOFFEL_HPP

#include <array>
#include <utility>
#include <vector>

#include "kinel/material.hpp"

namespace kinel {

using Matrix93 = Eigen::Matrix<double, 9, 3>;

//! Thrown when an operation needs an isolated mode but the direction is
//! (numerically) an acoustic axis.
class DegenerateModeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! 9x3 block stacking of a wave vector: row (3i+j), column a holds
//! delta_{ia} k_j. Linear in k.
Matrix93 wavevector_matrix(const Vector3d& k);

//! Christoffel tensor rho^-1 M(k)^T C M(k); symmetric positive definite for
//! |k| > 0 on stable materials, homogeneous of degree 2 in |k|.
Matrix3d christoffel(const ElasticityMatrix& mat, const Vector3d& k);
Matrix3d christoffel(const Matrix9d& blocked, double density, const Vector3d& k);

//! Eigenstructure of the Christoffel tensor at one unit direction.
//! Speeds are sorted ascending; polarization signs are deterministic
//! (largest-magnitude component positive, ties resolved to the lowest index).
struct ModeDecomposition {
  Vector3d khat;
  double knorm = 1.0;
  std::array<double, 3> speed{};     // [m/s], ascending
  std::array<double, 3> omega_sq{};  // eigenvalues at the given |k|
  Matrix3d polarization;             // unit eigenvectors as columns

  Vector3d mode(int alpha) const { return polarization.col(alpha); }
  Matrix3d projector(int alpha) const {
    return polarization.col(alpha) * polarization.col(alpha).transpose();
  }
  //! Relative speed gap (c_b - c_a)/c_b between adjacent modes a < b.
  double gap(int a, int b) const { return (speed[b] - speed[a]) / speed[b]; }
};

ModeDecomposition decompose(const ElasticityMatrix& mat, const Vector3d& khat,
                            double knorm = 1.0);
ModeDecomposition decompose(const Matrix9d& blocked, double density,
                            const Vector3d& khat, double knorm = 1.0);

//! Deterministic transverse pair (z1, z2) completing khat to an orthonormal
//! right-handed triplet: z1 = normalize(khat x u) with u = e3, switching to
//! u = e1 when |khat.e3| > 0.9, and z2 = khat x z1.
std::pair<Vector3d, Vector3d> transverse_basis(const Vector3d& khat);

//! Analytic gradient d(Gamma)/dk_m of the Christoffel tensor, exact since
//! Gamma is quadratic in k.
std::array<Matrix3d, 3> christoffel_gradient(const Matrix9d& blocked,
                                             double density, const Vector3d& k);

//! Group velocity grad_k omega_alpha, evaluated analytically from the
//! quadratic dependence of the Christoffel tensor on k. Requires the mode to
//! be isolated at khat (relative gap above `tol`), otherwise throws
//! DegenerateModeError naming the direction.
Vector3d group_velocity(const ElasticityMatrix& mat, int alpha,
                        const Vector3d& k, double tol = 1e-6);
Vector3d group_velocity(const Matrix9d& blocked, double density, int alpha,
                        const Vector3d& k, double tol = 1e-6);

//! Transport velocity of an unresolved degenerate pair: the gradient of the
//! subspace-averaged frequency, smooth through the degeneracy.
Vector3d group_velocity_pair(const Matrix9d& blocked, double density, int a,
                             int b, const Vector3d& k);

//! Equiangular latitude-longitude direction grid with the given spacing in
//! degrees, ordered polar-major. Used for surface maps, not for integration.
std::vector<Vector3d> latlong_directions(double step_deg);

struct VelocitySample {
  Vector3d khat;
  std::array<double, 3> speed;
};

std::vector<VelocitySample> velocity_surface(const ElasticityMatrix& mat,
                                             const std::vector<Vector3d>& dirs,
                                             int threads = 1);

struct AcousticAxis {
  Vector3d direction;        // unit, first nonzero component positive
  std::array<int, 2> pair;   // degenerate mode pair (0-based)
  double gap;                // relative speed gap at the reported direction
};

struct AxisScan {
  bool degenerate_everywhere = false;  // isotropic input
  std::vector<AcousticAxis> axes;
};

//! Seed-grid scan of the (c2-c1)/c2 gap followed by derivative-free local
//! refinement. Antipodes and duplicates within 1e-4 rad are merged.
AxisScan detect_acoustic_axes(const ElasticityMatrix& mat,
                              double seed_step_deg = 2.0, double tol = 1e-6);

}  // namespace kinel

#endif
