#ifndef KINEL_MATERIAL_HPP
#define KINEL_MATERIAL_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace kinel {

using Matrix3d = Eigen::Matrix3d;
using Vector3d = Eigen::Vector3d;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix9d = Eigen::Matrix<double, 9, 9>;

//! Symmetry class of a stiffness tensor, ordered by number of independent
//! constants (2, 3, 5, 9, 21).
enum class SymmetryClass {
  isotropic,
  cubic,
  transverse_isotropic,
  orthotropic,
  triclinic,
};

int class_constant_count(SymmetryClass c);
std::string_view to_string(SymmetryClass c);
SymmetryClass symmetry_class_from_string(std::string_view name);

//! Thrown by the constructors when the requested constants do not give a
//! positive definite strain energy.
class StabilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! Voigt multi-index of a symmetric axis pair, 1-based on both sides:
//! 11->1, 22->2, 33->3, 23->4, 31->5, 12->6.
int voigt_index(int i, int j);

struct StabilityReport {
  bool ok = true;
  double min_eigenvalue = 0.0;     // of the 6x6 Voigt form
  double max_eigenvalue = 0.0;
  std::vector<std::string> violations;
};

//! Stiffness in Voigt form [Pa] plus density [kg/m^3]. Immutable after
//! construction; the constructor symmetrizes nothing, it requires an exactly
//! symmetric matrix and rejects unstable inputs.
class ElasticityMatrix {
public:
  ElasticityMatrix(const Matrix6d& voigt_pa, double density_kg_m3,
                   SymmetryClass tag);

  const Matrix6d& voigt() const { return voigt_; }
  double density() const { return density_; }
  SymmetryClass class_tag() const { return class_; }

private:
  Matrix6d voigt_;
  double density_;
  SymmetryClass class_;
};

// Constructors for the supported symmetry classes. Constants in Pa.
ElasticityMatrix build_isotropic(double lambda, double mu, double density);
ElasticityMatrix build_cubic(double c1, double c2, double c3, double density);
ElasticityMatrix build_transverse_isotropic(double c1, double c2, double c3,
                                            double c4, double c5,
                                            double density);
ElasticityMatrix build_orthotropic(const std::array<double, 9>& c,
                                   double density);
//! Full 21-constant input; only the upper triangle of `voigt` is read.
ElasticityMatrix build_triclinic(const Matrix6d& voigt, double density);

//! Positive definiteness of the 6x6 form (the physical requirement) plus the
//! class inequalities as readable diagnostics.
StabilityReport validate_stability(const Matrix6d& voigt, SymmetryClass tag,
                                   double density);
StabilityReport validate_stability(const ElasticityMatrix& mat);

//! 9x9 block form: block (i,k) is the 3x3 matrix with entries C^{ijkl},
//! i.e. entry (3i+j, 3k+l) = C^{ijkl} with 0-based axes.
Matrix9d to_blocked(const Matrix6d& voigt);
Matrix9d to_blocked(const ElasticityMatrix& mat);
//! Inverse of to_blocked; the round trip is bit-exact.
Matrix6d from_blocked(const Matrix9d& blocked);

//! List of independent constants of a class-patterned Voigt matrix, in the
//! constructor argument order (isotropic: lambda, mu).
std::vector<double> class_constants(const ElasticityMatrix& mat);

//! Voigt matrix of the class pattern evaluated at the given constants.
Matrix6d class_pattern(SymmetryClass tag, const std::vector<double>& c);

}  // namespace kinel

#endif
