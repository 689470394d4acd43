#include "kinel/material.hpp"

#include <cmath>
#include <sstream>

namespace kinel {

namespace {

// 0-based pair -> 0-based Voigt index
constexpr int kVoigt0[3][3] = {{0, 5, 4}, {5, 1, 3}, {4, 3, 2}};

// canonical 0-based pair of a 0-based Voigt index
constexpr int kPair0[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {2, 0}, {0, 1}};

void require(bool cond, const std::string& msg) {
  if (!cond) throw StabilityError(msg);
}

}  // namespace

int class_constant_count(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::isotropic: return 2;
    case SymmetryClass::cubic: return 3;
    case SymmetryClass::transverse_isotropic: return 5;
    case SymmetryClass::orthotropic: return 9;
    case SymmetryClass::triclinic: return 21;
  }
  throw std::invalid_argument("unknown symmetry class");
}

std::string_view to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::isotropic: return "isotropic";
    case SymmetryClass::cubic: return "cubic";
    case SymmetryClass::transverse_isotropic: return "transverse_isotropic";
    case SymmetryClass::orthotropic: return "orthotropic";
    case SymmetryClass::triclinic: return "triclinic";
  }
  return "?";
}

SymmetryClass symmetry_class_from_string(std::string_view name) {
  for (auto c : {SymmetryClass::isotropic, SymmetryClass::cubic,
                 SymmetryClass::transverse_isotropic, SymmetryClass::orthotropic,
                 SymmetryClass::triclinic}) {
    if (name == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown symmetry class: " + std::string(name));
}

int voigt_index(int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3)
    throw std::out_of_range("voigt_index: axes must be in 1..3");
  return kVoigt0[i - 1][j - 1] + 1;
}

Matrix6d class_pattern(SymmetryClass tag, const std::vector<double>& c) {
  if (static_cast<int>(c.size()) != class_constant_count(tag))
    throw std::invalid_argument("class_pattern: constant count mismatch");
  Matrix6d m = Matrix6d::Zero();
  switch (tag) {
    case SymmetryClass::isotropic: {
      const double la = c[0], mu = c[1];
      m.topLeftCorner<3, 3>().setConstant(la);
      m(0, 0) = m(1, 1) = m(2, 2) = la + 2 * mu;
      m(3, 3) = m(4, 4) = m(5, 5) = mu;
      break;
    }
    case SymmetryClass::cubic: {
      m.topLeftCorner<3, 3>().setConstant(c[1]);
      m(0, 0) = m(1, 1) = m(2, 2) = c[0];
      m(3, 3) = m(4, 4) = m(5, 5) = c[2];
      break;
    }
    case SymmetryClass::transverse_isotropic: {
      m(0, 0) = m(1, 1) = c[0];
      m(0, 1) = m(1, 0) = c[1];
      m(0, 2) = m(2, 0) = m(1, 2) = m(2, 1) = c[2];
      m(2, 2) = c[3];
      m(3, 3) = m(4, 4) = c[4];
      m(5, 5) = (c[0] - c[1]) / 2;
      break;
    }
    case SymmetryClass::orthotropic: {
      m(0, 0) = c[0];
      m(0, 1) = m(1, 0) = c[1];
      m(0, 2) = m(2, 0) = c[2];
      m(1, 1) = c[3];
      m(1, 2) = m(2, 1) = c[4];
      m(2, 2) = c[5];
      m(3, 3) = c[6];
      m(4, 4) = c[7];
      m(5, 5) = c[8];
      break;
    }
    case SymmetryClass::triclinic: {
      int n = 0;
      for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) {
          m(i, j) = m(j, i) = c[n++];
        }
      break;
    }
  }
  return m;
}

std::vector<double> class_constants(const ElasticityMatrix& mat) {
  const Matrix6d& m = mat.voigt();
  switch (mat.class_tag()) {
    case SymmetryClass::isotropic: return {m(0, 1), m(3, 3)};
    case SymmetryClass::cubic: return {m(0, 0), m(0, 1), m(3, 3)};
    case SymmetryClass::transverse_isotropic:
      return {m(0, 0), m(0, 1), m(0, 2), m(2, 2), m(3, 3)};
    case SymmetryClass::orthotropic:
      return {m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2),
              m(2, 2), m(3, 3), m(4, 4), m(5, 5)};
    case SymmetryClass::triclinic: {
      std::vector<double> c;
      c.reserve(21);
      for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) c.push_back(m(i, j));
      return c;
    }
  }
  throw std::invalid_argument("unknown symmetry class");
}

StabilityReport validate_stability(const Matrix6d& voigt, SymmetryClass tag,
                                   double density) {
  StabilityReport rep;
  auto flag = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };

  if (!(density > 0)) flag("density must be > 0");

  // class inequalities first: redundant with the PD check below but give the
  // readable message when a constructor rejects its arguments
  auto chk = [&](bool ok, const char* msg) {
    if (!ok) flag(msg);
  };
  const Matrix6d& m = voigt;
  switch (tag) {
    case SymmetryClass::isotropic: {
      const double la = m(0, 1), mu = m(3, 3);
      chk(mu > 0, "mu > 0");
      chk(3 * la + 2 * mu > 0, "3 lambda + 2 mu > 0");
      break;
    }
    case SymmetryClass::cubic: {
      const double c1 = m(0, 0), c2 = m(0, 1), c3 = m(3, 3);
      chk(c3 > 0, "c3 > 0");
      chk(c1 - c2 > 0, "c1 - c2 > 0");
      chk(c1 + 2 * c2 > 0, "c1 + 2 c2 > 0");
      break;
    }
    case SymmetryClass::transverse_isotropic: {
      const double c1 = m(0, 0), c2 = m(0, 1), c3 = m(0, 2), c4 = m(2, 2),
                   c5 = m(3, 3);
      chk(c1 > 0, "c1 > 0");
      chk(c4 > 0, "c4 > 0");
      chk(c5 > 0, "c5 > 0");
      chk(c2 * c2 < c1 * c1, "c2^2 < c1^2");
      chk(c3 * c3 < c1 * c4, "c3^2 < c1 c4");
      chk(2 * c1 * c3 * c3 + c4 * c2 * c2 - 2 * c2 * c3 * c3 < c1 * c1 * c4,
          "2 c1 c3^2 + c4 c2^2 - 2 c2 c3^2 < c1^2 c4");
      break;
    }
    case SymmetryClass::orthotropic: {
      const double c1 = m(0, 0), c2 = m(0, 1), c3 = m(0, 2), c4 = m(1, 1),
                   c5 = m(1, 2), c6 = m(2, 2), c7 = m(3, 3), c8 = m(4, 4),
                   c9 = m(5, 5);
      chk(c1 > 0, "c1 > 0");
      chk(c4 > 0, "c4 > 0");
      chk(c6 > 0, "c6 > 0");
      chk(c7 > 0, "c7 > 0");
      chk(c8 > 0, "c8 > 0");
      chk(c9 > 0, "c9 > 0");
      chk(c2 * c2 < c1 * c4, "c2^2 < c1 c4");
      chk(c3 * c3 < c1 * c6, "c3^2 < c1 c6");
      chk(c5 * c5 < c4 * c6, "c5^2 < c4 c6");
      chk(c1 * c5 * c5 + c4 * c3 * c3 + c6 * c2 * c2 - 2 * c2 * c3 * c5 <
              c1 * c4 * c6,
          "c1 c5^2 + c4 c3^2 + c6 c2^2 - 2 c2 c3 c5 < c1 c4 c6");
      break;
    }
    case SymmetryClass::triclinic:
      break;  // PD check is the whole story
  }

  Eigen::SelfAdjointEigenSolver<Matrix6d> es(voigt, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.max_eigenvalue = es.eigenvalues().maxCoeff();
  if (!(rep.min_eigenvalue > 1e-9 * std::abs(rep.max_eigenvalue))) {
    std::ostringstream os;
    os << "6x6 Voigt form not positive definite (min eigenvalue "
       << rep.min_eigenvalue << ")";
    flag(os.str());
  }
  return rep;
}

StabilityReport validate_stability(const ElasticityMatrix& mat) {
  return validate_stability(mat.voigt(), mat.class_tag(), mat.density());
}

ElasticityMatrix::ElasticityMatrix(const Matrix6d& voigt_pa,
                                   double density_kg_m3, SymmetryClass tag)
    : voigt_(voigt_pa), density_(density_kg_m3), class_(tag) {
  if (!(voigt_ == voigt_.transpose()))
    throw std::invalid_argument("elasticity matrix must be exactly symmetric");
  StabilityReport rep = validate_stability(voigt_, tag, density_);
  if (!rep.ok) require(false, "unstable material: " + rep.violations.front());
}

ElasticityMatrix build_isotropic(double lambda, double mu, double density) {
  return {class_pattern(SymmetryClass::isotropic, {lambda, mu}), density,
          SymmetryClass::isotropic};
}

ElasticityMatrix build_cubic(double c1, double c2, double c3, double density) {
  return {class_pattern(SymmetryClass::cubic, {c1, c2, c3}), density,
          SymmetryClass::cubic};
}

ElasticityMatrix build_transverse_isotropic(double c1, double c2, double c3,
                                            double c4, double c5,
                                            double density) {
  return {class_pattern(SymmetryClass::transverse_isotropic,
                        {c1, c2, c3, c4, c5}),
          density, SymmetryClass::transverse_isotropic};
}

ElasticityMatrix build_orthotropic(const std::array<double, 9>& c,
                                   double density) {
  return {class_pattern(SymmetryClass::orthotropic,
                        std::vector<double>(c.begin(), c.end())),
          density, SymmetryClass::orthotropic};
}

ElasticityMatrix build_triclinic(const Matrix6d& voigt, double density) {
  Matrix6d sym;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) sym(i, j) = (j >= i) ? voigt(i, j) : voigt(j, i);
  return {sym, density, SymmetryClass::triclinic};
}

Matrix9d to_blocked(const Matrix6d& voigt) {
  Matrix9d b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          b(3 * i + j, 3 * k + l) = voigt(kVoigt0[i][j], kVoigt0[k][l]);
  return b;
}

Matrix9d to_blocked(const ElasticityMatrix& mat) { return to_blocked(mat.voigt()); }

Matrix6d from_blocked(const Matrix9d& blocked) {
  Matrix6d m;
  for (int I = 0; I < 6; ++I)
    for (int J = 0; J < 6; ++J) {
      const int i = kPair0[I][0], j = kPair0[I][1];
      const int k = kPair0[J][0], l = kPair0[J][1];
      m(I, J) = blocked(3 * i + j, 3 * k + l);
    }
  return m;
}

}  // namespace kinel
