#ifndef KINEL_CORRELATION_HPP
#define KINEL_CORRELATION_HPP

#include <string>

#include "kinel/material.hpp"

namespace kinel {

//! Power spectral densities of the stiffness fluctuations. The single Markov
//! (exponential) kind is supported: correlation r_mn(y) = rho_mn exp(-|y|/lbar)
//! with lbar = 6^{-1/3} a, whose transform is
//! rho_mn * lbar^3/pi^2 / (1 + (lbar |q|)^2)^2.
//!
//! The fluctuation class may differ from the background material's class; the
//! rho matrix is sized by the fluctuation class's independent constant count.
//! Fluctuation amplitudes are normalized out, so cross-sections computed from
//! this model are "per unit fluctuation variance".
class CorrelationModel {
public:
  enum class Kind { markov };

  static CorrelationModel markov(double a, SymmetryClass fluctuation_class);
  static CorrelationModel markov(double a, SymmetryClass fluctuation_class,
                                 Eigen::MatrixXd rho);

  Kind kind() const { return Kind::markov; }
  double a() const { return a_; }
  double lbar() const { return lbar_; }
  SymmetryClass fluctuation_class() const { return class_; }
  const Eigen::MatrixXd& rho() const { return rho_; }
  int channels() const { return static_cast<int>(rho_.rows()); }

  //! PSD of channel pair (m, n), 0-based; even in q, depends on |q| only.
  double psd(int m, int n, const Vector3d& q) const;
  //! Channel-independent radial factor lbar^3/pi^2 / (1 + (lbar q)^2)^2.
  double psd_radial(double qnorm) const;
  //! Correlation function value rho_mn exp(-y/lbar).
  double correlation(int m, int n, double y) const;

  //! Returns a copy with every rho entry scaled by s.
  CorrelationModel scaled(double s) const;

private:
  CorrelationModel(double a, SymmetryClass cls, Eigen::MatrixXd rho);

  double a_;
  double lbar_;
  SymmetryClass class_;
  Eigen::MatrixXd rho_;
};

struct NormalizationCheck {
  double integral;  // int_0^inf y^2 dy int_S2 dOmega r(y) for channel (0,0)
  double expected;  // (4/3) pi a^3
  double residual;  // |integral - expected| / expected
};

//! Verifies the correlation-length normalization of the exponential model by
//! adaptive radial quadrature. For unit rho the residual is < 1e-8.
NormalizationCheck normalization_check(const CorrelationModel& model);

//! JSON schema: {kind: "markov", a_m: ..., class: ..., rho: [[...]]};
//! rho omitted means the all-ones default.
CorrelationModel correlation_from_json_text(const std::string& text);
std::string correlation_to_json_text(const CorrelationModel& model);
CorrelationModel load_correlation_json(const std::string& path);

}  // namespace kinel

#endif
