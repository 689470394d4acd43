#include "kinel/correlation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kinel {

namespace {

constexpr double kPi = 3.14159265358979323846;

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = (a + b) / 2;
  const double lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) < 15 * tol)
    return left + right + delta / 15;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f((a + b) / 2);
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

CorrelationModel::CorrelationModel(double a, SymmetryClass cls,
                                   Eigen::MatrixXd rho)
    : a_(a), lbar_(a * std::pow(6.0, -1.0 / 3.0)), class_(cls),
      rho_(std::move(rho)) {
  if (!(a_ > 0)) throw std::invalid_argument("correlation length must be > 0");
  const int n = class_constant_count(cls);
  if (rho_.rows() != n || rho_.cols() != n)
    throw std::invalid_argument(
        "rho size does not match the fluctuation class constant count");
  if (!rho_.isApprox(rho_.transpose(), 0.0))
    throw std::invalid_argument("rho must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho_,
                                                    Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -1e-12 * std::max(1.0, hi))
    throw std::invalid_argument("rho must be positive semidefinite");
}

CorrelationModel CorrelationModel::markov(double a, SymmetryClass cls) {
  const int n = class_constant_count(cls);
  return CorrelationModel(a, cls, Eigen::MatrixXd::Ones(n, n));
}

CorrelationModel CorrelationModel::markov(double a, SymmetryClass cls,
                                          Eigen::MatrixXd rho) {
  return CorrelationModel(a, cls, std::move(rho));
}

double CorrelationModel::psd_radial(double qnorm) const {
  const double u = 1.0 + (lbar_ * qnorm) * (lbar_ * qnorm);
  return lbar_ * lbar_ * lbar_ / (kPi * kPi) / (u * u);
}

double CorrelationModel::psd(int m, int n, const Vector3d& q) const {
  if (m < 0 || n < 0 || m >= channels() || n >= channels())
    throw std::out_of_range("psd: channel index out of range");
  return rho_(m, n) * psd_radial(q.norm());
}

double CorrelationModel::correlation(int m, int n, double y) const {
  if (m < 0 || n < 0 || m >= channels() || n >= channels())
    throw std::out_of_range("correlation: channel index out of range");
  return rho_(m, n) * std::exp(-std::abs(y) / lbar_);
}

CorrelationModel CorrelationModel::scaled(double s) const {
  return CorrelationModel(a_, class_, s * rho_);
}

NormalizationCheck normalization_check(const CorrelationModel& model) {
  const double lbar = model.lbar();
  const double rho00 = model.rho()(0, 0);
  // the angular integral contributes 4 pi, r depends on the radius only
  const auto radial = [&](double y) {
    return y * y * std::exp(-y / lbar);
  };
  const double integral =
      4.0 * kPi * rho00 * adaptive_simpson(radial, 0.0, 60.0 * lbar, 1e-14 * lbar * lbar * lbar);
  const double expected = 4.0 / 3.0 * kPi * std::pow(model.a(), 3);
  return {integral, expected, std::abs(integral - expected) / expected};
}

CorrelationModel correlation_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const std::string kind = j.value("kind", "markov");
  if (kind != "markov")
    throw std::invalid_argument("unsupported correlation kind: " + kind);
  const double a = j.at("a_m").get<double>();
  const auto cls = symmetry_class_from_string(j.at("class").get<std::string>());
  if (!j.contains("rho")) return CorrelationModel::markov(a, cls);
  const auto rows = j.at("rho").get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd rho(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != static_cast<std::size_t>(rho.cols()))
      throw std::invalid_argument("rho rows must have equal length");
    for (std::size_t k = 0; k < rows[i].size(); ++k) rho(i, k) = rows[i][k];
  }
  return CorrelationModel::markov(a, cls, std::move(rho));
}

std::string correlation_to_json_text(const CorrelationModel& model) {
  nlohmann::json j;
  j["kind"] = "markov";
  j["a_m"] = model.a();
  j["class"] = to_string(model.fluctuation_class());
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < model.channels(); ++i) {
    rows.emplace_back();
    for (int k = 0; k < model.channels(); ++k)
      rows.back().push_back(model.rho()(i, k));
  }
  j["rho"] = rows;
  return j.dump(2);
}

CorrelationModel load_correlation_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open correlation file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return correlation_from_json_text(ss.str());
}

}  // namespace kinel
