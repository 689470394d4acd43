#include "kinel/christoffel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "kinel/parallel.hpp"

namespace kinel {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_finite(const Vector3d& k) {
  if (!k.allFinite()) throw std::invalid_argument("non-finite wave vector");
}

//! Deterministic sign: largest-magnitude component positive, ties broken by
//! the lowest index among the tied components.
void fix_sign(Eigen::Ref<Vector3d> v) {
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  for (int i = 0; i < best; ++i)
    if (std::abs(v[i]) == std::abs(v[best])) {
      best = i;
      break;
    }
  if (v[best] < 0) v = -v;
}

std::string dir_string(const Vector3d& d) {
  std::ostringstream os;
  os << "(" << d[0] << ", " << d[1] << ", " << d[2] << ")";
  return os.str();
}

}  // namespace

Matrix93 wavevector_matrix(const Vector3d& k) {
  check_finite(k);
  Matrix93 m = Matrix93::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(3 * i + j, i) = k[j];
  return m;
}

Matrix3d christoffel(const Matrix9d& blocked, double density,
                     const Vector3d& k) {
  check_finite(k);
  if (k.squaredNorm() == 0.0)
    throw std::invalid_argument("christoffel: zero wave vector");
  Matrix3d g;
  for (int a = 0; a < 3; ++a)
    for (int c = a; c < 3; ++c) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) s += blocked(3 * a + j, 3 * c + l) * k[j] * k[l];
      g(a, c) = g(c, a) = s / density;
    }
  return g;
}

Matrix3d christoffel(const ElasticityMatrix& mat, const Vector3d& k) {
  return christoffel(to_blocked(mat), mat.density(), k);
}

ModeDecomposition decompose(const Matrix9d& blocked, double density,
                            const Vector3d& khat, double knorm) {
  check_finite(khat);
  const Matrix3d g = christoffel(blocked, density, khat);
  Eigen::SelfAdjointEigenSolver<Matrix3d> es(g);
  ModeDecomposition d;
  d.khat = khat;
  d.knorm = knorm;
  d.polarization = es.eigenvectors();  // eigenvalues ascending in Eigen
  for (int a = 0; a < 3; ++a) {
    d.speed[a] = std::sqrt(std::max(0.0, es.eigenvalues()[a]));
    d.omega_sq[a] = es.eigenvalues()[a] * knorm * knorm;
    fix_sign(d.polarization.col(a));
  }
  return d;
}

ModeDecomposition decompose(const ElasticityMatrix& mat, const Vector3d& khat,
                            double knorm) {
  return decompose(to_blocked(mat), mat.density(), khat, knorm);
}

std::pair<Vector3d, Vector3d> transverse_basis(const Vector3d& khat) {
  const Vector3d u = (std::abs(khat[2]) > 0.9) ? Vector3d::UnitX() : Vector3d::UnitZ();
  const Vector3d z1 = khat.cross(u).normalized();
  const Vector3d z2 = khat.cross(z1);
  return {z1, z2};
}

std::array<Matrix3d, 3> christoffel_gradient(const Matrix9d& blocked,
                                             double density,
                                             const Vector3d& k) {
  std::array<Matrix3d, 3> grad;
  for (int m = 0; m < 3; ++m)
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l)
          s += (blocked(3 * a + m, 3 * c + l) + blocked(3 * a + l, 3 * c + m)) *
               k[l];
        grad[m](a, c) = s / density;
      }
  return grad;
}

Vector3d group_velocity(const Matrix9d& blocked, double density, int alpha,
                        const Vector3d& k, double tol) {
  if (alpha < 0 || alpha > 2) throw std::invalid_argument("mode index");
  const double knorm = k.norm();
  if (!(knorm > 0)) throw std::invalid_argument("zero wave vector");
  const Vector3d khat = k / knorm;
  const ModeDecomposition d = decompose(blocked, density, khat);

  const double lo = (alpha > 0) ? d.gap(alpha - 1, alpha) : 1.0;
  const double hi = (alpha < 2) ? d.gap(alpha, alpha + 1) : 1.0;
  if (std::min(lo, hi) < tol)
    throw DegenerateModeError("group velocity undefined: acoustic axis near " +
                              dir_string(khat));

  // Hellmann-Feynman with the exact quadratic derivative of Gamma
  const auto grad = christoffel_gradient(blocked, density, khat);
  const Vector3d e = d.mode(alpha);
  Vector3d v;
  for (int m = 0; m < 3; ++m)
    v[m] = e.dot(grad[m] * e) / (2.0 * d.speed[alpha]);
  return v;
}

Vector3d group_velocity_pair(const Matrix9d& blocked, double density, int a,
                             int b, const Vector3d& k) {
  const double knorm = k.norm();
  if (!(knorm > 0)) throw std::invalid_argument("zero wave vector");
  const Vector3d khat = k / knorm;
  const ModeDecomposition d = decompose(blocked, density, khat);
  const auto grad = christoffel_gradient(blocked, density, khat);
  const Vector3d ea = d.mode(a), eb = d.mode(b);
  Vector3d v;
  for (int m = 0; m < 3; ++m)
    v[m] = (ea.dot(grad[m] * ea) + eb.dot(grad[m] * eb)) /
           (2.0 * (d.speed[a] + d.speed[b]));
  return v;
}

Vector3d group_velocity(const ElasticityMatrix& mat, int alpha,
                        const Vector3d& k, double tol) {
  return group_velocity(to_blocked(mat), mat.density(), alpha, k, tol);
}

std::vector<Vector3d> latlong_directions(double step_deg) {
  if (!(step_deg > 0)) throw std::invalid_argument("grid step must be > 0");
  const int nth = static_cast<int>(std::round(180.0 / step_deg)) + 1;
  const int nph = static_cast<int>(std::round(360.0 / step_deg));
  std::vector<Vector3d> dirs;
  dirs.reserve(static_cast<std::size_t>(nth) * nph);
  for (int i = 0; i < nth; ++i) {
    const double th = kPi * i / (nth - 1);
    for (int j = 0; j < nph; ++j) {
      const double ph = 2 * kPi * j / nph;
      dirs.emplace_back(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                        std::cos(th));
    }
  }
  return dirs;
}

std::vector<VelocitySample> velocity_surface(const ElasticityMatrix& mat,
                                             const std::vector<Vector3d>& dirs,
                                             int threads) {
  const Matrix9d blocked = to_blocked(mat);
  std::vector<VelocitySample> out(dirs.size());
  parallel_for(dirs.size(), threads, [&](std::size_t i) {
    const ModeDecomposition d = decompose(blocked, mat.density(), dirs[i]);
    out[i] = {dirs[i], d.speed};
  });
  return out;
}

namespace {

//! Squared relative gap between the two slowest modes, as a function of a
//! 2-parameter chart around a base direction.
class GapObjective {
public:
  GapObjective(const Matrix9d& blocked, double density, const Vector3d& base)
      : blocked_(blocked), density_(density), base_(base) {
    std::tie(t1_, t2_) = transverse_basis(base);
  }

  Vector3d direction(double s, double t) const {
    return (base_ + s * t1_ + t * t2_).normalized();
  }

  double operator()(double s, double t) const {
    const ModeDecomposition d = decompose(blocked_, density_, direction(s, t));
    const double g = d.gap(0, 1);
    return g * g;
  }

private:
  const Matrix9d& blocked_;
  double density_;
  Vector3d base_;
  Vector3d t1_, t2_;
};

//! Plain Nelder-Mead on the chart; good enough for the conical gap minima.
std::array<double, 2> nelder_mead(const GapObjective& f, double scale,
                                  int max_iter) {
  struct Pt {
    double s, t, val;
  };
  std::array<Pt, 3> simplex{Pt{0, 0, f(0, 0)},
                            Pt{scale, 0, f(scale, 0)},
                            Pt{0, scale, f(0, scale)}};
  auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const Pt& a, const Pt& b) { return a.val < b.val; });
  };
  order();
  for (int it = 0; it < max_iter; ++it) {
    const Pt& best = simplex[0];
    const Pt& worst = simplex[2];
    const double cs = (simplex[0].s + simplex[1].s) / 2;
    const double ct = (simplex[0].t + simplex[1].t) / 2;
    const double spread = std::max(std::abs(simplex[1].s - best.s) +
                                       std::abs(simplex[1].t - best.t),
                                   std::abs(worst.s - best.s) +
                                       std::abs(worst.t - best.t));
    if (spread < 1e-12 || best.val < 1e-28) break;

    Pt refl{2 * cs - worst.s, 2 * ct - worst.t, 0};
    refl.val = f(refl.s, refl.t);
    if (refl.val < best.val) {
      Pt exp{3 * cs - 2 * worst.s, 3 * ct - 2 * worst.t, 0};
      exp.val = f(exp.s, exp.t);
      simplex[2] = (exp.val < refl.val) ? exp : refl;
    } else if (refl.val < simplex[1].val) {
      simplex[2] = refl;
    } else {
      Pt con{(cs + worst.s) / 2, (ct + worst.t) / 2, 0};
      con.val = f(con.s, con.t);
      if (con.val < worst.val) {
        simplex[2] = con;
      } else {
        for (int i = 1; i < 3; ++i) {
          simplex[i].s = (simplex[i].s + best.s) / 2;
          simplex[i].t = (simplex[i].t + best.t) / 2;
          simplex[i].val = f(simplex[i].s, simplex[i].t);
        }
      }
    }
    order();
  }
  return {simplex[0].s, simplex[0].t};
}

Vector3d canonical_axis(Vector3d v) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) > 1e-9) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return v;
}

double angular_distance(const Vector3d& a, const Vector3d& b) {
  const double c = std::min(1.0, std::abs(a.dot(b)));
  return std::acos(c);
}

}  // namespace

AxisScan detect_acoustic_axes(const ElasticityMatrix& mat, double seed_step_deg,
                              double tol) {
  const Matrix9d blocked = to_blocked(mat);
  const double density = mat.density();

  const int nth = static_cast<int>(std::round(180.0 / seed_step_deg)) + 1;
  const int nph = static_cast<int>(std::round(360.0 / seed_step_deg));
  Eigen::MatrixXd gap(nth, nph);
  std::vector<Vector3d> node(static_cast<std::size_t>(nth) * nph);
  for (int i = 0; i < nth; ++i) {
    const double th = kPi * i / (nth - 1);
    for (int j = 0; j < nph; ++j) {
      const double ph = 2 * kPi * j / nph;
      const Vector3d d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                       std::cos(th));
      node[static_cast<std::size_t>(i) * nph + j] = d;
      gap(i, j) = decompose(blocked, density, d).gap(0, 1);
    }
  }

  AxisScan scan;
  std::size_t tiny = 0;
  for (int i = 0; i < nth; ++i)
    for (int j = 0; j < nph; ++j)
      if (gap(i, j) < tol) ++tiny;
  if (tiny > node.size() / 2) {
    scan.degenerate_everywhere = true;
    return scan;
  }

  // non-strict local minima of the gap (ties kept, flat rows included)
  struct Seed {
    double val;
    int i, j;
  };
  std::vector<Seed> seeds;
  for (int i = 0; i < nth; ++i)
    for (int j = 0; j < nph; ++j) {
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di;
          if (ii < 0 || ii >= nth) continue;
          const int jj = (j + dj + nph) % nph;
          if (gap(ii, jj) < gap(i, j)) {
            is_min = false;
            break;
          }
        }
      if (is_min) seeds.push_back({gap(i, j), i, j});
    }
  std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
    return a.val < b.val || (a.val == b.val && std::tie(a.i, a.j) < std::tie(b.i, b.j));
  });
  if (seeds.size() > 400) seeds.resize(400);

  const double chart_scale = seed_step_deg * kPi / 180.0;
  for (const Seed& s : seeds) {
    const Vector3d base = node[static_cast<std::size_t>(s.i) * nph + s.j];
    GapObjective obj(blocked, density, base);
    const auto [ss, tt] = nelder_mead(obj, chart_scale, 300);
    const Vector3d dir = obj.direction(ss, tt);
    const double g = decompose(blocked, density, dir).gap(0, 1);
    if (g >= tol) continue;

    const Vector3d rep = canonical_axis(dir);
    bool merged = false;
    for (AcousticAxis& ax : scan.axes) {
      if (angular_distance(ax.direction, rep) < 1e-4) {
        if (g < ax.gap) {
          ax.direction = rep;
          ax.gap = g;
        }
        merged = true;
        break;
      }
    }
    if (!merged) scan.axes.push_back({rep, {0, 1}, g});
  }

  std::sort(scan.axes.begin(), scan.axes.end(),
            [](const AcousticAxis& a, const AcousticAxis& b) {
              return std::lexicographical_compare(
                  a.direction.data(), a.direction.data() + 3,
                  b.direction.data(), b.direction.data() + 3);
            });
  return scan;
}

}  // namespace kinel
