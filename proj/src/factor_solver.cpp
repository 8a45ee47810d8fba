#include "cdpolar/factor_solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cdpolar {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_to_pi(double a) {
  a = std::fmod(a + kPi, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a - kPi;
}

Vector8d embed_quaternion(const Eigen::Vector4d& y) {
  Vector8d v = Vector8d::Zero();
  v.head<4>() = y;
  return v;
}

// cos(phi) I + sin(phi) M_axis: right-multiplication by e^{e_axis phi}.
Matrix8d rotation_matrix(int axis, double phi) {
  return std::cos(phi) * Matrix8d::Identity() + std::sin(phi) * right_mult_matrix(axis);
}

Matrix8d rotation_matrix_derivative(int axis, double phi) {
  return -std::sin(phi) * Matrix8d::Identity() + std::cos(phi) * right_mult_matrix(axis);
}

// The four planar (p, q) pairs rotated by right-multiplication with
// e^{e_axis phi}: q is the coordinate where e_p * e_axis lands with sign +1.
std::array<std::pair<int, int>, 4> rotation_pairs(int axis) {
  const Matrix8d& m = right_mult_matrix(axis);
  std::array<std::pair<int, int>, 4> pairs{};
  int found = 0;
  for (int p = 0; p < 8; ++p) {
    for (int q = 0; q < 8; ++q) {
      if (q != p && m(q, p) == 1.0) pairs[found++] = {p, q};
    }
  }
  return pairs;
}

Vector8d compose_coeffs(const Eigen::Vector4d& y, const Eigen::Vector4d& phi) {
  return forward_compose(y, phi).coeffs();
}

struct LocalFit {
  Vector8d v;  // (y0..y3, phi4..phi7)
  double residual_norm;
  int iterations;
};

// Damped Newton iteration on the square residual system, escalating into
// Levenberg-Marquardt regularization whenever a plain step fails to decrease
// the residual (the system is rank-deficient along the non-uniqueness
// manifold, so damping is needed near convergence).
LocalFit newton_lm(const Vector8d& start, const Vector8d& target, const SolverConfig& cfg) {
  Vector8d v = start;
  Vector8d f = compose_coeffs(v.head<4>(), v.tail<4>()) - target;
  double fnorm = f.norm();
  double lambda = cfg.lambda_init;

  int iter = 0;
  for (; iter < cfg.max_iter && fnorm > cfg.tol; ++iter) {
    const Matrix8d jac = forward_jacobian(v.head<4>(), v.tail<4>());
    bool accepted = false;
    for (int attempt = 0; attempt < 16; ++attempt) {
      Vector8d delta;
      if (lambda == 0.0) {
        delta = jac.colPivHouseholderQr().solve(-f);
      } else {
        Matrix8d normal = jac.transpose() * jac;
        normal.diagonal().array() += lambda;
        delta = normal.ldlt().solve(-(jac.transpose() * f));
      }
      if (delta.allFinite()) {
        const Vector8d v_trial = v + delta;
        const Vector8d f_trial = compose_coeffs(v_trial.head<4>(), v_trial.tail<4>()) - target;
        if (f_trial.norm() < fnorm) {
          v = v_trial;
          f = f_trial;
          fnorm = f_trial.norm();
          lambda = lambda <= 1e-12 ? 0.0 : lambda * cfg.lambda_shrink;
          accepted = true;
          break;
        }
      }
      lambda = std::max(lambda * cfg.lambda_grow, 1e-8);
    }
    if (!accepted) break;  // stalled
  }
  return {v, fnorm, iter};
}

FactorSolution to_solution(const LocalFit& fit, int start_index, double tol) {
  FactorSolution s;
  s.y = fit.v.head<4>();
  s.phi = fit.v.tail<4>().unaryExpr([](double a) { return wrap_to_pi(a); });
  s.residual_norm = fit.residual_norm;
  s.iterations = fit.iterations;
  s.start_index = start_index;
  s.converged = fit.residual_norm <= tol;
  return s;
}

FactorSolution solve_impl(const CdElement<double>& target, const SolverConfig& cfg,
                          const FactorSolution* warm_start) {
  if (target.dim() != 8) {
    throw std::invalid_argument("solve: target must be an octonion (dimension 8)");
  }
  if (std::abs(norm(target) - 1.0) > 1e-9) {
    throw std::invalid_argument("solve: target must be unit (carry the modulus separately)");
  }
  if (!(cfg.tol > 0.0) || cfg.n_starts < 1) {
    throw std::invalid_argument("solve: requires tol > 0 and n_starts >= 1");
  }
  const Vector8d target_vec = target.coeffs();

  std::mt19937_64 gen(cfg.rng_seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> angle(-kPi, kPi);

  const int total = cfg.n_starts + (warm_start != nullptr ? 1 : 0);
  FactorSolution best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  for (int index = 0; index < total; ++index) {
    Vector8d start;
    const int standard = warm_start != nullptr ? index - 1 : index;
    if (standard < 0) {
      start << warm_start->y, warm_start->phi;
    } else if (standard == 0) {
      start << 1, 0, 0, 0, 0, 0, 0, 0;
    } else {
      Eigen::Vector4d y;
      do {
        y << gauss(gen), gauss(gen), gauss(gen), gauss(gen);
      } while (y.norm() < 1e-12);
      start.head<4>() = y / y.norm();
      start.tail<4>() << angle(gen), angle(gen), angle(gen), angle(gen);
    }
    const FactorSolution sol = to_solution(newton_lm(start, target_vec, cfg), index, cfg.tol);
    if (sol.converged) return sol;
    if (sol.residual_norm < best.residual_norm) best = sol;
  }
  return best;
}

}  // namespace

const Matrix8d& right_mult_matrix(int axis) {
  static const std::array<Matrix8d, 8> tables = [] {
    std::array<Matrix8d, 8> t{};
    for (int k = 0; k < 8; ++k) {
      const CdElement<double> ek = CdElement<double>::unit(3, k);
      for (int j = 0; j < 8; ++j) {
        t[k].col(j) = cd_mul(CdElement<double>::unit(3, j), ek).coeffs();
      }
    }
    return t;
  }();
  if (axis < 1 || axis > 7) {
    throw std::invalid_argument("right_mult_matrix: axis must be in 1..7");
  }
  return tables[static_cast<std::size_t>(axis)];
}

CdElement<double> forward_compose(const Eigen::Vector4d& y, const Eigen::Vector4d& phi,
                                  const std::array<int, 4>& axis_order) {
  CdElement<double> acc{embed_quaternion(y)};
  for (int axis : axis_order) {
    if (axis < 4 || axis > 7) {
      throw std::invalid_argument("forward_compose: factor axes must be in 4..7");
    }
    const CdElement<double> factor =
        exp_closed(phi[axis - 4] * CdElement<double>::unit(3, axis));
    acc = cd_mul(acc, factor);
  }
  return acc;
}

Vector8d residual(const FactorSolution& s, const CdElement<double>& target) {
  if (target.dim() != 8) {
    throw std::invalid_argument("residual: target must be an octonion (dimension 8)");
  }
  return forward_compose(s.y, s.phi).coeffs() - target.coeffs();
}

StageValues stage_values(const FactorSolution& s) {
  const auto factor = [](int axis, double angle) {
    return exp_closed(angle * CdElement<double>::unit(3, axis));
  };
  StageValues out;
  const CdElement<double> c = cd_mul(CdElement<double>{embed_quaternion(s.y)}, factor(4, s.phi[0]));
  const CdElement<double> b = cd_mul(c, factor(5, s.phi[1]));
  const CdElement<double> a = cd_mul(b, factor(6, s.phi[2]));
  out.c = c.coeffs();
  out.b = b.coeffs();
  out.a = a.coeffs();
  return out;
}

double verify_stage_rotations(const FactorSolution& s, const CdElement<double>& target) {
  if (target.dim() != 8) {
    throw std::invalid_argument("verify_stage_rotations: target must be an octonion");
  }
  const StageValues st = stage_values(s);
  const Vector8d y8 = embed_quaternion(s.y);
  const Vector8d target_vec = target.coeffs();
  const struct {
    const Vector8d& before;
    const Vector8d& after;
    int axis;
    double angle;
  } stages[4] = {{y8, st.c, 4, s.phi[0]},
                 {st.c, st.b, 5, s.phi[1]},
                 {st.b, st.a, 6, s.phi[2]},
                 {st.a, target_vec, 7, s.phi[3]}};
  double worst = 0.0;
  for (const auto& stage : stages) {
    const std::complex<double> rot = std::polar(1.0, stage.angle);
    for (const auto& [p, q] : rotation_pairs(stage.axis)) {
      const std::complex<double> before(stage.before[p], stage.before[q]);
      const std::complex<double> after(stage.after[p], stage.after[q]);
      worst = std::max(worst, std::abs(after - before * rot));
    }
  }
  return worst;
}

Matrix8d forward_jacobian(const Eigen::Vector4d& y, const Eigen::Vector4d& phi) {
  const Matrix8d r4 = rotation_matrix(4, phi[0]);
  const Matrix8d r5 = rotation_matrix(5, phi[1]);
  const Matrix8d r6 = rotation_matrix(6, phi[2]);
  const Matrix8d r7 = rotation_matrix(7, phi[3]);

  const Vector8d v0 = embed_quaternion(y);
  const Vector8d v1 = r4 * v0;
  const Vector8d v2 = r5 * v1;
  const Vector8d v3 = r6 * v2;

  const Matrix8d s6 = r7 * r6;        // applied after the phi5 factor
  const Matrix8d s5 = s6 * r5;        // applied after the phi4 factor
  const Matrix8d full = s5 * r4;

  Matrix8d jac;
  jac.leftCols<4>() = full.leftCols<4>();
  jac.col(4) = s5 * (rotation_matrix_derivative(4, phi[0]) * v0);
  jac.col(5) = s6 * (rotation_matrix_derivative(5, phi[1]) * v1);
  jac.col(6) = r7 * (rotation_matrix_derivative(6, phi[2]) * v2);
  jac.col(7) = rotation_matrix_derivative(7, phi[3]) * v3;
  return jac;
}

Matrix8d forward_jacobian_fd(const Eigen::Vector4d& y, const Eigen::Vector4d& phi, double step) {
  Vector8d v;
  v << y, phi;
  const Vector8d base = compose_coeffs(y, phi);
  Matrix8d jac;
  for (int j = 0; j < 8; ++j) {
    Vector8d bumped = v;
    bumped[j] += step;
    jac.col(j) = (compose_coeffs(bumped.head<4>(), bumped.tail<4>()) - base) / step;
  }
  return jac;
}

FactorSolution solve(const CdElement<double>& target, const SolverConfig& cfg) {
  return solve_impl(target, cfg, nullptr);
}

FactorSolution solve(const CdElement<double>& target, const SolverConfig& cfg,
                     const FactorSolution& warm_start) {
  return solve_impl(target, cfg, &warm_start);
}

}  // namespace cdpolar
