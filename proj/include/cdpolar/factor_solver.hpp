#pragma once

/** \file
 * Factorization of a unit octonion into a unit quaternion followed by four
 * single-axis exponential factors,
 *   o = q * e^{e4 phi4} * e^{e5 phi5} * e^{e6 phi6} * e^{e7 phi7},
 * multiplied left to right. Right-multiplication by each factor is a chain of
 * four planar (Givens) rotations of the coefficient vector, which yields an
 * analytic Jacobian; the angles themselves are found numerically by a
 * multi-start damped Newton / Levenberg-Marquardt iteration, since the
 * factorization admits no known closed form and is not unique.
 */

#include "cdpolar/cayley_dickson.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>

namespace cdpolar {

using Vector8d = Eigen::Matrix<double, 8, 1>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;

/// One factorization candidate plus solver diagnostics. For a converged
/// solution on a unit target, y is a unit quaternion (the unit exponential
/// factors force |q| = |o|).
struct FactorSolution {
  Eigen::Vector4d y = Eigen::Vector4d::Zero();    // quaternion coefficients y0..y3
  Eigen::Vector4d phi = Eigen::Vector4d::Zero();  // phi[k] is the angle on axis e_{4+k}
  double residual_norm = 0.0;
  int iterations = 0;
  int start_index = 0;
  bool converged = false;
};

/// Intermediate coefficient vectors after one, two and three of the four
/// exponential factors. Each stage is an isometry of the embedded quaternion.
struct StageValues {
  Vector8d c = Vector8d::Zero();  // q * e^{e4 phi4}
  Vector8d b = Vector8d::Zero();  // (q * e^{e4 phi4}) * e^{e5 phi5}
  Vector8d a = Vector8d::Zero();  // ((q * e^{e4 phi4}) * e^{e5 phi5}) * e^{e6 phi6}
};

struct SolverConfig {
  double tol = 1e-10;   // residual norm for convergence
  int max_iter = 200;   // Newton/LM iterations per start
  int n_starts = 20;    // multi-start attempts
  double lambda_init = 0.0;    // initial damping; 0 starts with pure Newton steps
  double lambda_grow = 10.0;   // damping escalation on a rejected step
  double lambda_shrink = 0.1;  // damping decay on an accepted step
  std::uint64_t rng_seed = 0;  // seeds the random starts
};

inline constexpr std::array<int, 4> kDefaultAxisOrder{4, 5, 6, 7};

/// 8x8 matrix of right-multiplication by e_axis on octonion coefficients,
/// generated from the doubling product (axis in 1..7).
const Matrix8d& right_mult_matrix(int axis);

/** Left-to-right product (((q f_a) f_b) f_c) f_d with f_k = e^{e_k phi_k},
 * computed through the doubling product. phi is indexed by axis (phi[k] goes
 * with e_{4+k}) regardless of the factor order; the non-default order exists
 * because the same construction can be repeated with the factors permuted. */
CdElement<double> forward_compose(const Eigen::Vector4d& y, const Eigen::Vector4d& phi,
                                  const std::array<int, 4>& axis_order = kDefaultAxisOrder);

/// Coefficients of forward_compose(s) - target.
Vector8d residual(const FactorSolution& s, const CdElement<double>& target);

/// The c/b/a cascade of s (default factor order).
StageValues stage_values(const FactorSolution& s);

/** Consistency check for a solution with small residual (<= 1e-6) on target:
 * at every stage, each of the four planar pairs of the next coefficient
 * vector must equal the corresponding pair of the previous stage rotated by
 * that stage's angle. Returns the maximum deviation across all pairs; the
 * pairings are derived from the multiplication table, not hard-coded. */
double verify_stage_rotations(const FactorSolution& s, const CdElement<double>& target);

/// Analytic Jacobian of forward_compose with respect to (y0..y3, phi4..phi7),
/// built from the planar-rotation chain.
Matrix8d forward_jacobian(const Eigen::Vector4d& y, const Eigen::Vector4d& phi);

/// Forward-difference Jacobian (cross-check for the analytic one).
Matrix8d forward_jacobian_fd(const Eigen::Vector4d& y, const Eigen::Vector4d& phi,
                             double step = 1e-7);

/** Solves forward_compose(y, phi) = target for a unit target (norm within
 * 1e-9 of 1; callers carry the modulus separately).
 *
 * Start 0 is y = (1,0,0,0), phi = 0; the remaining starts draw a random unit
 * quaternion and uniform angles from the seeded generator. The first start
 * that converges is returned with its index; if none converges the best
 * residual found is returned with converged = false. Returned angles are
 * reduced into [-pi, pi). Beyond that no canonical branch exists and none is
 * imposed. */
FactorSolution solve(const CdElement<double>& target, const SolverConfig& cfg = {});

/// As solve(), but tries warm_start first (as start index 0) before falling
/// back to the standard start sequence.
FactorSolution solve(const CdElement<double>& target, const SolverConfig& cfg,
                     const FactorSolution& warm_start);

}  // namespace cdpolar
