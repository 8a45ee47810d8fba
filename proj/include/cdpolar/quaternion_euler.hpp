#pragma once

/** \file
 * Three-factor polar decomposition of nonzero quaternions,
 *   q = |q| e^{e1 phi} e^{e3 psi} e^{e2 theta},
 * with canonical angle ranges phi in [-pi, pi), psi in [-pi/2, pi/2) and
 * theta in [-pi/4, pi/4]. The doubled angles (2 phi, 2 psi, 2 theta) are the
 * Euler angles of the rotation the unit quaternion induces.
 */

#include "cdpolar/cayley_dickson.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace cdpolar {

template <typename Scalar = double>
struct EulerTriple {
  Scalar phi;    // [-pi, pi)
  Scalar psi;    // [-pi/2, pi/2)
  Scalar theta;  // [-pi/4, pi/4], closed at both ends
};

namespace detail {

template <typename Scalar>
inline Scalar wrap_to_pi(Scalar a) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  a = std::fmod(a + pi, Scalar(2) * pi);
  if (a < Scalar(0)) a += Scalar(2) * pi;
  return a - pi;
}

template <typename Scalar>
inline bool euler_ranges_ok(const EulerTriple<Scalar>& t) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  return t.phi >= -pi && t.phi < pi && t.psi >= -pi / 2 && t.psi < pi / 2 &&
         t.theta >= -pi / 4 && t.theta <= pi / 4;
}

}  // namespace detail

/// Left-to-right product of the three exponential factors, scaled by modulus.
/// Throws on out-of-range angles or non-positive modulus.
template <typename Scalar>
CdElement<Scalar> euler_compose(const EulerTriple<Scalar>& t, Scalar modulus) {
  if (!(modulus > Scalar(0))) {
    throw std::invalid_argument("euler_compose: modulus must be positive");
  }
  if (!detail::euler_ranges_ok(t)) {
    throw std::invalid_argument("euler_compose: angle out of canonical range");
  }
  const auto factor = [](Eigen::Index axis, Scalar angle) {
    return exp_closed(angle * CdElement<Scalar>::unit(2, axis));
  };
  return modulus * cd_mul(cd_mul(factor(1, t.phi), factor(3, t.psi)), factor(2, t.theta));
}

/** Recovers the canonical angle triple of a nonzero quaternion.
 *
 * Writing q/|q| = z1 + z2 e2 with z1 = q0 + q1 e1 and z2 = q2 + q3 e1, the
 * composed product satisfies
 *   sin 2psi            = 2 (q0 q3 - q1 q2)
 *   cos 2psi sin 2theta = 2 (q0 q2 + q1 q3)
 *   cos 2psi cos 2theta = q0^2 + q1^2 - q2^2 - q3^2.
 * theta in [-pi/4, pi/4] forces cos 2theta >= 0, so the sign of the third
 * invariant is the sign of cos 2psi; psi and theta follow by atan2, and phi
 * is the argument offset of whichever of z1, z2 is better conditioned.
 *
 * Where |cos 2psi| vanishes the factorization is non-unique (theta folds into
 * phi); the tie-break sets theta = 0 there. Throws std::domain_error on zero
 * input. */
template <typename Scalar>
EulerTriple<Scalar> euler_decompose(const CdElement<Scalar>& q) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (q.dim() != 4) {
    throw std::invalid_argument("euler_decompose: expects a quaternion (dimension 4)");
  }
  const Scalar n = norm(q);
  if (n == Scalar(0)) {
    throw std::domain_error("euler_decompose: zero quaternion");
  }
  const Scalar q0 = q[0] / n, q1 = q[1] / n, q2 = q[2] / n, q3 = q[3] / n;

  const Scalar s = Scalar(2) * (q0 * q3 - q1 * q2);           // sin 2psi
  const Scalar p = Scalar(2) * (q0 * q2 + q1 * q3);           // cos 2psi sin 2theta
  const Scalar c = q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3;     // cos 2psi cos 2theta
  const Scalar r = std::hypot(p, c);                          // |cos 2psi|

  Scalar psi, theta;
  if (r < Scalar(1e-9)) {
    // Gimbal line: theta is undetermined, fold it into phi.
    theta = Scalar(0);
    psi = s >= Scalar(0) ? pi / 4 : -pi / 4;
  } else {
    const Scalar sign_c = c >= Scalar(0) ? Scalar(1) : Scalar(-1);
    Scalar two_psi = std::atan2(s, sign_c * r);
    if (two_psi >= pi) two_psi = -pi;  // psi range is half-open at +pi/2
    psi = two_psi / 2;
    theta = std::atan2(sign_c * p, std::abs(c)) / 2;
  }

  const Scalar cp = std::cos(psi), sp = std::sin(psi);
  const Scalar ct = std::cos(theta), st = std::sin(theta);
  const std::complex<Scalar> w1(cp * ct, -sp * st);
  const std::complex<Scalar> w2(cp * st, sp * ct);
  const std::complex<Scalar> z1(q0, q1), z2(q2, q3);
  const Scalar phi = std::abs(w1) >= std::abs(w2) ? std::arg(z1) - std::arg(w1)
                                                  : std::arg(z2) - std::arg(w2);
  return {detail::wrap_to_pi(phi), psi, theta};
}

}  // namespace cdpolar
