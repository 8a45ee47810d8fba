#pragma once

/** \file
 * The hypothesized seven-angle polar decomposition of octonions via four
 * complex component signals u0..u3, implemented exactly as published so the
 * reconstruction error can be measured. The formulas only reproduce the
 * input in special cases; hs_error exposes the failure.
 */

#include "cdpolar/cayley_dickson.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace cdpolar {

/// The four complex components of an octonion and their arguments.
template <typename Scalar = double>
struct HsComponents {
  std::complex<Scalar> u0, u1, u2, u3;
  Scalar phi0, phi1, phi2, phi3;  // atan2 arguments of u0..u3, in [-pi, pi)
};

/// The seven decomposition angles psi1..psi7.
template <typename Scalar = double>
struct HsAngles {
  Scalar psi1, psi2, psi3, psi4, psi5, psi6, psi7;
};

/// Parenthesization of the seven-factor product (octonion multiplication is
/// non-associative). Left-to-right is the contract; the alternative exists to
/// show the reconstruction failure is not a grouping artifact.
enum class ProductGrouping { left_to_right, right_to_left };

namespace detail {

// std::arg lands in (-pi, pi]; the component arguments live in [-pi, pi).
template <typename Scalar>
Scalar arg_half_open(const std::complex<Scalar>& z) {
  const Scalar a = std::arg(z);
  return a >= std::numbers::pi_v<Scalar> ? -std::numbers::pi_v<Scalar> : a;
}

}  // namespace detail

/// The fixed signed linear map from octonion coordinates to u0..u3.
template <typename Scalar>
HsComponents<Scalar> hs_components(const CdElement<Scalar>& o) {
  if (o.dim() != 8) {
    throw std::invalid_argument("hs_components: expects an octonion (dimension 8)");
  }
  const auto& x = o.coeffs();
  HsComponents<Scalar> c;
  c.u0 = {x[0] - x[3] - x[5] - x[6], x[1] + x[2] + x[4] - x[7]};
  c.u1 = {x[0] + x[3] - x[5] + x[6], x[1] - x[2] + x[4] + x[7]};
  c.u2 = {x[0] - x[3] + x[5] + x[6], x[1] + x[2] - x[4] + x[7]};
  c.u3 = {x[0] + x[3] + x[5] - x[6], x[1] - x[2] - x[4] - x[7]};
  c.phi0 = detail::arg_half_open(c.u0);
  c.phi1 = detail::arg_half_open(c.u1);
  c.phi2 = detail::arg_half_open(c.u2);
  c.phi3 = detail::arg_half_open(c.u3);
  return c;
}

/** Angle formulas: psi1, psi2, psi4, psi5 are quarter-sums of the arguments;
 * psi3, psi6, psi7 are quarter-arcsines of modulus ratios (principal branch,
 * so 4 psi lands in [-pi/2, pi/2]). Throws std::domain_error when a ratio
 * denominator vanishes. */
template <typename Scalar>
HsAngles<Scalar> hs_angles(const HsComponents<Scalar>& c) {
  const Scalar m0 = std::norm(c.u0), m1 = std::norm(c.u1);
  const Scalar m2 = std::norm(c.u2), m3 = std::norm(c.u3);
  if (m0 + m1 == Scalar(0) || m2 + m3 == Scalar(0)) {
    throw std::domain_error("hs_angles: degenerate input, a modulus-ratio denominator vanishes");
  }
  HsAngles<Scalar> a;
  a.psi1 = (c.phi0 + c.phi1 + c.phi2 + c.phi3) / 4;
  a.psi2 = (c.phi0 + c.phi1 - c.phi2 - c.phi3) / 4;
  a.psi4 = (c.phi0 - c.phi1 + c.phi2 - c.phi3) / 4;
  a.psi5 = (c.phi0 - c.phi1 - c.phi2 + c.phi3) / 4;
  a.psi3 = std::asin((m0 - m1) / (m0 + m1)) / 4;
  a.psi6 = std::asin((m2 - m3) / (m2 + m3)) / 4;
  a.psi7 = std::asin((m0 + m1 - m2 - m3) / (m0 + m1 + m2 + m3)) / 4;
  return a;
}

/** The seven-factor product
 *   modulus * e^{e1 psi1} e^{e3 psi3} e^{e2 psi2} e^{e7 psi7} e^{e4 psi4} e^{e6 psi6} e^{e5 psi5},
 * grouped left-to-right unless asked otherwise. Each factor is a unit, so the
 * result always has norm equal to modulus. */
template <typename Scalar>
CdElement<Scalar> hs_reconstruct(Scalar modulus, const HsAngles<Scalar>& a,
                                 ProductGrouping grouping = ProductGrouping::left_to_right) {
  const std::pair<Eigen::Index, Scalar> factors[7] = {
      {1, a.psi1}, {3, a.psi3}, {2, a.psi2}, {7, a.psi7}, {4, a.psi4}, {6, a.psi6}, {5, a.psi5}};
  const auto factor = [](const std::pair<Eigen::Index, Scalar>& f) {
    return exp_closed(f.second * CdElement<Scalar>::unit(3, f.first));
  };
  CdElement<Scalar> acc;
  if (grouping == ProductGrouping::left_to_right) {
    acc = factor(factors[0]);
    for (int i = 1; i < 7; ++i) acc = cd_mul(acc, factor(factors[i]));
  } else {
    acc = factor(factors[6]);
    for (int i = 5; i >= 0; --i) acc = cd_mul(factor(factors[i]), acc);
  }
  return modulus * acc;
}

/// Euclidean distance between o and its seven-angle reconstruction.
template <typename Scalar>
Scalar hs_error(const CdElement<Scalar>& o) {
  if (norm(o) == Scalar(0)) {
    throw std::domain_error("hs_error: undefined for zero input");
  }
  const HsAngles<Scalar> a = hs_angles(hs_components(o));
  return norm(hs_reconstruct(norm(o), a) - o);
}

}  // namespace cdpolar
