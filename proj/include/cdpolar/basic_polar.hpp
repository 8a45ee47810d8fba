#pragma once

/** \file
 * The basic trigonometric/exponential form o = |o| (cos theta + mu sin theta)
 * of a nonzero Cayley-Dickson element, and its inverse.
 */

#include "cdpolar/cayley_dickson.hpp"

#include <cmath>
#include <stdexcept>

namespace cdpolar {

/** Polar data of a nonzero element: modulus, a unit pure-imaginary axis and
 * the principal angle theta in [0, pi]. sin theta = |Im o|/|o| is never
 * negative, which pins theta to that half range. */
template <typename Scalar = double>
struct BasicPolar {
  Scalar modulus;
  CdElement<Scalar> axis;
  Scalar theta;
};

/** Decomposes a nonzero element. For a real input (zero imaginary part) the
 * axis is degenerate; e_1 is chosen, with theta = 0 or pi by the sign of the
 * real part. Throws std::domain_error on zero input. */
template <typename Scalar>
BasicPolar<Scalar> to_basic_polar(const CdElement<Scalar>& o) {
  const Scalar modulus = norm(o);
  if (modulus == Scalar(0)) {
    throw std::domain_error("to_basic_polar: polar form of zero is undefined");
  }
  if (o.dim() < 2) {
    throw std::invalid_argument("to_basic_polar: needs an algebra with imaginary units");
  }
  const CdElement<Scalar> im = imag_part(o);
  const Scalar im_norm = norm(im);
  const Scalar theta = std::atan2(im_norm, real_part(o));
  CdElement<Scalar> axis =
      im_norm > Scalar(0) ? im / im_norm : CdElement<Scalar>::unit(o.dim_log(), 1);
  return {modulus, std::move(axis), theta};
}

/// Rebuilds modulus * (cos theta + axis sin theta). Throws if the axis is not
/// unit pure imaginary.
template <typename Scalar>
CdElement<Scalar> from_basic_polar(const BasicPolar<Scalar>& p) {
  using std::abs;
  if (abs(norm(p.axis) - Scalar(1)) > Scalar(1e-12) || abs(real_part(p.axis)) > Scalar(1e-12)) {
    throw std::invalid_argument("from_basic_polar: axis must be unit and pure imaginary");
  }
  typename CdElement<Scalar>::VectorType v = p.axis.coeffs() * (p.modulus * std::sin(p.theta));
  v[0] += p.modulus * std::cos(p.theta);
  return CdElement<Scalar>(std::move(v));
}

}  // namespace cdpolar
