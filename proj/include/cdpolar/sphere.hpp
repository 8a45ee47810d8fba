#pragma once

/** \file
 * Hyperspherical parameterization of unit octonions used by the experiment
 * sweeps: seven angles mapped through the sine/cosine cascade
 *   x0 = cos psi1, x1 = sin psi1 cos psi2, ..., x7 = sin psi1 ... sin psi7.
 */

#include "cdpolar/cayley_dickson.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cdpolar {

/// Sampling angles: psi1..psi6 in [-pi/2, pi/2), psi7 in [-pi, pi).
/// Note cos psi1 >= 0 on this domain, so the map only reaches x0 >= 0; the
/// experiments use it as a sampling device, not as a chart of the sphere.
template <typename Scalar = double>
struct SphereAngles {
  Scalar psi1, psi2, psi3, psi4, psi5, psi6, psi7;

  std::array<Scalar, 7> as_array() const { return {psi1, psi2, psi3, psi4, psi5, psi6, psi7}; }
};

/// Raw cascade, defined for arbitrary real angles (no range check). The
/// result is a unit vector for any input.
template <typename Scalar>
Eigen::Matrix<Scalar, 8, 1> hypersphere_point(const std::array<Scalar, 7>& psi) {
  Eigen::Matrix<Scalar, 8, 1> x;
  Scalar sines = Scalar(1);
  for (int k = 0; k < 7; ++k) {
    x[k] = sines * std::cos(psi[k]);
    sines *= std::sin(psi[k]);
  }
  x[7] = sines;
  return x;
}

/// Range-checked map from SphereAngles to a unit octonion.
template <typename Scalar>
CdElement<Scalar> angles_to_unit8(const SphereAngles<Scalar>& a) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const auto psi = a.as_array();
  for (int k = 0; k < 6; ++k) {
    if (!(psi[k] >= -pi / 2 && psi[k] < pi / 2)) {
      throw std::invalid_argument("angles_to_unit8: psi1..psi6 must lie in [-pi/2, pi/2)");
    }
  }
  if (!(psi[6] >= -pi && psi[6] < pi)) {
    throw std::invalid_argument("angles_to_unit8: psi7 must lie in [-pi, pi)");
  }
  return CdElement<Scalar>(hypersphere_point(psi));
}

}  // namespace cdpolar
