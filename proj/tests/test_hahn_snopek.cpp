#include "cdpolar/hahn_snopek.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using cdpolar::CdElement;
using cdpolar::HsAngles;
using cdpolar::ProductGrouping;
using namespace cdpolar::testing;

namespace {

CdElement<double> unit8(Eigen::Index k) { return CdElement<double>::unit(3, k); }

// The signed linear map as an 8x8 real matrix (rows: Re u0, Im u0, ..., Im u3),
// applied to the standard basis. This is the sign pattern the formulas print.
constexpr int kComponentSigns[8][8] = {
    // x0  x1  x2  x3  x4  x5  x6  x7
    {1, 0, 0, -1, 0, -1, -1, 0},   // Re u0
    {0, 1, 1, 0, 1, 0, 0, -1},     // Im u0
    {1, 0, 0, 1, 0, -1, 1, 0},     // Re u1
    {0, 1, -1, 0, 1, 0, 0, 1},     // Im u1
    {1, 0, 0, -1, 0, 1, 1, 0},     // Re u2
    {0, 1, 1, 0, -1, 0, 0, 1},     // Im u2
    {1, 0, 0, 1, 0, 1, -1, 0},     // Re u3
    {0, 1, -1, 0, -1, 0, 0, -1},   // Im u3
};

}  // namespace

TEST_SUITE_BEGIN("hahn_snopek");

TEST_CASE("component map on canonical inputs") {
  const auto c1 = hs_components(CdElement<double>::one(3));
  CHECK(c1.u0 == std::complex<double>(1, 0));
  CHECK(c1.u1 == std::complex<double>(1, 0));
  CHECK(c1.u2 == std::complex<double>(1, 0));
  CHECK(c1.u3 == std::complex<double>(1, 0));

  const auto c7 = hs_components(unit8(7));
  CHECK(c7.u0 == std::complex<double>(0, -1));
  CHECK(c7.u1 == std::complex<double>(0, 1));
  CHECK(c7.u2 == std::complex<double>(0, 1));
  CHECK(c7.u3 == std::complex<double>(0, -1));

  const double s = 1.0 / std::sqrt(2.0);
  const auto ch = hs_components(CdElement<double>({s, s, 0, 0, 0, 0, 0, 0}));
  for (const auto& u : {ch.u0, ch.u1, ch.u2, ch.u3}) {
    CHECK(std::abs(u - std::complex<double>(s, s)) < 1e-15);
  }

  CHECK_THROWS_AS(hs_components(CdElement<double>::one(2)), std::invalid_argument);
}

TEST_CASE("component arguments stay in [-pi, pi)") {
  // u_k = -1 puts std::arg on its +pi boundary; the half-open convention
  // flips it to -pi, and the all-real family still reconstructs exactly.
  const auto c = hs_components(CdElement<double>::from_real(-1.0, 3));
  for (double phi : {c.phi0, c.phi1, c.phi2, c.phi3}) {
    CHECK(phi == -kPi);
  }
  CHECK(cdpolar::hs_error(CdElement<double>::from_real(-1.0, 3)) < 1e-12);

  std::mt19937_64 gen(44);
  for (int i = 0; i < 200; ++i) {
    const auto comp = hs_components(random_unit(gen, 3));
    for (double phi : {comp.phi0, comp.phi1, comp.phi2, comp.phi3}) {
      CHECK(phi >= -kPi);
      CHECK(phi < kPi);
    }
  }
}

TEST_CASE("component map is the printed signed linear pattern") {
  for (int j = 0; j < 8; ++j) {
    const auto c = hs_components(unit8(j));
    const double actual[8] = {c.u0.real(), c.u0.imag(), c.u1.real(), c.u1.imag(),
                              c.u2.real(), c.u2.imag(), c.u3.real(), c.u3.imag()};
    for (int r = 0; r < 8; ++r) {
      CHECK(actual[r] == double(kComponentSigns[r][j]));
    }
  }
}

TEST_CASE("angle formulas on canonical inputs") {
  // all u_k = 1: zero arguments and equal moduli
  const auto a1 = hs_angles(hs_components(CdElement<double>::one(3)));
  for (double psi : {a1.psi1, a1.psi2, a1.psi3, a1.psi4, a1.psi5, a1.psi6, a1.psi7}) {
    CHECK(psi == 0.0);
  }

  // all u_k = (1+i)/sqrt(2): quarter-sum gives psi1 = pi/4, arcsines vanish
  const double s = 1.0 / std::sqrt(2.0);
  const auto a2 = hs_angles(hs_components(CdElement<double>({s, s, 0, 0, 0, 0, 0, 0})));
  CHECK(a2.psi1 == doctest::Approx(kPi / 4).epsilon(1e-15));
  for (double psi : {a2.psi2, a2.psi3, a2.psi4, a2.psi5, a2.psi6, a2.psi7}) {
    CHECK(std::abs(psi) < 1e-15);
  }

  // |u0| = 1, |u1| = 0: sin(4 psi3) = 1, principal branch gives psi3 = pi/8
  cdpolar::HsComponents<double> c{};
  c.u0 = {1, 0};
  c.u1 = {0, 0};
  c.u2 = {1, 0};
  c.u3 = {1, 0};
  const auto a3 = hs_angles(c);
  CHECK(a3.psi3 == doctest::Approx(kPi / 8).epsilon(1e-15));

  // degenerate: |u0| = |u1| = 0
  c.u0 = {0, 0};
  CHECK_THROWS_AS(hs_angles(c), std::domain_error);
}

TEST_CASE("reconstruction basics") {
  const HsAngles<double> zero{};
  CHECK(norm(hs_reconstruct(1.0, zero) - CdElement<double>::one(3)) == 0.0);

  HsAngles<double> only1{};
  only1.psi1 = kPi / 4;
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(norm(hs_reconstruct(1.0, only1) - CdElement<double>({s, s, 0, 0, 0, 0, 0, 0})) < 1e-15);
}

TEST_CASE("reconstruction always returns norm = modulus") {
  std::mt19937_64 gen(41);
  for (int i = 0; i < 1000; ++i) {
    HsAngles<double> a{uniform(gen, -kPi, kPi), uniform(gen, -kPi, kPi), uniform(gen, -kPi, kPi),
                       uniform(gen, -kPi, kPi), uniform(gen, -kPi, kPi), uniform(gen, -kPi, kPi),
                       uniform(gen, -kPi, kPi)};
    const double modulus = std::pow(10.0, uniform(gen, -3, 3));
    CHECK(std::abs(norm(hs_reconstruct(modulus, a)) - modulus) <= 1e-12 * std::max(1.0, modulus));
    CHECK(std::abs(norm(hs_reconstruct(modulus, a, ProductGrouping::right_to_left)) - modulus) <=
          1e-12 * std::max(1.0, modulus));
  }
}

TEST_CASE("special family reconstructs exactly") {
  CHECK(cdpolar::hs_error(CdElement<double>::one(3)) == 0.0);

  std::mt19937_64 gen(42);
  for (int i = 0; i < 200; ++i) {
    const double psi1 = uniform(gen, -3.1, 3.1);
    const double modulus = std::pow(10.0, uniform(gen, -2, 2));
    const auto o = modulus * exp_closed(psi1 * CdElement<double>::unit(3, 1));
    CHECK(cdpolar::hs_error(o) <= 1e-10 * std::max(1.0, modulus));
  }

  const double s = 1.0 / std::sqrt(2.0);
  CHECK(cdpolar::hs_error(CdElement<double>({s, s, 0, 0, 0, 0, 0, 0})) < 1e-12);
}

TEST_CASE("the decomposition fails for generic octonions") {
  std::mt19937_64 gen(43);
  double worst = 0.0;
  int above_tenth = 0;
  for (int i = 0; i < 500; ++i) {
    const auto o = random_unit(gen, 3);
    const double err = cdpolar::hs_error(o);
    worst = std::max(worst, err);
    if (err > 0.1) ++above_tenth;
  }
  CHECK(worst > 0.5);        // the negative result
  CHECK(above_tenth > 250);  // and it is typical, not an outlier

  // not a parenthesization artifact: the alternative grouping fails too
  double worst_rl = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto o = random_unit(gen, 3);
    const auto a = hs_angles(hs_components(o));
    worst_rl = std::max(worst_rl, norm(hs_reconstruct(1.0, a, ProductGrouping::right_to_left) - o));
  }
  CHECK(worst_rl > 0.5);
}

TEST_CASE("hs_error rejects zero input") {
  CHECK_THROWS_AS(cdpolar::hs_error(CdElement<double>::zero(3)), std::domain_error);
}

TEST_SUITE_END();
