#include "cdpolar/quaternion_euler.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using cdpolar::CdElement;
using cdpolar::EulerTriple;
using namespace cdpolar::testing;

namespace {

// Independent check used alongside the round-trip oracle: a coarse grid over
// the angle box followed by coordinate-descent refinement. Slow but makes no
// use of the extraction formulas.
EulerTriple<double> grid_refine(const CdElement<double>& q) {
  const double ranges[3][2] = {{-kPi, kPi}, {-kPi / 2, kPi / 2}, {-kPi / 4, kPi / 4}};
  const auto objective = [&](const double* a) {
    return norm(euler_compose(EulerTriple<double>{a[0], a[1], a[2]}, 1.0) - q);
  };
  double best[3] = {0, 0, 0};
  double best_val = objective(best);
  const int steps[3] = {24, 12, 6};
  for (int i = 0; i < steps[0]; ++i)
    for (int j = 0; j < steps[1]; ++j)
      for (int k = 0; k < steps[2]; ++k) {
        const double cand[3] = {
            ranges[0][0] + (i + 0.5) * (ranges[0][1] - ranges[0][0]) / steps[0],
            ranges[1][0] + (j + 0.5) * (ranges[1][1] - ranges[1][0]) / steps[1],
            ranges[2][0] + (k + 0.5) * (ranges[2][1] - ranges[2][0]) / steps[2]};
        const double val = objective(cand);
        if (val < best_val) {
          best_val = val;
          best[0] = cand[0], best[1] = cand[1], best[2] = cand[2];
        }
      }
  double step = 0.2;
  for (int round = 0; round < 60; ++round) {
    bool improved = false;
    for (int axis = 0; axis < 3; ++axis) {
      for (double dir : {-1.0, 1.0}) {
        double cand[3] = {best[0], best[1], best[2]};
        cand[axis] = std::clamp(cand[axis] + dir * step, ranges[axis][0],
                                std::nextafter(ranges[axis][1], 0.0));
        const double val = objective(cand);
        if (val < best_val) {
          best_val = val;
          best[axis] = cand[axis];
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {best[0], best[1], best[2]};
}

}  // namespace

TEST_SUITE_BEGIN("quaternion_euler");

TEST_CASE("compose: single factors and identity") {
  CHECK(norm(euler_compose(EulerTriple<double>{0, 0, 0}, 1.0) - CdElement<double>::one(2)) == 0.0);

  const auto f = euler_compose(EulerTriple<double>{kPi / 3, 0, 0}, 1.0);
  CHECK(f[0] == doctest::Approx(std::cos(kPi / 3)).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(std::sin(kPi / 3)).epsilon(1e-15));

  const auto g = euler_compose(EulerTriple<double>{0, 0, kPi / 8}, 2.0);
  CHECK(g[0] == doctest::Approx(2 * std::cos(kPi / 8)).epsilon(1e-15));
  CHECK(g[2] == doctest::Approx(2 * std::sin(kPi / 8)).epsilon(1e-15));

  CHECK_THROWS_AS(euler_compose(EulerTriple<double>{kPi, 0, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(euler_compose(EulerTriple<double>{0, 0, kPi / 3}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(euler_compose(EulerTriple<double>{0, 0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("compose preserves the modulus") {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 1000; ++i) {
    const EulerTriple<double> t{uniform(gen, -kPi, kPi), uniform(gen, -kPi / 2, kPi / 2),
                                uniform(gen, -kPi / 4, kPi / 4)};
    const double modulus = std::pow(10.0, uniform(gen, -3, 3));
    CHECK(std::abs(norm(euler_compose(t, modulus)) - modulus) <= 1e-13 * modulus);
  }
}

TEST_CASE("decompose: canonical cases") {
  const auto t0 = euler_decompose(CdElement<double>::one(2));
  CHECK(t0.phi == 0.0);
  CHECK(t0.psi == 0.0);
  CHECK(t0.theta == 0.0);

  const auto q = exp_closed((kPi / 8) * CdElement<double>::unit(2, 2));
  const auto t1 = euler_decompose(q);
  CHECK(std::abs(t1.phi) < 1e-15);
  CHECK(std::abs(t1.psi) < 1e-15);
  CHECK(t1.theta == doctest::Approx(kPi / 8).epsilon(1e-14));

  CHECK_THROWS_AS(euler_decompose(CdElement<double>::zero(2)), std::domain_error);
  CHECK_THROWS_AS(euler_decompose(CdElement<double>::one(3)), std::invalid_argument);
}

TEST_CASE("round trip on random unit quaternions with canonical ranges") {
  std::mt19937_64 gen(32);
  for (int i = 0; i < 10000; ++i) {
    const auto q = random_unit(gen, 2);
    const auto t = euler_decompose(q);
    CHECK(t.phi >= -kPi);
    CHECK(t.phi < kPi);
    CHECK(t.psi >= -kPi / 2);
    CHECK(t.psi < kPi / 2);
    CHECK(t.theta >= -kPi / 4);
    CHECK(t.theta <= kPi / 4);
    CHECK(norm(euler_compose(t, norm(q)) - q) < 1e-10);
  }
}

TEST_CASE("round trip with non-unit modulus") {
  std::mt19937_64 gen(33);
  for (int i = 0; i < 500; ++i) {
    const auto q = CdElement<double>{gaussian_vector(gen, 4) * std::pow(10.0, uniform(gen, -2, 2))};
    if (norm(q) == 0.0) continue;
    const auto t = euler_decompose(q);
    CHECK(norm(euler_compose(t, norm(q)) - q) < 1e-10 * std::max(1.0, norm(q)));
  }
}

TEST_CASE("gimbal-adjacent stability") {
  std::mt19937_64 gen(34);
  for (int i = 0; i < 500; ++i) {
    // psi close to its range ends and theta at the closed endpoints
    const double eps = std::pow(10.0, uniform(gen, -12, -4));
    const EulerTriple<double> t{uniform(gen, -kPi, kPi),
                                (gen() % 2 ? 1.0 : -1.0) * (kPi / 2 - eps),
                                (gen() % 2 ? 1.0 : -1.0) * kPi / 4};
    const auto q = euler_compose(t, 1.0);
    const auto back = euler_decompose(q);
    CHECK(norm(euler_compose(back, 1.0) - q) < 1e-8);
  }
  for (int i = 0; i < 500; ++i) {
    // the singular set is |cos 2 psi| = 0, i.e. psi near +-pi/4
    const double eps = std::pow(10.0, uniform(gen, -13, -4));
    const EulerTriple<double> t{uniform(gen, -kPi, kPi), (gen() % 2 ? 1.0 : -1.0) * (kPi / 4 - eps),
                                uniform(gen, -kPi / 4, kPi / 4)};
    const auto q = euler_compose(t, 1.0);
    const auto back = euler_decompose(q);
    CHECK(norm(euler_compose(back, 1.0) - q) < 1e-8);
  }
}

TEST_CASE("independent grid+refine solver agrees") {
  std::mt19937_64 gen(35);
  for (int i = 0; i < 5; ++i) {
    const auto q = random_unit(gen, 2);
    const auto coarse = grid_refine(q);
    // the independent search finds a near-solution...
    CHECK(norm(euler_compose(coarse, 1.0) - q) < 1e-6);
    // ...and the closed-form extraction lands at least as close
    const auto exact = euler_decompose(q);
    CHECK(norm(euler_compose(exact, 1.0) - q) <= norm(euler_compose(coarse, 1.0) - q) + 1e-12);
  }
}

TEST_SUITE_END();
