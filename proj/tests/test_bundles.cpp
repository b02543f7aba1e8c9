#include "helpers.hpp"

#include <doctest.h>

using namespace lievar;
using testutil::random_vec3;

namespace {

PontryaginTangent random_tangent(std::mt19937_64& rng, int k) {
  PontryaginTangent t;
  for (int i = 0; i <= k; ++i) t.xi1.push_back(random_vec3(rng));
  for (int i = 0; i < k; ++i) t.nu1.push_back(random_vec3(rng));
  return t;
}

}  // namespace

TEST_CASE("canonical immersion splits base and fiber") {
  std::mt19937_64 rng(21);
  HigherJet jet;
  jet.g = testutil::random_rotation(rng);
  jet.xi = {random_vec3(rng), random_vec3(rng), random_vec3(rng)};
  const auto imm = canonical_immersion(jet);
  CHECK(imm.base.order() == 2);
  CHECK(imm.fiber.size() == 3);
  CHECK((imm.base.xi[0] - jet.xi[0]).norm() == 0.0);
  CHECK((imm.fiber[2] - jet.xi[2]).norm() == 0.0);
  HigherJet first_order;
  first_order.xi = {random_vec3(rng)};
  CHECK_THROWS_AS(canonical_immersion(first_order), std::invalid_argument);
}

TEST_CASE("presymplectic form: antisymmetry and the xi^(k) degeneracy directions") {
  const auto spec = LieAlgebraSpec::so3();
  std::mt19937_64 rng(22);
  for (int k = 1; k <= 3; ++k) {
    PontryaginPoint p;
    p.jet.g = testutil::random_rotation(rng);
    for (int i = 0; i < k; ++i) {
      p.jet.xi.push_back(random_vec3(rng));
      p.alpha.push_back(random_vec3(rng));
    }
    for (int s = 0; s < 50; ++s) {
      const auto t1 = random_tangent(rng, k), t2 = random_tangent(rng, k);
      const double w12 = presymplectic_form(spec, p, t1, t2);
      const double w21 = presymplectic_form(spec, p, t2, t1);
      CHECK(std::abs(w12 + w21) <= 1e-12 * std::max(1.0, std::abs(w12)));

      // a tangent supported only on the xi^(k) slot is in the kernel
      PontryaginTangent kern;
      kern.xi1.assign(k + 1, AlgebraVector::Zero(3));
      kern.nu1.assign(k, DualVector::Zero(3));
      kern.xi1[k] = random_vec3(rng);
      CHECK(std::abs(presymplectic_form(spec, p, kern, t1)) <= 1e-15);
    }
  }
}

TEST_CASE("presymplectic form closed formula on a hand value") {
  const auto spec = LieAlgebraSpec::so3();
  PontryaginPoint p;
  p.jet.xi = {AlgebraVector::Zero(3)};
  p.alpha = {DualVector(3)};
  p.alpha[0] << 1.0, 0.0, 0.0;  // alpha_0 = e^1
  PontryaginTangent t1, t2;
  t1.xi1 = {AlgebraVector(3), AlgebraVector::Zero(3)};
  t2.xi1 = {AlgebraVector(3), AlgebraVector::Zero(3)};
  t1.xi1[0] << 0.0, 1.0, 0.0;  // e2
  t2.xi1[0] << 0.0, 0.0, 1.0;  // e3
  t1.nu1 = {DualVector::Zero(3)};
  t2.nu1 = {DualVector::Zero(3)};
  // omega = <alpha_0, [e2, e3]> = <e^1, e1> = 1
  CHECK(presymplectic_form(spec, p, t1, t2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cotangent-side form agrees with the W0 form on matched tangents") {
  const auto spec = LieAlgebraSpec::so3();
  std::mt19937_64 rng(23);
  const int k = 2;
  PontryaginPoint p;
  p.jet.g = testutil::random_rotation(rng);
  p.jet.xi = {random_vec3(rng), random_vec3(rng)};
  p.alpha = {random_vec3(rng), random_vec3(rng)};
  for (int s = 0; s < 50; ++s) {
    const auto t1 = random_tangent(rng, k), t2 = random_tangent(rng, k);
    CotangentTangent c1{{t1.xi1[0], t1.xi1[1]}, {t1.nu1[0], t1.nu1[1]}};
    CotangentTangent c2{{t2.xi1[0], t2.xi1[1]}, {t2.nu1[0], t2.nu1[1]}};
    CHECK(presymplectic_form(spec, p, t1, t2) ==
          doctest::Approx(symplectic_form_cotangent(spec, p.alpha[0], c1, c2)).epsilon(1e-14));
  }
}

TEST_CASE("Hamiltonian H = sum <alpha_i, xi^(i)> - L") {
  std::mt19937_64 rng(24);
  const auto lag = testutil::quadratic_lagrangian(2, rng);
  PontryaginPoint p;
  p.jet.xi = {random_vec3(rng), random_vec3(rng)};
  p.alpha = {random_vec3(rng), random_vec3(rng)};
  const double expected =
      p.alpha[0].dot(p.jet.xi[0]) + p.alpha[1].dot(p.jet.xi[1]) - lag.eval(p.jet);
  CHECK(hamiltonian_H(p, lag) == doctest::Approx(expected).epsilon(1e-15));
  PontryaginPoint bad;
  bad.jet.xi = {random_vec3(rng)};
  CHECK_THROWS_AS(hamiltonian_H(bad, lag), std::invalid_argument);
}
