#include "helpers.hpp"

#include <lievar/discrete.hpp>

#include <doctest.h>

using namespace lievar;
using namespace testutil;

namespace {

// Path sampled from the flow of g' = g (a + t b), integrated with many RKMK4
// substeps per node so the reference is accurate far beyond the tolerances
// used here.  xi(t) = a + t b solves the second-order variational equation
// xi''' = ad*_xi xi'' for l = 1/2 |xi'|^2, since xi'' = 0.
DiscretePath linear_rate_path(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                              const GroupElement& g0, double T, int nodes, int refine) {
  const auto spec = LieAlgebraSpec::so3();
  GroupRhs rhs = [&](double t, const GroupState&) {
    GroupStateDeriv d;
    d.g_dir = a + t * b;
    d.y_dot = Eigen::VectorXd();
    return d;
  };
  DiscretePath path;
  path.h = T / (nodes - 1);
  GroupState s;
  s.g = g0;
  s.y = Eigen::VectorXd();
  path.g.push_back(s.g);
  const double hs = path.h / refine;
  for (int n = 0; n + 1 < nodes; ++n) {
    for (int r = 0; r < refine; ++r) s = rkmk4_step(spec, rhs, n * path.h + r * hs, s, hs);
    path.g.push_back(s.g);
  }
  return path;
}

DiscretePath random_path(std::mt19937_64& rng, int nodes, double scale = 0.4) {
  DiscretePath p;
  p.h = 0.1;
  GroupElement g = random_rotation(rng);
  for (int n = 0; n < nodes; ++n) {
    p.g.push_back(g);
    g = g * group_exp(Eigen::Vector3d(random_vec3(rng, scale)));
  }
  return p;
}

}  // namespace

TEST_CASE("discrete EL residual is the left-trivialized action gradient") {
  const auto ld = log_gap_lagrangian();
  std::mt19937_64 rng(901);
  const int nodes = 12;
  std::uniform_int_distribution<int> pick(2, nodes - 3);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscretePath path = random_path(rng, nodes);
    const int k = pick(rng);
    const DualVector res = discrete_el_residual(path, ld, k);
    const double s = 1e-5;
    for (int i = 0; i < 3; ++i) {
      AlgebraVector e = AlgebraVector::Zero(3);
      e(i) = s;
      DiscretePath pp = path, pm = path;
      pp.g[k] = path.g[k] * group_exp(e);
      pm.g[k] = path.g[k] * group_exp(AlgebraVector(-e));
      const double grad = (discrete_action(pp, ld) - discrete_action(pm, ld)) / (2.0 * s);
      CHECK(std::abs(res(i) - grad) <= 1e-6);
    }
  }
}

TEST_CASE("discrete EL residual rejects non-interior nodes") {
  const auto ld = log_gap_lagrangian();
  std::mt19937_64 rng(902);
  const DiscretePath path = random_path(rng, 8);
  CHECK_THROWS_AS(discrete_el_residual(path, ld, 1), std::invalid_argument);
  CHECK_THROWS_AS(discrete_el_residual(path, ld, 6), std::invalid_argument);
  CHECK_NOTHROW(discrete_el_residual(path, ld, 2));
  CHECK_NOTHROW(discrete_el_residual(path, ld, 5));
}

TEST_CASE("discrete BVP solver drives the interior residuals to machine level") {
  const auto ld = log_gap_lagrangian();
  const Eigen::Vector3d a(0.3, -0.2, 0.4), b(0.15, 0.25, -0.1);
  const GroupElement g0 = group_exp(Eigen::Vector3d(0.1, 0.0, -0.2));
  DiscretePath guess = linear_rate_path(a, b, g0, 1.0, 25, 16);
  std::mt19937_64 rng(17);
  for (int k = 2; k + 2 < guess.size(); ++k)
    guess.g[k] = guess.g[k] * group_exp(Eigen::Vector3d(random_vec3(rng, 3e-2)));
  const auto sol = solve_discrete_bvp(guess, ld);
  REQUIRE(sol.converged);
  CHECK(sol.residual_norm <= 1e-10);
  for (int k = 2; k + 2 < sol.path.size(); ++k)
    CHECK(discrete_el_residual(sol.path, ld, k).lpNorm<Eigen::Infinity>() <= 1e-10);
  // clamped node pairs are untouched
  for (int k : {0, 1, sol.path.size() - 2, sol.path.size() - 1})
    CHECK((sol.path.g[k] - guess.g[k]).norm() == 0.0);
}

TEST_CASE("discrete BVP solution converges at second order to the smooth extremal") {
  const auto ld = log_gap_lagrangian();
  const Eigen::Vector3d a(0.3, -0.2, 0.4), b(0.15, 0.25, -0.1);
  const GroupElement g0 = group_exp(Eigen::Vector3d(0.1, 0.0, -0.2));
  const double T = 1.0;

  auto error_at = [&](int nodes) {
    const DiscretePath ref = linear_rate_path(a, b, g0, T, nodes, 64);
    DiscretePath guess = ref;
    std::mt19937_64 rng(23);
    for (int k = 2; k + 2 < guess.size(); ++k)
      guess.g[k] = guess.g[k] * group_exp(Eigen::Vector3d(random_vec3(rng, 1e-2)));
    const auto sol = solve_discrete_bvp(guess, ld);
    REQUIRE(sol.converged);
    double worst = 0.0;
    for (int k = 0; k < sol.path.size(); ++k)
      worst = std::max(
          worst, group_log(GroupElement(ref.g[k].transpose() * sol.path.g[k])).norm());
    return worst;
  };

  const double e16 = error_at(17);
  const double e32 = error_at(33);
  const double e64 = error_at(65);
  const double e128 = error_at(129);
  CHECK(std::log2(e16 / e32) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::log2(e32 / e64) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::log2(e64 / e128) == doctest::Approx(2.0).epsilon(0.15));
}
