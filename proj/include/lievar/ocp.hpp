#pragma once

// Underactuated optimal control on a Lie group: controlled Euler-Poincare
// residuals, the equivalent second-order vakonomic problem, elimination of
// the unactuated accelerations, the assembled first-order ODE system for the
// extremals, and a shooting solver for the rigid-body scenario.

#include "integrate.hpp"

#include <memory>
#include <random>

namespace lievar {

struct UnderactuatedSystem {
  LieAlgebraSpec algebra;
  LagrangianDef base;  // first-order L(g, y)
  std::vector<int> actuated;
  std::vector<int> unactuated;
  // Running cost C(g, y, u); u is indexed over the actuated slots.
  std::function<double(const GroupElement&, const AlgebraVector&, const Eigen::VectorXd&)> cost;
  double t0 = 0.0, tf = 1.0;
  GroupElement g0 = GroupElement::Identity(), gf = GroupElement::Identity();
  AlgebraVector y0, yf;

  void check() const {
    std::vector<bool> seen(algebra.dim, false);
    for (int i : actuated) seen.at(i) = true;
    for (int i : unactuated) {
      if (seen.at(i)) throw std::invalid_argument("UnderactuatedSystem: index sets overlap");
      seen[i] = true;
    }
    for (bool s : seen)
      if (!s) throw std::invalid_argument("UnderactuatedSystem: index sets do not cover the basis");
  }
};

/// Left side of the forced Euler-Poincare equation at a point (g, y, ydot):
/// d/dt(dL/dy) - ad*_y(dL/dy) - trivialized dL/dg, with the time derivative
/// taken along the motion (g moves with y, y moves with ydot).
inline DualVector forced_equation_lhs(const UnderactuatedSystem& sys, const HigherJet& jet2,
                                      double eps = 1e-3) {
  if (jet2.order() < 2) throw std::invalid_argument("forced_equation_lhs: need (g, y, ydot)");
  auto momentum_at = [&](double s) {
    HigherJet j1;
    j1.g = jet2.g * group_exp(AlgebraVector(s * jet2.xi[0]));
    j1.xi = {jet2.xi[0] + s * jet2.xi[1]};
    return sys.base.partial_xi(j1, 0);
  };
  // Richardson-extrapolated central difference: O(eps^4) truncation with an
  // O(u/eps) roundoff floor, so a mild step keeps the noise near 1e-13.  The
  // downstream vakonomic machinery differentiates through this value again,
  // which makes a low noise floor essential.
  auto central = [&](double h) {
    return DualVector((momentum_at(h) - momentum_at(-h)) / (2.0 * h));
  };
  const DualVector dmu = (4.0 * central(0.5 * eps) - central(eps)) / 3.0;
  const HigherJet j1(jet2.g, {jet2.xi[0]});
  const DualVector mu = sys.base.partial_xi(j1, 0);
  return dmu - sys.algebra.ad_star(jet2.xi[0], mu) - sys.base.group_partial(j1);
}

/// Per-node residual of the controlled equations along a curve of order-2
/// jets; u rows are indexed over actuated slots and the unactuated components
/// carry no control.
inline std::vector<DualVector> controlled_residual(const UnderactuatedSystem& sys,
                                                   const SampledCurve& curve,
                                                   const std::vector<Eigen::VectorXd>& u) {
  if (u.size() != curve.nodes.size())
    throw std::invalid_argument("controlled_residual: control grid size mismatch");
  std::vector<DualVector> out;
  out.reserve(curve.nodes.size());
  for (int n = 0; n < curve.size(); ++n) {
    DualVector r = forced_equation_lhs(sys, curve.nodes[n]);
    for (size_t a = 0; a < sys.actuated.size(); ++a) r(sys.actuated[a]) -= u[n](a);
    out.push_back(std::move(r));
  }
  return out;
}

struct VakonomicProblem {
  std::shared_ptr<const UnderactuatedSystem> sys;
  LagrangianDef lagrangian;   // order 2: L~(g, y, ydot) = C(g, y, u_a-expressions)
  ConstraintDef constraints;  // Phi^A = unactuated left sides
  // Set by eliminate_unactuated: ydot^A = G^A(g, y, ydot^a); takes an order-2
  // jet whose unactuated ydot slots are ignored.
  std::function<Eigen::VectorXd(const HigherJet&)> g_elim;
};

inline VakonomicProblem to_vakonomic(const UnderactuatedSystem& sys_in) {
  sys_in.check();
  VakonomicProblem vak;
  vak.sys = std::make_shared<UnderactuatedSystem>(sys_in);
  auto sys = vak.sys;
  vak.lagrangian.order = 2;
  vak.lagrangian.eval = [sys](const HigherJet& jet) {
    const DualVector lhs = forced_equation_lhs(*sys, jet);
    Eigen::VectorXd u(sys->actuated.size());
    for (size_t a = 0; a < sys->actuated.size(); ++a) u(a) = lhs(sys->actuated[a]);
    return sys->cost(jet.g, jet.xi[0], u);
  };
  vak.constraints.order = 2;
  vak.constraints.count = static_cast<int>(sys->unactuated.size());
  vak.constraints.eval = [sys](const HigherJet& jet, int a) {
    return forced_equation_lhs(*sys, jet)(sys->unactuated.at(a));
  };
  return vak;
}

/// Solves Phi^A(g, y, ydot^a, ydot^A) = 0 for the unactuated ydot^A.  The
/// constraints of a mechanical system are affine in ydot with matrix
/// W_AB = d^2L/dy^A dy^B, so one linear solve suffices; a Newton refinement
/// guards the general case.  Fails if W_AB is ill-conditioned at the probe.
inline void eliminate_unactuated(VakonomicProblem& vak, const HigherJet& probe) {
  auto sys = vak.sys;
  const int na = static_cast<int>(sys->unactuated.size());
  auto wab_at = [sys, na](const HigherJet& jet) {
    Eigen::MatrixXd w(na, na);
    const double h = 1e-6;
    for (int b = 0; b < na; ++b) {
      HigherJet p = jet;
      const int slot = sys->unactuated[b];
      p.xi[1](slot) = jet.xi[1](slot) + h;
      const DualVector fp = forced_equation_lhs(*sys, p);
      p.xi[1](slot) = jet.xi[1](slot) - h;
      const DualVector fm = forced_equation_lhs(*sys, p);
      for (int a = 0; a < na; ++a) w(a, b) = (fp(sys->unactuated[a]) - fm(sys->unactuated[a])) / (2.0 * h);
    }
    return w;
  };
  {
    const Eigen::MatrixXd w = wab_at(probe);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(w);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) >= 1e8)
      throw std::runtime_error(
          "eliminate_unactuated: unactuated mass block W_AB = d2L/dy^A dy^B is singular at the probe");
  }
  vak.g_elim = [sys, na, wab_at](const HigherJet& jet) {
    HigherJet work = jet.truncated(2);
    Eigen::VectorXd g(na);
    for (int pass = 0; pass < 3; ++pass) {
      DualVector lhs = forced_equation_lhs(*sys, work);
      Eigen::VectorXd phi(na);
      for (int a = 0; a < na; ++a) phi(a) = lhs(sys->unactuated[a]);
      if (phi.lpNorm<Eigen::Infinity>() < 1e-13) break;
      const Eigen::VectorXd delta = wab_at(work).fullPivLu().solve(-phi);
      for (int b = 0; b < na; ++b) work.xi[1](sys->unactuated[b]) += delta(b);
    }
    for (int b = 0; b < na; ++b) g(b) = work.xi[1](sys->unactuated[b]);
    return g;
  };
}

struct SingularOcpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Assembled extremal system
//
// First-order form of the vakonomic extremal equations with state
// (g, y, ydot^a, p, ptilde_A), flattened into GroupState.y as
// [y (d) | ydot^a (n_a) | p (d) | ptilde_A (n_A)].  The driving scalar is
//   K(g, y, ydot^a; ptilde) = L~(g, y, ydot_full) - sum_B ptilde_B G^B,
// with ydot^A = G^A substituted.  Equations:
//   dg/dt      = g y,   dy^a/dt = ydot^a,   dy^A/dt = G^A,
//   dp/dt      = trivialized dK/dg + ad*_y p,
//   dptilde_A  = -p_A + dK/dy^A,
//   M_ab yddot^b = -p_a + dK/dy^a - (rate of dK/dydot^a along the known motion),
// where M_ab = d2K/dydot^a dydot^b.

struct AssembledState {
  GroupElement g = GroupElement::Identity();
  AlgebraVector y;
  Eigen::VectorXd ydot_a;
  DualVector p;
  Eigen::VectorXd ptilde;
};

inline GroupState pack_assembled(const AssembledState& s, int d, int na, int nA) {
  GroupState out;
  out.g = s.g;
  out.y.resize(2 * d + na + nA);
  out.y.segment(0, d) = s.y;
  out.y.segment(d, na) = s.ydot_a;
  out.y.segment(d + na, d) = s.p;
  out.y.segment(2 * d + na, nA) = s.ptilde;
  return out;
}

inline AssembledState unpack_assembled(const GroupState& gs, int d, int na, int nA) {
  AssembledState s;
  s.g = gs.g;
  s.y = gs.y.segment(0, d);
  s.ydot_a = gs.y.segment(d, na);
  s.p = gs.y.segment(d + na, d);
  s.ptilde = gs.y.segment(2 * d + na, nA);
  return s;
}

/// Generic assembled right-hand side built from the vakonomic data by finite
/// differences on K.  For production solves prefer an analytic specialization
/// (see rigid_body_assembled_rhs); this one backs the cross-checks.
inline GroupRhs assembled_ode_rhs(const VakonomicProblem& vak) {
  if (!vak.g_elim) throw std::invalid_argument("assembled_ode_rhs: run eliminate_unactuated first");
  auto sys = vak.sys;
  auto lag = std::make_shared<LagrangianDef>(vak.lagrangian);
  auto elim = vak.g_elim;
  const int d = sys->algebra.dim;
  const int na = static_cast<int>(sys->actuated.size());
  const int nA = static_cast<int>(sys->unactuated.size());
  auto actuated = sys->actuated;
  auto unactuated = sys->unactuated;

  // K as a function of the independent variables.
  auto kval = [sys, lag, elim, actuated, unactuated, d, na, nA](
                  const GroupElement& g, const AlgebraVector& y, const Eigen::VectorXd& ydot_a,
                  const Eigen::VectorXd& ptilde) {
    HigherJet jet;
    jet.g = g;
    jet.xi = {y, AlgebraVector::Zero(d)};
    for (int a = 0; a < na; ++a) jet.xi[1](actuated[a]) = ydot_a(a);
    const Eigen::VectorXd gb = elim(jet);
    for (int b = 0; b < nA; ++b) jet.xi[1](unactuated[b]) = gb(b);
    return lag->eval(jet) - ptilde.dot(gb);
  };

  return [sys, elim, kval, actuated, unactuated, d, na, nA](double, const GroupState& gs) {
    const AssembledState s = unpack_assembled(gs, d, na, nA);
    HigherJet jet;
    jet.g = s.g;
    jet.xi = {s.y, AlgebraVector::Zero(d)};
    for (int a = 0; a < na; ++a) jet.xi[1](actuated[a]) = s.ydot_a(a);
    const Eigen::VectorXd gb = elim(jet);
    Eigen::VectorXd ydot_full = jet.xi[1];
    for (int b = 0; b < nA; ++b) ydot_full(unactuated[b]) = gb(b);

    // Step sizes sit well above kval's ~1e-12 noise floor (set by the
    // extrapolated difference inside forced_equation_lhs); second differences
    // divide that floor by the step product, so 1e-3 keeps them near 1e-6.
    const double eps = 1e-5;
    auto k_of_y = [&](const AlgebraVector& y) { return kval(s.g, y, s.ydot_a, s.ptilde); };
    DualVector dk_dy(d);
    for (int i = 0; i < d; ++i) {
      AlgebraVector yp = s.y, ym = s.y;
      yp(i) += eps;
      ym(i) -= eps;
      dk_dy(i) = (k_of_y(yp) - k_of_y(ym)) / (2.0 * eps);
    }
    const DualVector dk_dg = left_trivialized_group_derivative(
        [&](const GroupElement& g) { return kval(g, s.y, s.ydot_a, s.ptilde); }, s.g);

    // M_ab = d2K/dydot^a dydot^b by four-point second differences.
    const double hs = 1e-3;
    Eigen::MatrixXd m(na, na);
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < na; ++b) {
        auto kk = [&](double da, double db) {
          Eigen::VectorXd u = s.ydot_a;
          u(a) += da;
          u(b) += db;
          return kval(s.g, s.y, u, s.ptilde);
        };
        m(a, b) = (kk(hs, hs) - kk(hs, -hs) - kk(-hs, hs) + kk(-hs, -hs)) / (4.0 * hs * hs);
      }
    if (numerical_rank(m) < na)
      throw SingularOcpError("assembled_ode_rhs: singular OCP (Theorem 2 degenerate)");

    // Rate of phi_a = dK/dydot^a along the known motion (g with y, y with
    // ydot_full, ydot^a frozen): one mixed four-point stencil on K instead of
    // nested first differences, which would stack the noise amplification.
    const double hd = 1e-3;
    auto k_along = [&](int a, double da, double ss) {
      const GroupElement g = s.g * group_exp(AlgebraVector(ss * s.y));
      const AlgebraVector y = s.y + ss * ydot_full;
      Eigen::VectorXd u = s.ydot_a;
      u(a) += da;
      return kval(g, y, u, s.ptilde);
    };
    Eigen::VectorXd b_rate(na);
    for (int a = 0; a < na; ++a)
      b_rate(a) = (k_along(a, hd, hd) - k_along(a, hd, -hd) - k_along(a, -hd, hd) +
                   k_along(a, -hd, -hd)) /
                  (4.0 * hd * hd);

    Eigen::VectorXd rhs_a(na);
    for (int a = 0; a < na; ++a) rhs_a(a) = -s.p(actuated[a]) + dk_dy(actuated[a]) - b_rate(a);
    const Eigen::VectorXd yddot_a = m.fullPivLu().solve(rhs_a);

    AssembledState ds;
    ds.y = ydot_full;
    ds.ydot_a = yddot_a;
    ds.p = dk_dg + sys->algebra.ad_star(s.y, s.p);
    ds.ptilde.resize(nA);
    for (int b = 0; b < nA; ++b) ds.ptilde(b) = -s.p(unactuated[b]) + dk_dy(unactuated[b]);
    GroupStateDeriv out;
    out.g_dir = s.y;
    GroupState packed = pack_assembled(ds, d, na, nA);
    out.y_dot = std::move(packed.y);
    return out;
  };
}

// ---------------------------------------------------------------------------
// Rigid body on SO(3), actuated about the first two axes

struct RigidBodyScenario {
  Eigen::Vector3d inertia = Eigen::Vector3d::Ones();
  double c1 = 0.5, c2 = 0.5;
  GroupElement r0 = GroupElement::Identity();
  GroupElement rf = GroupElement::Identity();
  Eigen::Vector3d omega0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d omegaf = Eigen::Vector3d::Zero();
  double t0 = 0.0, tf = 4.0;
};

/// Reduced rigid body L(Omega) = 1/2 Omega . I Omega with torques about the
/// first two axes and running cost c1 |u|^2 + c2 |Omega|^2.
inline UnderactuatedSystem rigid_body_system(const Eigen::Vector3d& inertia, double c1, double c2) {
  UnderactuatedSystem sys;
  sys.algebra = LieAlgebraSpec::so3();
  sys.base.order = 1;
  sys.base.eval = [inertia](const HigherJet& jet) {
    return 0.5 * jet.xi[0].dot(Eigen::VectorXd(inertia.asDiagonal() * jet.xi[0]));
  };
  sys.base.d_xi = [inertia](const HigherJet& jet, int) {
    return DualVector(inertia.asDiagonal() * jet.xi[0]);
  };
  sys.base.d_group = [](const HigherJet&) { return DualVector::Zero(3); };
  sys.actuated = {0, 1};
  sys.unactuated = {2};
  sys.cost = [c1, c2](const GroupElement&, const AlgebraVector& y, const Eigen::VectorXd& u) {
    return c1 * u.squaredNorm() + c2 * y.squaredNorm();
  };
  return sys;
}

/// u_a = I_a ydot_a - (I_next - I_prev) y_next y_prev for a = 1, 2.
inline Eigen::Vector2d rigid_body_controls(const Eigen::Vector3d& I, const Eigen::Vector3d& y,
                                           const Eigen::Vector2d& ydot_a) {
  return {I(0) * ydot_a(0) - (I(1) - I(2)) * y(1) * y(2),
          I(1) * ydot_a(1) - (I(2) - I(0)) * y(2) * y(0)};
}

/// Vakonomic Lagrangian of the rigid-body scenario with analytic partials:
/// L~(y, ydot) = c1 (u1^2 + u2^2) + c2 |y|^2 with the u_a substituted.
/// Matches to_vakonomic(rigid_body_system(...)).lagrangian but avoids its
/// internal finite differences, so curve-level differentiation stays clean.
inline LagrangianDef rigid_body_vakonomic_lagrangian(const Eigen::Vector3d& I, double c1,
                                                     double c2) {
  LagrangianDef lag;
  lag.order = 2;
  lag.eval = [I, c1, c2](const HigherJet& jet) {
    const Eigen::Vector2d u =
        rigid_body_controls(I, jet.xi[0], Eigen::Vector2d(jet.xi[1].head<2>()));
    return c1 * u.squaredNorm() + c2 * jet.xi[0].squaredNorm();
  };
  lag.d_xi = [I, c1, c2](const HigherJet& jet, int slot) {
    const Eigen::Vector3d y = jet.xi[0];
    const Eigen::Vector2d u = rigid_body_controls(I, y, Eigen::Vector2d(jet.xi[1].head<2>()));
    DualVector d(3);
    if (slot == 1) {
      d << 2.0 * c1 * I(0) * u(0), 2.0 * c1 * I(1) * u(1), 0.0;
    } else {
      d(0) = -2.0 * c1 * u(1) * (I(2) - I(0)) * y(2) + 2.0 * c2 * y(0);
      d(1) = -2.0 * c1 * u(0) * (I(1) - I(2)) * y(2) + 2.0 * c2 * y(1);
      d(2) = -2.0 * c1 * (u(0) * (I(1) - I(2)) * y(1) + u(1) * (I(2) - I(0)) * y(0)) +
             2.0 * c2 * y(2);
    }
    return d;
  };
  lag.d_group = [](const HigherJet&) { return DualVector::Zero(3); };
  return lag;
}

/// The matching constraint Phi = I3 ydot_3 - (I1 - I2) y1 y2, analytic.
inline ConstraintDef rigid_body_vakonomic_constraint(const Eigen::Vector3d& I) {
  ConstraintDef con;
  con.order = 2;
  con.count = 1;
  con.eval = [I](const HigherJet& jet, int) {
    return I(2) * jet.xi[1](2) - (I(0) - I(1)) * jet.xi[0](0) * jet.xi[0](1);
  };
  con.d_xi = [I](const HigherJet& jet, int, int slot) {
    DualVector d = DualVector::Zero(3);
    if (slot == 1) {
      d(2) = I(2);
    } else {
      d(0) = -(I(0) - I(1)) * jet.xi[0](1);
      d(1) = -(I(0) - I(1)) * jet.xi[0](0);
    }
    return d;
  };
  con.d_group = [](const HigherJet&, int) { return DualVector::Zero(3); };
  return con;
}

/// Analytic assembled right-hand side for the rigid-body scenario; same state
/// layout as assembled_ode_rhs with d = 3, n_a = 2, n_A = 1.
inline GroupRhs rigid_body_assembled_rhs(const Eigen::Vector3d& I, double c1, double c2) {
  if (c1 <= 0.0)
    throw SingularOcpError("rigid_body_assembled_rhs: singular OCP (Theorem 2 degenerate): c1 = 0");
  return [I, c1, c2](double, const GroupState& gs) {
    const AssembledState s = unpack_assembled(gs, 3, 2, 1);
    const Eigen::Vector3d y = s.y;
    const Eigen::Vector2d u = rigid_body_controls(I, y, Eigen::Vector2d(s.ydot_a));
    const double g3 = ((I(0) - I(1)) / I(2)) * y(0) * y(1);
    const double pt3 = s.ptilde(0);

    DualVector dk_dy(3);
    dk_dy(0) = -2.0 * c1 * u(1) * (I(2) - I(0)) * y(2) + 2.0 * c2 * y(0) -
               pt3 * ((I(0) - I(1)) / I(2)) * y(1);
    dk_dy(1) = -2.0 * c1 * u(0) * (I(1) - I(2)) * y(2) + 2.0 * c2 * y(1) -
               pt3 * ((I(0) - I(1)) / I(2)) * y(0);
    dk_dy(2) = -2.0 * c1 * (u(0) * (I(1) - I(2)) * y(1) + u(1) * (I(2) - I(0)) * y(0)) +
               2.0 * c2 * y(2);

    // phi_a = 2 c1 I_a u_a; its rate along the known motion (ydot_a frozen).
    const Eigen::Vector3d ydot_full(s.ydot_a(0), s.ydot_a(1), g3);
    Eigen::Vector2d b_rate;
    b_rate(0) = -2.0 * c1 * I(0) * (I(1) - I(2)) * (ydot_full(1) * y(2) + y(1) * ydot_full(2));
    b_rate(1) = -2.0 * c1 * I(1) * (I(2) - I(0)) * (ydot_full(2) * y(0) + y(2) * ydot_full(0));

    AssembledState ds;
    ds.y = ydot_full;
    ds.ydot_a.resize(2);
    for (int a = 0; a < 2; ++a)
      ds.ydot_a(a) = (-s.p(a) + dk_dy(a) - b_rate(a)) / (2.0 * c1 * I(a) * I(a));
    ds.p = s.p.head<3>().cross(y);  // ad*_y p; K has no group dependence
    ds.ptilde.resize(1);
    ds.ptilde(0) = -s.p(2) + dk_dy(2);

    GroupStateDeriv out;
    out.g_dir = s.y;
    out.y_dot = pack_assembled(ds, 3, 2, 1).y;
    return out;
  };
}

struct OcpNode {
  double t = 0.0;
  GroupElement g = GroupElement::Identity();
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();
  Eigen::Vector3d omega_dot = Eigen::Vector3d::Zero();
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  double ptilde3 = 0.0;
};

struct OcpSolution {
  std::vector<OcpNode> nodes;
  double cost = 0.0;
  ShootResult shooting;
  Eigen::VectorXd unknowns;  // converged shooting vector
};

/// Single shooting for the rigid-body extremal boundary value problem.
/// Unknowns: ydot^a(0) and p(0); ptilde_3(0) is gauge-fixed to zero when
/// I1 = I2 (a constant shift of ptilde_3 does not change the motion there)
/// and added as a sixth unknown against Omega_3(t_f) otherwise.  Terminal
/// residuals: Omega_a(t_f) and log(R(t_f)^T R_f).  Starts from the zero
/// guess with seeded random restarts on failure.
inline OcpSolution solve_ocp(const RigidBodyScenario& sc, int nsteps, std::uint64_t seed = 0,
                             int max_restarts = 10) {
  if (sc.c1 <= 0.0)
    throw SingularOcpError(
        "solve_ocp: singular OCP (Theorem 2 degenerate): c1 = 0 admits no regular shooting; "
        "arbitrary velocity boundary data may be infeasible in the singular system");
  const auto spec = LieAlgebraSpec::so3();
  const GroupRhs rhs = rigid_body_assembled_rhs(sc.inertia, sc.c1, sc.c2);
  const bool symmetric = std::abs(sc.inertia(0) - sc.inertia(1)) < 1e-14;
  const int nu = symmetric ? 5 : 6;
  const double h = (sc.tf - sc.t0) / nsteps;

  auto initial_state = [&](const Eigen::VectorXd& x) {
    AssembledState s;
    s.g = sc.r0;
    s.y = sc.omega0;
    s.ydot_a = x.segment(0, 2);
    s.p = x.segment(2, 3);
    s.ptilde.resize(1);
    s.ptilde(0) = symmetric ? 0.0 : x(5);
    return pack_assembled(s, 3, 2, 1);
  };
  auto residual = [&](const Eigen::VectorXd& x) {
    const auto traj = flow_ode(spec, rhs, sc.t0, initial_state(x), h, nsteps);
    const AssembledState end = unpack_assembled(traj.back(), 3, 2, 1);
    Eigen::VectorXd r(nu);
    r(0) = end.y(0) - sc.omegaf(0);
    r(1) = end.y(1) - sc.omegaf(1);
    r.segment(2, 3) = group_log(GroupElement(end.g.transpose() * sc.rf));
    if (!symmetric) r(5) = end.y(2) - sc.omegaf(2);
    return r;
  };

  ShootResult best;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(nu);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.5);
  for (int attempt = 0; attempt <= max_restarts; ++attempt) {
    ShootResult res;
    try {
      res = shoot(residual, x0, 1e-9, 80);
    } catch (const FlowError&) {
      res.converged = false;
      res.residual_norm = std::numeric_limits<double>::infinity();
    }
    if (attempt == 0 || res.residual_norm < best.residual_norm) best = res;
    if (best.converged) break;
    for (int i = 0; i < nu; ++i) x0(i) = gauss(rng);
  }
  if (!best.converged)
    throw std::runtime_error("solve_ocp: shooting failed to converge (residual " +
                             std::to_string(best.residual_norm) + ")");

  OcpSolution sol;
  sol.shooting = best;
  sol.unknowns = best.solution;
  const auto traj = flow_ode(spec, rhs, sc.t0, initial_state(best.solution), h, nsteps);
  sol.nodes.reserve(traj.size());
  double prev_c = 0.0;
  for (int n = 0; n < static_cast<int>(traj.size()); ++n) {
    const AssembledState s = unpack_assembled(traj[n], 3, 2, 1);
    OcpNode node;
    node.t = sc.t0 + n * h;
    node.g = s.g;
    node.omega = s.y;
    node.u = rigid_body_controls(sc.inertia, node.omega, Eigen::Vector2d(s.ydot_a));
    node.omega_dot = Eigen::Vector3d(s.ydot_a(0), s.ydot_a(1),
                                     ((sc.inertia(0) - sc.inertia(1)) / sc.inertia(2)) *
                                         node.omega(0) * node.omega(1));
    node.ptilde3 = s.ptilde(0);
    const double c = sc.c1 * node.u.squaredNorm() + sc.c2 * node.omega.squaredNorm();
    if (n > 0) sol.cost += 0.5 * h * (prev_c + c);
    prev_c = c;
    sol.nodes.push_back(node);
  }
  return sol;
}

/// The reduced singular system for c1 = 0 (reported, never solved): residuals
/// of  Omega_2 ptilde_3' - 2 c2 Omega_1' = 0,  -Omega_1 ptilde_3' - 2 c2
/// Omega_2' = 0,  ptilde_3'' - 2 c2 Omega_3' = 0,  Omega_3' = 0  for I = 1.
struct SingularSystemReport {
  std::string description =
      "singular OCP (c1 = 0): Omega_2 dptilde3/dt - 2 c2 dOmega_1/dt = 0; "
      "-Omega_1 dptilde3/dt - 2 c2 dOmega_2/dt = 0; d2ptilde3/dt2 - 2 c2 dOmega_3/dt = 0; "
      "dOmega_3/dt = 0. Arbitrary velocity boundary data may be infeasible.";
  bool degenerate = true;
  int hessian_rank = 0;
};

inline SingularSystemReport report_singular_ocp(const RigidBodyScenario& sc) {
  SingularSystemReport rep;
  auto vak = to_vakonomic(rigid_body_system(sc.inertia, sc.c1, sc.c2));
  HigherJet probe;
  probe.xi = {AlgebraVector::Zero(3), AlgebraVector::Zero(3)};
  probe.xi[0] << 0.3, -0.2, 0.5;
  probe.xi[1] << 0.1, 0.4, -0.3;
  const auto reg = constrained_regularity_test(vak.lagrangian, vak.constraints, probe);
  rep.degenerate = !reg.nondegenerate;
  rep.hessian_rank = reg.rank;
  return rep;
}

}  // namespace lievar
