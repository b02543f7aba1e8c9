#pragma once

// Time integration: a Munthe-Kaas RK4 step for systems on G x R^m, flows for
// ordinary right-hand sides and for the index-reduced Pontryagin DAE, and a
// damped-Newton shooting solver.

#include "variational.hpp"

#include <Eigen/LU>

#include <cstdio>
#include <string>

namespace lievar {

struct GroupState {
  GroupElement g = GroupElement::Identity();
  Eigen::VectorXd y;  // flat vector part, may be empty
};

struct GroupStateDeriv {
  AlgebraVector g_dir;  // dg/dt = g * hat(g_dir)
  Eigen::VectorXd y_dot;
};

using GroupRhs = std::function<GroupStateDeriv(double, const GroupState&)>;

/// Truncated dexp^{-1}_u(v) = v - [u,v]/2 + [u,[u,v]]/12; exact through
/// order 3 in u, which suffices for a fourth-order step (u = O(h)).
inline AlgebraVector dexpinv(const LieAlgebraSpec& spec, const AlgebraVector& u,
                             const AlgebraVector& v) {
  const AlgebraVector uv = spec.bracket(u, v);
  return v - 0.5 * uv + (1.0 / 12.0) * spec.bracket(u, uv);
}

/// One step of left reconstruction: g exp(h xi).
inline GroupElement reconstruct_step(const GroupElement& g, const AlgebraVector& xi, double h) {
  return g * group_exp(AlgebraVector(h * xi));
}

/// Classical-tableau Munthe-Kaas RK4 on G x R^m.
inline GroupState rkmk4_step(const LieAlgebraSpec& spec, const GroupRhs& rhs, double t,
                             const GroupState& s, double h) {
  const double c[4] = {0.0, 0.5, 0.5, 1.0};
  const double b[4] = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
  AlgebraVector k[4];   // dexpinv-corrected algebra slopes
  Eigen::VectorXd ky[4];
  AlgebraVector u = AlgebraVector::Zero(spec.dim);
  for (int i = 0; i < 4; ++i) {
    if (i > 0) u = (h * c[i]) * k[i - 1];  // a_{i,i-1} = c_i for this tableau
    GroupState stage;
    stage.g = s.g * group_exp(u);
    stage.y = s.y + ((i > 0) ? Eigen::VectorXd((h * c[i]) * ky[i - 1])
                             : Eigen::VectorXd(Eigen::VectorXd::Zero(s.y.size())));
    const GroupStateDeriv f = rhs(t + c[i] * h, stage);
    // left trivialization g exp(u): u' = dexpinv_{-u}(f)
    k[i] = dexpinv(spec, AlgebraVector(-u), f.g_dir);
    ky[i] = f.y_dot;
  }
  AlgebraVector uf = AlgebraVector::Zero(spec.dim);
  Eigen::VectorXd yf = s.y;
  for (int i = 0; i < 4; ++i) {
    uf += (h * b[i]) * k[i];
    yf += (h * b[i]) * ky[i];
  }
  GroupState out;
  out.g = s.g * group_exp(uf);
  out.y = std::move(yf);
  return out;
}

struct FlowError : std::runtime_error {
  double last_good_time;
  FlowError(const std::string& what, double t)
      : std::runtime_error(what + " (last good time t=" + std::to_string(t) + ")"),
        last_good_time(t) {}
};

/// Fixed-step flow; returns the nsteps+1 states including the initial one.
/// Throws FlowError as soon as a state stops being finite.
inline std::vector<GroupState> flow_ode(const LieAlgebraSpec& spec, const GroupRhs& rhs,
                                        double t0, const GroupState& s0, double h, int nsteps) {
  std::vector<GroupState> traj;
  traj.reserve(nsteps + 1);
  traj.push_back(s0);
  for (int n = 0; n < nsteps; ++n) {
    GroupState next = rkmk4_step(spec, rhs, t0 + n * h, traj.back(), h);
    if (!next.g.allFinite() || !next.y.allFinite())
      throw FlowError("flow_ode: state became non-finite", t0 + n * h);
    traj.push_back(std::move(next));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Index-reduced flow on the first constraint submanifold W1

namespace detail {

// d/dt of dL/dxi^(k-1) along the known part of the motion: the group moves
// with xi^(0), slot i moves with xi^(i+1) for i < k-1, and the top slot is
// frozen (its contribution is the Hessian times the unknown xi^(k)).
inline DualVector top_partial_known_rate(const LagrangianDef& lag, const HigherJet& jet,
                                         double eps = 1e-6) {
  const int k = lag.order;
  auto shifted = [&](double s) {
    HigherJet probe = jet;
    probe.g = jet.g * group_exp(AlgebraVector(s * jet.xi[0]));
    for (int i = 0; i + 1 < k; ++i) probe.xi[i] = jet.xi[i] + s * jet.xi[i + 1];
    return lag.partial_xi(probe, k - 1);
  };
  return (shifted(eps) - shifted(-eps)) / (2.0 * eps);
}

}  // namespace detail

struct DaeFlowResult {
  std::vector<PontryaginPoint> points;
  double max_constraint_drift = 0.0;
  int reprojections = 0;
};

/// Flow of the Pontryagin DAE restricted to W1 = {alpha_{k-1} = dL/dxi^(k-1)},
/// with xi^(k) recovered from the top-slot Hessian (index reduction).  The
/// constraint is monitored each step and alpha_{k-1} is re-projected when the
/// drift exceeds `drift_tol`.
inline DaeFlowResult flow_dae_W1(const LieAlgebraSpec& spec, const LagrangianDef& lag,
                                 const PontryaginPoint& p0, double t0, double h, int nsteps,
                                 double drift_tol = 1e-6) {
  p0.check();
  const int k = p0.order();
  const int d = spec.dim;

  auto pack = [&](const PontryaginPoint& p) {
    GroupState s;
    s.g = p.jet.g;
    s.y.resize(2 * k * d);
    for (int i = 0; i < k; ++i) s.y.segment(i * d, d) = p.jet.xi[i];
    for (int i = 0; i < k; ++i) s.y.segment((k + i) * d, d) = p.alpha[i];
    return s;
  };
  auto unpack = [&](const GroupState& s) {
    PontryaginPoint p;
    p.jet.g = s.g;
    p.jet.xi.resize(k);
    p.alpha.resize(k);
    for (int i = 0; i < k; ++i) p.jet.xi[i] = s.y.segment(i * d, d);
    for (int i = 0; i < k; ++i) p.alpha[i] = s.y.segment((k + i) * d, d);
    return p;
  };

  GroupRhs rhs = [&](double, const GroupState& s) {
    const PontryaginPoint p = unpack(s);
    GroupStateDeriv out;
    out.g_dir = p.jet.xi[0];
    out.y_dot.resize(2 * k * d);
    for (int i = 0; i + 1 < k; ++i) out.y_dot.segment(i * d, d) = p.jet.xi[i + 1];
    // momentum equations
    Eigen::VectorXd alpha_dot(k * d);
    alpha_dot.segment(0, d) =
        lag.group_partial(p.jet) + spec.ad_star(p.jet.xi[0], p.alpha[0]);
    for (int i = 0; i + 1 < k; ++i)
      alpha_dot.segment((i + 1) * d, d) = lag.partial_xi(p.jet, i) - p.alpha[i];
    out.y_dot.segment(k * d, k * d) = alpha_dot;
    // top slot: Hess * xi^(k) = d/dt alpha_{k-1} - (known rate of dL/dxi_top)
    const Eigen::MatrixXd hess = top_slot_hessian(lag, p.jet);
    if (numerical_rank(hess) < d)
      throw std::runtime_error(
          "flow_dae_W1: top-slot Hessian is degenerate, unresolved by the first "
          "constraint step");
    const DualVector target = alpha_dot.segment((k - 1) * d, d) -
                              detail::top_partial_known_rate(lag, p.jet);
    out.y_dot.segment((k - 1) * d, d) = hess.fullPivLu().solve(target);
    return out;
  };

  DaeFlowResult result;
  result.points.reserve(nsteps + 1);
  result.points.push_back(p0);
  GroupState s = pack(p0);
  for (int n = 0; n < nsteps; ++n) {
    s = rkmk4_step(spec, rhs, t0 + n * h, s, h);
    if (!s.g.allFinite() || !s.y.allFinite())
      throw FlowError("flow_dae_W1: state became non-finite", t0 + n * h);
    PontryaginPoint p = unpack(s);
    const DualVector drift = p.alpha[k - 1] - lag.partial_xi(p.jet, k - 1);
    const double dn = drift.lpNorm<Eigen::Infinity>();
    result.max_constraint_drift = std::max(result.max_constraint_drift, dn);
    if (dn > drift_tol) {
      p.alpha[k - 1] = lag.partial_xi(p.jet, k - 1);
      s = pack(p);
      ++result.reprojections;
    }
    result.points.push_back(std::move(p));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Shooting

struct ShootResult {
  Eigen::VectorXd solution;
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

/// Damped Newton with a forward-difference Jacobian.  `f` maps R^n -> R^n.
inline ShootResult shoot(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x0, double tol = 1e-10, int max_iter = 60,
                         double jac_step = 1e-7) {
  ShootResult res;
  res.solution = x0;
  Eigen::VectorXd r = f(res.solution);
  res.residual_norm = r.norm();
  const int n = static_cast<int>(x0.size());
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    if (res.residual_norm <= tol) {
      res.converged = true;
      return res;
    }
    Eigen::MatrixXd jac(r.size(), n);
    for (int j = 0; j < n; ++j) {
      const double step = jac_step * std::max(1.0, std::abs(res.solution(j)));
      Eigen::VectorXd xp = res.solution;
      xp(j) += step;
      jac.col(j) = (f(xp) - r) / step;
    }
    const Eigen::VectorXd delta = jac.fullPivLu().solve(-r);
    if (!delta.allFinite()) break;
    double lambda = 1.0;
    bool accepted = false;
    for (int half = 0; half < 8; ++half) {
      const Eigen::VectorXd trial = res.solution + lambda * delta;
      const Eigen::VectorXd rt = f(trial);
      if (rt.allFinite() && rt.norm() < res.residual_norm) {
        res.solution = trial;
        r = rt;
        res.residual_norm = rt.norm();
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }
  res.converged = res.residual_norm <= tol;
  return res;
}

}  // namespace lievar
