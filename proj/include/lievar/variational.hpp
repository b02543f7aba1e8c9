#pragma once

// Residual operators for the continuous equations of motion: Euler-Arnold,
// Lie-Poisson, higher-order Euler-Arnold, the Pontryagin-bundle DAE
// right-hand side, the Legendre relation for the momenta alpha_i, the
// k-order (constrained) Euler-Lagrange / Euler-Poincare residuals, and the
// rank tests deciding whether the first constraint submanifold is
// symplectic.

#include "bundles.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace lievar {

// ---------------------------------------------------------------------------
// Sampled curves and node-wise series

/// Curve on a uniform grid t0 + n h.  Node jets may carry more derivative
/// slots than the Lagrangian order (used when evaluating time derivatives
/// analytically); lambda holds optional per-node multipliers.
struct SampledCurve {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<HigherJet> nodes;
  std::vector<Eigen::VectorXd> lambda;

  int size() const { return static_cast<int>(nodes.size()); }
  double time(int n) const { return t0 + n * h; }
};

/// Node-indexed vector values; `offset` is the curve-node index of v.front().
/// Each central-difference pass shrinks the valid window by one node per side.
struct Series {
  int offset = 0;
  std::vector<Eigen::VectorXd> v;

  int size() const { return static_cast<int>(v.size()); }
  int last_node() const { return offset + size() - 1; }
  const Eigen::VectorXd& at_node(int n) const { return v.at(n - offset); }
};

inline Series diff_series(const Series& s, double h) {
  if (s.size() < 3) throw std::invalid_argument("diff_series: curve too short to difference");
  Series out;
  out.offset = s.offset + 1;
  out.v.reserve(s.size() - 2);
  for (int i = 1; i + 1 < s.size(); ++i) out.v.push_back((s.v[i + 1] - s.v[i - 1]) / (2.0 * h));
  return out;
}

inline void align_series(Series& a, Series& b) {
  const int lo = std::max(a.offset, b.offset);
  const int hi = std::min(a.last_node(), b.last_node());
  if (hi < lo) throw std::invalid_argument("align_series: empty overlap");
  a.v = std::vector<Eigen::VectorXd>(a.v.begin() + (lo - a.offset), a.v.begin() + (hi + 1 - a.offset));
  a.offset = lo;
  b.v = std::vector<Eigen::VectorXd>(b.v.begin() + (lo - b.offset), b.v.begin() + (hi + 1 - b.offset));
  b.offset = lo;
}

namespace detail {

// Per-node functional derivative dL/dxi^(i), with the multiplier term
// subtracted when constraints are present (L - lambda_A Phi^A).
inline Series partial_series(const SampledCurve& curve, const LagrangianDef& lag,
                             const ConstraintDef* phi, int slot) {
  Series s;
  s.offset = 0;
  s.v.reserve(curve.size());
  for (int n = 0; n < curve.size(); ++n) {
    const HigherJet jet = curve.nodes[n].truncated(lag.order);
    DualVector p = lag.partial_xi(jet, slot);
    if (phi) {
      const Eigen::VectorXd& lam = curve.lambda.at(n);
      for (int a = 0; a < phi->count; ++a) p -= lam(a) * phi->partial_xi(jet, a, slot);
    }
    s.v.push_back(std::move(p));
  }
  return s;
}

inline Series group_partial_series(const SampledCurve& curve, const LagrangianDef& lag,
                                   const ConstraintDef* phi) {
  Series s;
  s.offset = 0;
  s.v.reserve(curve.size());
  for (int n = 0; n < curve.size(); ++n) {
    const HigherJet jet = curve.nodes[n].truncated(lag.order);
    DualVector p = lag.group_partial(jet);
    if (phi) {
      const Eigen::VectorXd& lam = curve.lambda.at(n);
      for (int a = 0; a < phi->count; ++a) p -= lam(a) * phi->group_partial(jet, a);
    }
    s.v.push_back(std::move(p));
  }
  return s;
}

// sum_i (-1)^i d^i/dt^i dL/dxi^(i); this is exactly the alpha_0 of the
// Legendre relation.
inline Series alternating_sum(const SampledCurve& curve, const LagrangianDef& lag,
                              const ConstraintDef* phi) {
  Series acc;
  for (int i = 0; i < lag.order; ++i) {
    Series term = partial_series(curve, lag, phi, i);
    for (int d = 0; d < i; ++d) term = diff_series(term, curve.h);
    if (i == 0) {
      acc = std::move(term);
    } else {
      align_series(acc, term);
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      for (int n = 0; n < acc.size(); ++n) acc.v[n] += sign * term.v[n];
    }
  }
  return acc;
}

inline Series residual_impl(const LieAlgebraSpec& spec, const SampledCurve& curve,
                            const LagrangianDef& lag, const ConstraintDef* phi,
                            bool group_term) {
  Series s = alternating_sum(curve, lag, phi);
  Series ds = diff_series(s, curve.h);
  Series res;
  res.offset = ds.offset;
  res.v.reserve(ds.size());
  for (int i = 0; i < ds.size(); ++i) {
    const int n = ds.offset + i;
    Eigen::VectorXd r = ds.v[i] - spec.ad_star(curve.nodes[n].xi[0], s.at_node(n));
    res.v.push_back(std::move(r));
  }
  if (group_term) {
    Series gp = group_partial_series(curve, lag, phi);
    align_series(res, gp);
    for (int i = 0; i < res.size(); ++i) res.v[i] -= gp.v[i];
  }
  return res;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Euler-Arnold and Lie-Poisson right-hand sides

/// Hamiltonian on G x g* with optional analytic partials.
struct GroupHamiltonian {
  std::function<double(const GroupElement&, const DualVector&)> eval;
  std::function<AlgebraVector(const GroupElement&, const DualVector&)> d_alpha;
  std::function<DualVector(const GroupElement&, const DualVector&)> d_group;
  double fd_step = 1e-6;

  AlgebraVector partial_alpha(const GroupElement& g, const DualVector& alpha) const {
    if (d_alpha) return d_alpha(g, alpha);
    AlgebraVector d(alpha.size());
    DualVector probe = alpha;
    for (int i = 0; i < alpha.size(); ++i) {
      probe(i) = alpha(i) + fd_step;
      const double fp = eval(g, probe);
      probe(i) = alpha(i) - fd_step;
      const double fm = eval(g, probe);
      probe(i) = alpha(i);
      d(i) = (fp - fm) / (2.0 * fd_step);
      if (!std::isfinite(d(i))) throw std::runtime_error("euler_arnold_rhs: non-finite derivative");
    }
    return d;
  }

  DualVector group_partial(const GroupElement& g, const DualVector& alpha) const {
    if (d_group) return d_group(g, alpha);
    return left_trivialized_group_derivative(
        [&](const GroupElement& gg) { return eval(gg, alpha); }, g, fd_step);
  }
};

struct EulerArnoldRhs {
  AlgebraVector xi;
  DualVector alpha_dot;
};

/// xi = dH/dalpha; alpha_dot = -trivialized dH/dg + ad*_xi alpha.
inline EulerArnoldRhs euler_arnold_rhs(const LieAlgebraSpec& spec, const GroupHamiltonian& ham,
                                       const GroupElement& g, const DualVector& alpha) {
  EulerArnoldRhs out;
  out.xi = ham.partial_alpha(g, alpha);
  out.alpha_dot = -ham.group_partial(g, alpha) + spec.ad_star(out.xi, alpha);
  return out;
}

/// alpha_dot = ad*_{dh/dalpha} alpha for an invariant hamiltonian h on g*.
inline DualVector lie_poisson_rhs(const LieAlgebraSpec& spec,
                                  const std::function<double(const DualVector&)>& h,
                                  const DualVector& alpha, double fd_step = 1e-6) {
  GroupHamiltonian ham{[&h](const GroupElement&, const DualVector& a) { return h(a); },
                       nullptr, nullptr, fd_step};
  return spec.ad_star(ham.partial_alpha(GroupElement::Identity(), alpha), alpha);
}

// ---------------------------------------------------------------------------
// Higher-order Euler-Arnold equations on G x (k-1)g x k g*

struct CotangentState {
  GroupElement g = GroupElement::Identity();
  std::vector<AlgebraVector> xi;   // k-1 slots
  std::vector<DualVector> alpha;   // k slots

  int order() const { return static_cast<int>(alpha.size()); }
};

struct HigherHamiltonian {
  int order = 2;
  std::function<double(const CotangentState&)> eval;
  std::function<AlgebraVector(const CotangentState&, int)> d_alpha;
  std::function<DualVector(const CotangentState&, int)> d_xi;
  std::function<DualVector(const CotangentState&)> d_group;
  double fd_step = 1e-6;

  AlgebraVector partial_alpha(const CotangentState& s, int i) const {
    if (d_alpha) return d_alpha(s, i);
    AlgebraVector d(s.alpha[i].size());
    CotangentState probe = s;
    for (int a = 0; a < d.size(); ++a) {
      probe.alpha[i](a) = s.alpha[i](a) + fd_step;
      const double fp = eval(probe);
      probe.alpha[i](a) = s.alpha[i](a) - fd_step;
      const double fm = eval(probe);
      probe.alpha[i](a) = s.alpha[i](a);
      d(a) = (fp - fm) / (2.0 * fd_step);
    }
    return d;
  }

  DualVector partial_xi(const CotangentState& s, int i) const {
    if (d_xi) return d_xi(s, i);
    DualVector d(s.xi[i].size());
    CotangentState probe = s;
    for (int a = 0; a < d.size(); ++a) {
      probe.xi[i](a) = s.xi[i](a) + fd_step;
      const double fp = eval(probe);
      probe.xi[i](a) = s.xi[i](a) - fd_step;
      const double fm = eval(probe);
      probe.xi[i](a) = s.xi[i](a);
      d(a) = (fp - fm) / (2.0 * fd_step);
    }
    return d;
  }

  DualVector group_partial(const CotangentState& s) const {
    if (d_group) return d_group(s);
    return left_trivialized_group_derivative(
        [&](const GroupElement& g) {
          CotangentState probe = s;
          probe.g = g;
          return eval(probe);
        },
        s.g, fd_step);
  }
};

struct CotangentDeriv {
  AlgebraVector g_dir;                 // dg/dt = g * g_dir
  std::vector<AlgebraVector> dxi;      // k-1 slots
  std::vector<DualVector> dalpha;      // k slots
};

inline CotangentDeriv higher_euler_arnold_rhs(const LieAlgebraSpec& spec,
                                              const HigherHamiltonian& ham,
                                              const CotangentState& s) {
  const int k = s.order();
  if (static_cast<int>(s.xi.size()) != k - 1)
    throw std::invalid_argument("higher_euler_arnold_rhs: xi slot count must be k-1");
  CotangentDeriv out;
  out.g_dir = ham.partial_alpha(s, 0);
  out.dxi.resize(k - 1);
  for (int j = 0; j + 1 < k; ++j) out.dxi[j] = ham.partial_alpha(s, j + 1);
  out.dalpha.resize(k);
  out.dalpha[0] = -ham.group_partial(s) + spec.ad_star(out.g_dir, s.alpha[0]);
  for (int i = 0; i + 1 < k; ++i) out.dalpha[i + 1] = -ham.partial_xi(s, i);
  return out;
}

// ---------------------------------------------------------------------------
// Pontryagin-bundle DAE right-hand side

struct DaeRhs {
  PontryaginTangent tangent;  // xi1[k] is the undetermined slot, left at zero
  DualVector w1_residual;     // alpha_{k-1} - dL/dxi^(k-1)
};

inline DaeRhs dae_rhs(const LieAlgebraSpec& spec, const PontryaginPoint& p,
                      const LagrangianDef& lag) {
  p.check();
  const int k = p.order();
  DaeRhs out;
  out.tangent.xi1.resize(k + 1);
  for (int i = 0; i < k; ++i) out.tangent.xi1[i] = p.jet.xi[i];
  out.tangent.xi1[k] = AlgebraVector::Zero(spec.dim);
  out.tangent.nu1.resize(k);
  out.tangent.nu1[0] = lag.group_partial(p.jet) + spec.ad_star(p.jet.xi[0], p.alpha[0]);
  for (int i = 0; i + 1 < k; ++i) out.tangent.nu1[i + 1] = lag.partial_xi(p.jet, i) - p.alpha[i];
  out.w1_residual = p.alpha[k - 1] - lag.partial_xi(p.jet, k - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Legendre relation for the momenta

struct AlphaSeries {
  int offset = 0;
  std::vector<std::vector<DualVector>> alpha;  // per node, k entries
};

/// alpha_{k-1} = dL/dxi^(k-1); alpha_i = dL/dxi^(i) - d/dt alpha_{i+1}.
inline AlphaSeries legendre_alpha(const SampledCurve& curve, const LagrangianDef& lag) {
  const int k = lag.order;
  if (curve.size() < 2 * k - 1)
    throw std::invalid_argument("legendre_alpha: curve too short for required derivatives");
  std::vector<Series> a(k);
  a[k - 1] = detail::partial_series(curve, lag, nullptr, k - 1);
  for (int i = k - 2; i >= 0; --i) {
    Series d = diff_series(a[i + 1], curve.h);
    Series p = detail::partial_series(curve, lag, nullptr, i);
    align_series(p, d);
    a[i] = p;
    for (int n = 0; n < a[i].size(); ++n) a[i].v[n] -= d.v[n];
  }
  AlphaSeries out;
  out.offset = a[0].offset;
  const int count = a[0].size();
  out.alpha.assign(count, {});
  for (int n = 0; n < count; ++n) {
    out.alpha[n].reserve(k);
    for (int i = 0; i < k; ++i) out.alpha[n].push_back(a[i].at_node(out.offset + n));
  }
  return out;
}

/// Independent route: alpha_0 = sum_i (-1)^i d^i/dt^i dL/dxi^(i).
inline Series legendre_alpha0_alternating(const SampledCurve& curve, const LagrangianDef& lag) {
  return detail::alternating_sum(curve, lag, nullptr);
}

// ---------------------------------------------------------------------------
// Euler-Lagrange / Euler-Poincare residuals

/// (d/dt - ad*_xi) sum_i (-1)^i d^i/dt^i dL/dxi^(i) - trivialized dL/dg,
/// evaluated at the interior nodes where all stencils fit.
inline Series euler_lagrange_residual(const LieAlgebraSpec& spec, const SampledCurve& curve,
                                      const LagrangianDef& lag) {
  return detail::residual_impl(spec, curve, lag, nullptr, true);
}

/// Reduced version, without the group term.
inline Series euler_poincare_residual(const LieAlgebraSpec& spec, const SampledCurve& curve,
                                      const LagrangianDef& red) {
  return detail::residual_impl(spec, curve, red, nullptr, false);
}

struct ConstrainedResidual {
  Series dynamics;                               // Eq. residual with L - lambda_A Phi^A
  std::vector<Eigen::VectorXd> constraint_values;  // Phi^A at every node
};

inline ConstrainedResidual constrained_el_residual(const LieAlgebraSpec& spec,
                                                   const SampledCurve& curve,
                                                   const LagrangianDef& lag,
                                                   const ConstraintDef& phi) {
  if (curve.lambda.size() != curve.nodes.size())
    throw std::invalid_argument("constrained_el_residual: multipliers missing on the grid");
  ConstrainedResidual out;
  out.dynamics = detail::residual_impl(spec, curve, lag, &phi, true);
  out.constraint_values.reserve(curve.size());
  for (int n = 0; n < curve.size(); ++n) {
    Eigen::VectorXd c(phi.count);
    const HigherJet jet = curve.nodes[n].truncated(phi.order);
    for (int a = 0; a < phi.count; ++a) c(a) = phi.eval(jet, a);
    out.constraint_values.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regularity tests (first step of the constraint algorithm)

struct RegularityReport {
  bool nondegenerate = false;
  int rank = 0;
  Eigen::MatrixXd matrix;
};

inline int numerical_rank(const Eigen::MatrixXd& m, double ratio = 1e-8) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) / s(0) > ratio) ++r;
  return r;
}

/// Hessian of L in the top derivative slot, by differencing the analytic
/// partial when available, else by four-point second differences.
inline Eigen::MatrixXd top_slot_hessian(const LagrangianDef& lag, const HigherJet& jet,
                                        double step = 1e-4) {
  const int k = lag.order;
  const int n = static_cast<int>(jet.xi[k - 1].size());
  Eigen::MatrixXd hess(n, n);
  if (lag.d_xi) {
    const double h = 1e-6;
    HigherJet probe = jet.truncated(k);
    for (int b = 0; b < n; ++b) {
      probe.xi[k - 1](b) = jet.xi[k - 1](b) + h;
      const DualVector fp = lag.d_xi(probe, k - 1);
      probe.xi[k - 1](b) = jet.xi[k - 1](b) - h;
      const DualVector fm = lag.d_xi(probe, k - 1);
      probe.xi[k - 1](b) = jet.xi[k - 1](b);
      hess.col(b) = (fp - fm) / (2.0 * h);
    }
  } else {
    HigherJet probe = jet.truncated(k);
    auto f = [&](double da, int a, double db, int b) {
      probe.xi[k - 1](a) += da;
      probe.xi[k - 1](b) += db;
      const double val = lag.eval(probe);
      probe.xi[k - 1] = jet.xi[k - 1];
      return val;
    };
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        hess(a, b) = (f(step, a, step, b) - f(step, a, -step, b) - f(-step, a, step, b) +
                      f(-step, a, -step, b)) /
                     (4.0 * step * step);
  }
  return 0.5 * (hess + hess.transpose());
}

inline RegularityReport regularity_test(const LagrangianDef& lag, const HigherJet& probe) {
  RegularityReport rep;
  rep.matrix = top_slot_hessian(lag, probe);
  rep.rank = numerical_rank(rep.matrix);
  rep.nondegenerate = rep.rank == rep.matrix.rows();
  return rep;
}

/// Bordered matrix [[d2L/dxi_top^2, dPhi/dxi_top], [dPhi/dxi_top^T, 0]]
/// on g x R^m.
inline RegularityReport constrained_regularity_test(const LagrangianDef& lag,
                                                    const ConstraintDef& phi,
                                                    const HigherJet& probe) {
  const int k = lag.order;
  const int n = static_cast<int>(probe.xi[k - 1].size());
  const int m = phi.count;
  RegularityReport rep;
  rep.matrix = Eigen::MatrixXd::Zero(n + m, n + m);
  rep.matrix.topLeftCorner(n, n) = top_slot_hessian(lag, probe);
  const HigherJet jet = probe.truncated(k);
  for (int a = 0; a < m; ++a) {
    const DualVector dphi = phi.partial_xi(jet, a, k - 1);
    rep.matrix.block(0, n + a, n, 1) = dphi;
    rep.matrix.block(n + a, 0, 1, n) = dphi.transpose();
  }
  rep.rank = numerical_rank(rep.matrix);
  rep.nondegenerate = rep.rank == n + m;
  return rep;
}

}  // namespace lievar
