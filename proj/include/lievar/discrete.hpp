#pragma once

// Discrete mechanics for second-order group Lagrangians L_d(g, W1, W2) with
// W_k = g_k^{-1} g_{k+1}: discrete action, the five-term discrete
// Euler-Lagrange residual, and a Newton solver for the boundary value
// problem with clamped node pairs at both ends.

#include "integrate.hpp"

namespace lievar {

struct DiscretePath {
  double h = 0.0;
  std::vector<GroupElement> g;

  int size() const { return static_cast<int>(g.size()); }
  GroupElement w(int k) const { return g.at(k).transpose() * g.at(k + 1); }
};

/// Discrete Lagrangian on G x G x G in the (g_k, W_k, W_{k+1}) chart.
/// Slot derivatives are trivialized directional derivatives; the left (l*)
/// and right (r*) variants perturb a slot by h exp(sE_i) and exp(sE_i) h.
struct DiscreteLagrangianDef {
  std::function<double(const GroupElement&, const GroupElement&, const GroupElement&)> eval;
  double fd_step = 1e-6;

  enum class Side { Left, Right };

  DualVector slot_derivative(int slot, Side side, const GroupElement& g, const GroupElement& w1,
                             const GroupElement& w2) const {
    DualVector d(3);
    for (int i = 0; i < 3; ++i) {
      AlgebraVector e = AlgebraVector::Zero(3);
      e(i) = fd_step;
      auto perturb = [&](const GroupElement& x, double sgn) {
        const GroupElement ex = group_exp(AlgebraVector(sgn * e));
        return side == Side::Left ? GroupElement(x * ex) : GroupElement(ex * x);
      };
      double fp, fm;
      switch (slot) {
        case 0:
          fp = eval(perturb(g, 1.0), w1, w2);
          fm = eval(perturb(g, -1.0), w1, w2);
          break;
        case 1:
          fp = eval(g, perturb(w1, 1.0), w2);
          fm = eval(g, perturb(w1, -1.0), w2);
          break;
        default:
          fp = eval(g, w1, perturb(w2, 1.0));
          fm = eval(g, w1, perturb(w2, -1.0));
          break;
      }
      d(i) = (fp - fm) / (2.0 * fd_step);
      if (!std::isfinite(d(i)))
        throw std::runtime_error("DiscreteLagrangianDef: non-finite slot derivative");
    }
    return d;
  }
};

/// Squared-log gap Lagrangian: L_d = 1/2 ||log(W1^{-1} W2)||^2, the discrete
/// counterpart of 1/2 |xi'|^2 up to a constant factor.
inline DiscreteLagrangianDef log_gap_lagrangian() {
  DiscreteLagrangianDef ld;
  ld.eval = [](const GroupElement&, const GroupElement& w1, const GroupElement& w2) {
    return 0.5 * group_log(GroupElement(w1.transpose() * w2)).squaredNorm();
  };
  return ld;
}

inline double discrete_action(const DiscretePath& path, const DiscreteLagrangianDef& ld) {
  double a = 0.0;
  for (int k = 0; k + 2 < path.size(); ++k) a += ld.eval(path.g[k], path.w(k), path.w(k + 1));
  return a;
}

/// The discrete Euler-Lagrange expression at interior node k (valid for
/// 2 <= k <= size-3); it equals the left-trivialized gradient of the
/// discrete action with respect to g_k.
inline DualVector discrete_el_residual(const DiscretePath& path, const DiscreteLagrangianDef& ld,
                                       int k) {
  if (k < 2 || k + 2 >= path.size())
    throw std::invalid_argument("discrete_el_residual: node is not interior");
  using Side = DiscreteLagrangianDef::Side;
  const GroupElement wkm2 = path.w(k - 2), wkm1 = path.w(k - 1), wk = path.w(k),
                     wkp1 = path.w(k + 1);
  DualVector r = ld.slot_derivative(0, Side::Left, path.g[k], wk, wkp1);
  r += ld.slot_derivative(1, Side::Left, path.g[k - 1], wkm1, wk);
  r -= ld.slot_derivative(1, Side::Right, path.g[k], wk, wkp1);
  r -= ld.slot_derivative(2, Side::Right, path.g[k - 1], wkm1, wk);
  r += ld.slot_derivative(2, Side::Left, path.g[k - 2], wkm2, wkm1);
  return r;
}

struct DiscreteBvpResult {
  DiscretePath path;
  int iterations = 0;
  double residual_norm = 0.0;  // max-norm over interior residuals
  bool converged = false;
};

/// Newton solve for the interior nodes g_2..g_{M-3} with the two node pairs
/// at each end held fixed.  The initial guess is taken from `path` itself.
inline DiscreteBvpResult solve_discrete_bvp(const DiscretePath& initial,
                                            const DiscreteLagrangianDef& ld,
                                            double tol = 1e-11, int max_iter = 40) {
  const int m = initial.size();
  if (m < 6) throw std::invalid_argument("solve_discrete_bvp: need at least 6 nodes");
  const int n_free = m - 4;  // nodes 2 .. m-3
  DiscreteBvpResult out;
  out.path = initial;

  auto residuals = [&](const DiscretePath& p) {
    Eigen::VectorXd r(3 * n_free);
    for (int j = 0; j < n_free; ++j) r.segment(3 * j, 3) = discrete_el_residual(p, ld, j + 2);
    return r;
  };

  Eigen::VectorXd r = residuals(out.path);
  out.residual_norm = r.lpNorm<Eigen::Infinity>();
  const double fd = 1e-7;
  for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
    if (out.residual_norm <= tol) {
      out.converged = true;
      return out;
    }
    // Banded FD Jacobian: perturbing node j only touches residuals j-2..j+2.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3 * n_free, 3 * n_free);
    for (int j = 0; j < n_free; ++j) {
      const int node = j + 2;
      for (int a = 0; a < 3; ++a) {
        AlgebraVector e = AlgebraVector::Zero(3);
        e(a) = fd;
        DiscretePath p = out.path;
        p.g[node] = out.path.g[node] * group_exp(e);
        for (int i = std::max(0, j - 2); i <= std::min(n_free - 1, j + 2); ++i)
          jac.block(3 * i, 3 * j + a, 3, 1) =
              (discrete_el_residual(p, ld, i + 2) - r.segment(3 * i, 3)) / fd;
      }
    }
    const Eigen::VectorXd delta = jac.fullPivLu().solve(-r);
    if (!delta.allFinite()) break;
    double lambda = 1.0;
    bool accepted = false;
    const double r2 = r.norm();
    for (int half = 0; half < 8; ++half) {
      DiscretePath trial = out.path;
      for (int j = 0; j < n_free; ++j)
        trial.g[j + 2] = out.path.g[j + 2] * group_exp(AlgebraVector(lambda * delta.segment(3 * j, 3)));
      const Eigen::VectorXd rt = residuals(trial);
      if (rt.allFinite() && rt.norm() < r2) {
        out.path = std::move(trial);
        r = rt;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
    out.residual_norm = r.lpNorm<Eigen::Infinity>();
  }
  out.converged = out.residual_norm <= tol;
  return out;
}

}  // namespace lievar
