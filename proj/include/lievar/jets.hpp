#pragma once

// Left-trivialized higher-order jets and Lagrangian / constraint definitions.

#include "algebra.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lievar {

/// Point (g, xi^(0), ..., xi^(k-1)) of the left-trivialized k-order tangent
/// bundle G x k*g.
struct HigherJet {
  GroupElement g = GroupElement::Identity();
  std::vector<AlgebraVector> xi;

  HigherJet() = default;
  HigherJet(GroupElement g_, std::vector<AlgebraVector> xi_) : g(std::move(g_)), xi(std::move(xi_)) {}

  int order() const { return static_cast<int>(xi.size()); }

  HigherJet truncated(int l) const {
    if (l < 0 || l > order()) throw std::invalid_argument("HigherJet::truncated: order out of range");
    return {g, std::vector<AlgebraVector>(xi.begin(), xi.begin() + l)};
  }
};

/// tau^(l,k): forgets the derivative slots above l.
inline HigherJet projection_tau(const HigherJet& jet, int l) { return jet.truncated(l); }

/// A k-order Lagrangian on G x k*g.  Analytic partials are optional; the
/// default path is central differences with the configured steps.
struct LagrangianDef {
  int order = 1;
  std::function<double(const HigherJet&)> eval;
  // d/dxi^(i) L as a DualVector, if supplied analytically.
  std::function<DualVector(const HigherJet&, int)> d_xi;
  // Left-trivialized d/dg L, if supplied analytically.
  std::function<DualVector(const HigherJet&)> d_group;
  double fd_step = 1e-6;
  double fd_step_group = 1e-6;

  double operator()(const HigherJet& jet) const { return eval(jet); }

  DualVector partial_xi(const HigherJet& jet, int i) const {
    if (i < 0 || i >= order) throw std::invalid_argument("partial_xi: slot out of range");
    if (d_xi) return d_xi(jet, i);
    const int n = static_cast<int>(jet.xi[i].size());
    DualVector d(n);
    HigherJet probe = jet;
    for (int a = 0; a < n; ++a) {
      probe.xi[i](a) = jet.xi[i](a) + fd_step;
      const double fp = eval(probe);
      probe.xi[i](a) = jet.xi[i](a) - fd_step;
      const double fm = eval(probe);
      probe.xi[i](a) = jet.xi[i](a);
      d(a) = (fp - fm) / (2.0 * fd_step);
    }
    return d;
  }

  DualVector group_partial(const HigherJet& jet) const {
    if (d_group) return d_group(jet);
    return left_trivialized_group_derivative(
        [&](const GroupElement& g) {
          HigherJet probe = jet;
          probe.g = g;
          return eval(probe);
        },
        jet.g, fd_step_group);
  }
};

/// m scalar constraints Phi^A on jets, same optional-partials scheme.
struct ConstraintDef {
  int order = 1;
  int count = 0;
  std::function<double(const HigherJet&, int)> eval;  // (jet, A)
  std::function<DualVector(const HigherJet&, int, int)> d_xi;  // (jet, A, slot)
  std::function<DualVector(const HigherJet&, int)> d_group;    // (jet, A)
  double fd_step = 1e-6;
  double fd_step_group = 1e-6;

  DualVector partial_xi(const HigherJet& jet, int a, int i) const {
    if (d_xi) return d_xi(jet, a, i);
    LagrangianDef scalar{order, [this, a](const HigherJet& j) { return eval(j, a); },
                         nullptr, nullptr, fd_step, fd_step_group};
    return scalar.partial_xi(jet, i);
  }

  DualVector group_partial(const HigherJet& jet, int a) const {
    if (d_group) return d_group(jet, a);
    LagrangianDef scalar{order, [this, a](const HigherJet& j) { return eval(j, a); },
                         nullptr, nullptr, fd_step, fd_step_group};
    return scalar.group_partial(jet);
  }
};

}  // namespace lievar
