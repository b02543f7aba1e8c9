#pragma once

// Pontryagin bundle W0 = G x k*g x k*g*, its presymplectic 2-form, the
// cotangent-side symplectic form, the canonical immersion, and the
// Hamiltonian H = sum <alpha_i, xi^(i)> - L.

#include "jets.hpp"

namespace lievar {

/// Point (g, xi^(0..k-1), alpha_0..alpha_{k-1}) of W0.
struct PontryaginPoint {
  HigherJet jet;
  std::vector<DualVector> alpha;

  int order() const { return jet.order(); }

  void check() const {
    if (alpha.size() != jet.xi.size())
      throw std::invalid_argument("PontryaginPoint: alpha list length != jet order");
  }
};

/// Tangent at a point of W0: k+1 algebra slots (the last is the xi^(k)
/// degeneracy direction) and k dual slots.
struct PontryaginTangent {
  std::vector<AlgebraVector> xi1;  // size k+1
  std::vector<DualVector> nu1;     // size k
};

/// Tangent at a point of G x (k-1)*g x k*g*: k algebra slots (slot 0 is the
/// g-direction) and k dual slots.
struct CotangentTangent {
  std::vector<AlgebraVector> xi;  // size k
  std::vector<DualVector> nu;     // size k
};

struct CanonicalImmersion {
  HigherJet base;                    // (g, xi^(0..k-2)), order k-1
  std::vector<AlgebraVector> fiber;  // (xi^(0), ..., xi^(k-1))
};

/// j_k: T^(k)G -> T(T^(k-1)G) in trivialized coordinates.
inline CanonicalImmersion canonical_immersion(const HigherJet& jet) {
  if (jet.order() < 2) throw std::invalid_argument("canonical_immersion: order must be >= 2");
  return {jet.truncated(jet.order() - 1), jet.xi};
}

namespace detail {

inline double pairing_block(const std::vector<DualVector>& nu1,
                            const std::vector<AlgebraVector>& xi2, int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += pairing(nu1[i], xi2[i]);
  return s;
}

}  // namespace detail

/// Omega_{W0} evaluated on two tangents; the xi^(k) slots do not enter.
inline double presymplectic_form(const LieAlgebraSpec& spec, const PontryaginPoint& p,
                                 const PontryaginTangent& t1, const PontryaginTangent& t2) {
  const int k = p.order();
  p.check();
  if (static_cast<int>(t1.xi1.size()) != k + 1 || static_cast<int>(t2.xi1.size()) != k + 1 ||
      static_cast<int>(t1.nu1.size()) != k || static_cast<int>(t2.nu1.size()) != k)
    throw std::invalid_argument("presymplectic_form: tangent slot count mismatch");
  return -detail::pairing_block(t1.nu1, t2.xi1, k) + detail::pairing_block(t2.nu1, t1.xi1, k) +
         pairing(p.alpha[0], spec.bracket(t1.xi1[0], t2.xi1[0]));
}

/// omega_{G x (k-1)g} on T*(T^(k-1)G); only alpha_0 of the base point enters.
inline double symplectic_form_cotangent(const LieAlgebraSpec& spec, const DualVector& alpha0,
                                        const CotangentTangent& t1, const CotangentTangent& t2) {
  const int k = static_cast<int>(t1.xi.size());
  if (static_cast<int>(t2.xi.size()) != k || static_cast<int>(t1.nu.size()) != k ||
      static_cast<int>(t2.nu.size()) != k)
    throw std::invalid_argument("symplectic_form_cotangent: tangent slot count mismatch");
  return -detail::pairing_block(t1.nu, t2.xi, k) + detail::pairing_block(t2.nu, t1.xi, k) +
         pairing(alpha0, spec.bracket(t1.xi[0], t2.xi[0]));
}

inline double hamiltonian_H(const PontryaginPoint& p, const LagrangianDef& lag) {
  p.check();
  double s = 0.0;
  for (int i = 0; i < p.order(); ++i) s += pairing(p.alpha[i], p.jet.xi[i]);
  return s - lag.eval(p.jet);
}

}  // namespace lievar
