#pragma once

// Lie algebra kernel: structure constants, bracket, coadjoint action,
// pairing, and left-trivialized derivatives of group-dependent functions.

#include "so3.hpp"

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lievar {

/// Finite-dimensional Lie algebra given by structure constants in a fixed
/// basis: [e_i, e_j] = C^k_{ij} e_k, stored as structure[k](i, j).
struct LieAlgebraSpec {
  int dim = 0;
  std::vector<Eigen::MatrixXd> structure;
  bool so3_fast = false;

  static LieAlgebraSpec from_structure_constants(std::vector<Eigen::MatrixXd> c) {
    LieAlgebraSpec spec;
    spec.dim = static_cast<int>(c.size());
    for (const auto& ck : c)
      if (ck.rows() != spec.dim || ck.cols() != spec.dim)
        throw std::invalid_argument("LieAlgebraSpec: structure constant shape mismatch");
    spec.structure = std::move(c);
    if (spec.antisymmetry_defect() > 1e-12)
      throw std::invalid_argument("LieAlgebraSpec: structure constants are not antisymmetric");
    if (spec.jacobi_defect() > 1e-12)
      throw std::invalid_argument("LieAlgebraSpec: Jacobi identity violated");
    return spec;
  }

  static LieAlgebraSpec so3() {
    std::vector<Eigen::MatrixXd> c(3, Eigen::MatrixXd::Zero(3, 3));
    // C^k_{ij} = epsilon_{ijk}
    c[2](0, 1) = 1.0; c[2](1, 0) = -1.0;
    c[0](1, 2) = 1.0; c[0](2, 1) = -1.0;
    c[1](2, 0) = 1.0; c[1](0, 2) = -1.0;
    auto spec = from_structure_constants(std::move(c));
    spec.so3_fast = true;
    return spec;
  }

  double antisymmetry_defect() const {
    double d = 0.0;
    for (const auto& ck : structure)
      d = std::max(d, (ck + ck.transpose()).lpNorm<Eigen::Infinity>());
    return d;
  }

  /// max_l,i,j,k |sum_m (C^m_{ij} C^l_{mk} + C^m_{jk} C^l_{mi} + C^m_{ki} C^l_{mj})|
  double jacobi_defect() const {
    double d = 0.0;
    for (int l = 0; l < dim; ++l)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k) {
            double s = 0.0;
            for (int m = 0; m < dim; ++m)
              s += structure[m](i, j) * structure[l](m, k) +
                   structure[m](j, k) * structure[l](m, i) +
                   structure[m](k, i) * structure[l](m, j);
            d = std::max(d, std::abs(s));
          }
    return d;
  }

  void check_dim(const Eigen::VectorXd& v, const char* what) const {
    if (v.size() != dim) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }

  AlgebraVector bracket(const AlgebraVector& xi, const AlgebraVector& eta) const {
    check_dim(xi, "bracket");
    check_dim(eta, "bracket");
    if (so3_fast) return Eigen::Vector3d(xi.head<3>()).cross(Eigen::Vector3d(eta.head<3>()));
    AlgebraVector out = AlgebraVector::Zero(dim);
    for (int k = 0; k < dim; ++k) out(k) = xi.dot(structure[k] * eta);
    return out;
  }

  /// Coadjoint action: <ad*_xi mu, eta> = <mu, [xi, eta]>.  On so(3) this is
  /// mu x xi.
  DualVector ad_star(const AlgebraVector& xi, const DualVector& mu) const {
    check_dim(xi, "ad_star");
    check_dim(mu, "ad_star");
    if (so3_fast) return Eigen::Vector3d(mu.head<3>()).cross(Eigen::Vector3d(xi.head<3>()));
    DualVector out = DualVector::Zero(dim);
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) s += mu(k) * structure[k](j, i) * xi(j);
      out(i) = s;
    }
    return out;
  }
};

inline double pairing(const DualVector& mu, const AlgebraVector& xi) {
  if (mu.size() != xi.size()) throw std::invalid_argument("pairing: dimension mismatch");
  return mu.dot(xi);
}

/// Left-trivialized derivative of a scalar function of the group element:
/// component i is d/ds f(g exp(s e_i)) at s = 0, central differences.
inline DualVector left_trivialized_group_derivative(
    const std::function<double(const GroupElement&)>& f, const GroupElement& g,
    double step = 1e-6) {
  DualVector d(3);
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(i) = step;
    const double fp = f(g * group_exp(e));
    const double fm = f(g * group_exp(Eigen::Vector3d(-e)));
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("left_trivialized_group_derivative: non-finite value");
    d(i) = (fp - fm) / (2.0 * step);
  }
  return d;
}

}  // namespace lievar
