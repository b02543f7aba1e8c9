#pragma once

// Shared test utilities: seeded random samples, analytic trigonometric
// curves with derivative closures, compact variation windows, and quadratic
// Lagrangians with analytic partials.

#include <lievar/integrate.hpp>

#include <memory>
#include <random>

namespace testutil {

using namespace lievar;

inline Eigen::Vector3d random_vec3(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> unif(-scale, scale);
  return {unif(rng), unif(rng), unif(rng)};
}

inline GroupElement random_rotation(std::mt19937_64& rng, double scale = 3.0) {
  return group_exp(Eigen::Vector3d(random_vec3(rng, scale)));
}

/// xi(t) = sum_m a_m cos(w_m t) + b_m sin(w_m t), with analytic derivatives
/// d^j/dt^j cos(wt) = w^j cos(wt + j pi/2).
struct TrigCurve {
  std::vector<Eigen::Vector3d> a, b;
  std::vector<double> w;

  static TrigCurve random(std::mt19937_64& rng, int modes = 3, double amp = 0.5) {
    TrigCurve c;
    std::uniform_real_distribution<double> freq(0.5, 2.5);
    for (int m = 0; m < modes; ++m) {
      c.a.push_back(random_vec3(rng, amp / (m + 1)));
      c.b.push_back(random_vec3(rng, amp / (m + 1)));
      c.w.push_back(freq(rng));
    }
    return c;
  }

  Eigen::Vector3d derivative(double t, int j) const {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    const double ph = j * M_PI / 2.0;
    for (size_t m = 0; m < a.size(); ++m) {
      const double wj = std::pow(w[m], j);
      v += wj * (std::cos(w[m] * t + ph) * a[m] + std::sin(w[m] * t + ph) * b[m]);
    }
    return v;
  }
};

/// Compact window w(t) = sin^6(pi t / T) expanded as a cosine polynomial so
/// derivatives of any order are exact; w vanishes to 6th order at 0 and T.
struct Sin6Window {
  double T = 1.0;

  double derivative(double t, int j) const {
    // sin^6(x) = (10 - 15 cos 2x + 6 cos 4x - cos 6x) / 32
    const double c[4] = {10.0 / 32.0, -15.0 / 32.0, 6.0 / 32.0, -1.0 / 32.0};
    const double base = M_PI / T;
    double v = (j == 0) ? c[0] : 0.0;
    const double ph = j * M_PI / 2.0;
    for (int m = 1; m <= 3; ++m) {
      const double wm = 2.0 * m * base;
      v += c[m] * std::pow(wm, j) * std::cos(wm * t + ph);
    }
    return v;
  }
};

inline long long binom(int n, int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// j-th derivative of the constrained variation delta xi = eta' + [xi, eta]
/// for eta(t) = w(t) c, by the Leibniz rule on the bracket term.
inline Eigen::Vector3d delta_xi_derivative(const TrigCurve& xi, const Sin6Window& w,
                                           const Eigen::Vector3d& c, double t, int j) {
  Eigen::Vector3d v = w.derivative(t, j + 1) * c;
  for (int m = 0; m <= j; ++m)
    v += static_cast<double>(binom(j, m)) *
         xi.derivative(t, m).cross(w.derivative(t, j - m) * c);
  return v;
}

/// Sampled curve of order-k jets from an analytic reduced curve (group slots
/// left at identity; fine for invariant Lagrangians).
inline SampledCurve sample_curve(const TrigCurve& xi, int order, double t0, double h, int nodes) {
  SampledCurve c;
  c.t0 = t0;
  c.h = h;
  c.nodes.reserve(nodes);
  for (int n = 0; n < nodes; ++n) {
    HigherJet jet;
    jet.xi.resize(order);
    for (int i = 0; i < order; ++i) jet.xi[i] = xi.derivative(t0 + n * h, i);
    c.nodes.push_back(std::move(jet));
  }
  return c;
}

/// l = 1/2 sum_i <xi^(i), M_i xi^(i)> with analytic partials; the M_i are
/// seeded random symmetric positive definite matrices.
inline LagrangianDef quadratic_lagrangian(int order, std::mt19937_64& rng) {
  auto mats = std::make_shared<std::vector<Eigen::Matrix3d>>();
  std::uniform_real_distribution<double> unif(-0.3, 0.3);
  for (int i = 0; i < order; ++i) {
    Eigen::Matrix3d s;
    for (int r = 0; r < 3; ++r)
      for (int cc = 0; cc < 3; ++cc) s(r, cc) = unif(rng);
    mats->push_back(Eigen::Matrix3d::Identity() + s * s.transpose());
  }
  LagrangianDef lag;
  lag.order = order;
  lag.eval = [mats, order](const HigherJet& jet) {
    double v = 0.0;
    for (int i = 0; i < order; ++i) v += 0.5 * jet.xi[i].dot((*mats)[i] * Eigen::Vector3d(jet.xi[i]));
    return v;
  };
  lag.d_xi = [mats](const HigherJet& jet, int i) {
    return DualVector((*mats)[i] * Eigen::Vector3d(jet.xi[i]));
  };
  lag.d_group = [](const HigherJet&) { return DualVector::Zero(3); };
  return lag;
}

/// Independent oracle for the Euler-Poincare residual: for variations
/// delta xi = eta' + [xi, eta] with eta = w(t) c compactly supported in
/// [0, T], the first variation of the action satisfies
///   dA/deps = -integral <residual, eta> dt.
/// Returns the worst absolute discrepancy between the two sides over
/// `directions` random choices of c.
inline double ep_action_gradient_discrepancy(const LieAlgebraSpec& spec, const LagrangianDef& lag,
                                             const TrigCurve& xi, double T, double h,
                                             std::mt19937_64& rng, int directions = 3) {
  const int k = lag.order;
  const int nodes = static_cast<int>(std::lround(T / h)) + 1;
  const SampledCurve curve = sample_curve(xi, k, 0.0, h, nodes);
  const Series res = euler_poincare_residual(spec, curve, lag);
  const Sin6Window win{T};

  double worst = 0.0;
  for (int dir = 0; dir < directions; ++dir) {
    const Eigen::Vector3d c = random_vec3(rng, 1.0);

    const double eps = 1e-4;
    auto action = [&](double e) {
      double a = 0.0;
      for (int n = 0; n < nodes; ++n) {
        const double t = n * h;
        HigherJet jet;
        jet.xi.resize(k);
        for (int i = 0; i < k; ++i)
          jet.xi[i] = xi.derivative(t, i) + e * delta_xi_derivative(xi, win, c, t, i);
        const double w = (n == 0 || n == nodes - 1) ? 0.5 : 1.0;
        a += w * h * lag.eval(jet);
      }
      return a;
    };
    const double da = (action(eps) - action(-eps)) / (2.0 * eps);

    double pairing_integral = 0.0;
    for (int n = res.offset; n <= res.last_node(); ++n) {
      const double t = n * h;
      const double w = (n == res.offset || n == res.last_node()) ? 0.5 : 1.0;
      pairing_integral += w * h * res.at_node(n).dot(win.derivative(t, 0) * c);
    }
    worst = std::max(worst, std::abs(da + pairing_integral));
  }
  return worst;
}

}  // namespace testutil
