#pragma once

// Declarative scenario layer behind the command-line tool: flat key = value
// configs, dispatch to the solvers, CSV trajectory tables (17 significant
// digits, LF) and a JSON summary with solver statistics.

#include "discrete.hpp"
#include "ocp.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace lievar {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string kind;
  std::map<std::string, std::string> raw;

  bool has(const std::string& key) const { return raw.count(key) > 0; }

  std::string get_string(const std::string& key) const {
    auto it = raw.find(key);
    if (it == raw.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  }

  double get_real(const std::string& key) const {
    const std::string s = get_string(key);
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw ConfigError("trailing characters in value for " + key);
      return v;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("cannot parse real for key " + key + ": '" + s + "'");
    }
  }

  double get_real_or(const std::string& key, double fallback) const {
    return has(key) ? get_real(key) : fallback;
  }

  long long get_int(const std::string& key) const {
    const double v = get_real(key);
    if (v != std::floor(v)) throw ConfigError("expected an integer for key " + key);
    return static_cast<long long>(v);
  }

  long long get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  Eigen::VectorXd get_reals(const std::string& key, int count) const {
    std::string s = get_string(key);
    for (char& c : s)
      if (c == ',') c = ' ';
    std::istringstream in(s);
    Eigen::VectorXd v(count);
    for (int i = 0; i < count; ++i)
      if (!(in >> v(i))) throw ConfigError("expected " + std::to_string(count) + " reals for key " + key);
    double extra;
    if (in >> extra) throw ConfigError("too many values for key " + key);
    return v;
  }

  Eigen::Vector3d get_triple(const std::string& key) const {
    return Eigen::Vector3d(get_reals(key, 3));
  }

  Eigen::Vector3d get_triple_or(const std::string& key, const Eigen::Vector3d& fallback) const {
    return has(key) ? get_triple(key) : fallback;
  }

  GroupElement get_matrix(const std::string& key) const {
    const Eigen::VectorXd v = get_reals(key, 9);
    GroupElement r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = v(3 * i + j);  // row-major
    if (!is_rotation(r, 1e-8)) throw ConfigError("matrix for key " + key + " is not a rotation");
    return r;
  }

  GroupElement get_matrix_or(const std::string& key, const GroupElement& fallback) const {
    return has(key) ? get_matrix(key) : fallback;
  }
};

inline ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (cfg.raw.count(key)) throw ConfigError("duplicate config key: " + key);
    cfg.raw[key] = val;
  }
  if (!cfg.raw.count("kind")) throw ConfigError("missing config key: kind");
  cfg.kind = cfg.raw["kind"];
  static const char* kinds[] = {"free_body",      "lie_poisson",  "dae_flow",
                                "ocp_rigid_body", "discrete_bvp", "euler_poincare_check"};
  bool known = false;
  for (const char* k : kinds) known = known || cfg.kind == k;
  if (!known) throw ConfigError("unknown scenario kind: " + cfg.kind);
  return cfg;
}

inline ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// ---------------------------------------------------------------------------
// CSV assembly

class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> columns) : ncols_(columns.size()) {
    for (size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ += ',';
      out_ += columns[i];
    }
    out_ += '\n';
  }

  void row(const std::vector<double>& values) {
    if (values.size() != ncols_) throw std::logic_error("CsvBuilder: column count mismatch");
    char buf[32];
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) out_ += ',';
      std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
      out_ += buf;
    }
    out_ += '\n';
    ++nrows_;
  }

  const std::string& text() const { return out_; }
  int rows() const { return nrows_; }

 private:
  size_t ncols_;
  std::string out_;
  int nrows_ = 0;
};

struct RunOutput {
  std::string csv;
  nlohmann::ordered_json summary;
};

namespace detail {

// floor(horizon/step) up to roundoff in the quotient, so a clean ratio like
// 10 / 1e-3 lands on the mathematical value.
inline int step_count(double horizon, double step) {
  if (!(step > 0.0) || !(horizon > 0.0)) throw ConfigError("horizon and step must be positive");
  const int n = static_cast<int>(std::floor(horizon / step * (1.0 + 1e-12)));
  if (n < 1) throw ConfigError("horizon shorter than one step");
  return n;
}

inline nlohmann::ordered_json config_echo(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  for (const auto& kv : cfg.raw) j[kv.first] = kv.second;
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scenario runners

inline RunOutput run_free_body(const ScenarioConfig& cfg, double step) {
  const Eigen::Vector3d inertia = cfg.get_triple("inertia");
  if (!(inertia.minCoeff() > 0.0)) throw ConfigError("inertia components must be positive");
  const Eigen::Vector3d omega0 = cfg.get_triple("omega0");
  const double horizon = cfg.get_real("horizon");
  const int nsteps = detail::step_count(horizon, step);

  const auto spec = LieAlgebraSpec::so3();
  // State: (g, Pi) with Pi = I Omega; dPi/dt = Pi x Omega.
  GroupRhs rhs = [inertia](double, const GroupState& s) {
    const Eigen::Vector3d pi = s.y;
    const Eigen::Vector3d omega = inertia.cwiseInverse().cwiseProduct(pi);
    GroupStateDeriv d;
    d.g_dir = omega;
    d.y_dot = pi.cross(omega);
    return d;
  };
  GroupState s0;
  s0.y = inertia.cwiseProduct(omega0);
  const auto traj = flow_ode(spec, rhs, 0.0, s0, step, nsteps);

  CsvBuilder csv({"t", "Omega1", "Omega2", "Omega3", "energy", "casimir"});
  auto energy_of = [&](const Eigen::Vector3d& pi) {
    const Eigen::Vector3d omega = inertia.cwiseInverse().cwiseProduct(pi);
    return 0.5 * omega.dot(inertia.cwiseProduct(omega));
  };
  const double e0 = energy_of(s0.y), c0 = s0.y.squaredNorm();
  double max_e_drift = 0.0, max_c_drift = 0.0, max_ortho = 0.0;
  for (int n = 0; n < static_cast<int>(traj.size()); ++n) {
    const Eigen::Vector3d pi = traj[n].y;
    const Eigen::Vector3d omega = inertia.cwiseInverse().cwiseProduct(pi);
    const double e = energy_of(pi), c = pi.squaredNorm();
    max_e_drift = std::max(max_e_drift, std::abs(e - e0) / std::abs(e0));
    max_c_drift = std::max(max_c_drift, std::abs(c - c0) / std::abs(c0));
    max_ortho = std::max(max_ortho, (traj[n].g.transpose() * traj[n].g - GroupElement::Identity()).norm());
    csv.row({n * step, omega(0), omega(1), omega(2), e, c});
  }

  RunOutput out;
  out.csv = csv.text();
  out.summary = {{"kind", "free_body"},
                 {"config", detail::config_echo(cfg)},
                 {"rows", csv.rows()},
                 {"max_relative_energy_drift", max_e_drift},
                 {"max_relative_casimir_drift", max_c_drift},
                 {"max_orthogonality_defect", max_ortho}};
  return out;
}

inline RunOutput run_lie_poisson(const ScenarioConfig& cfg, double step) {
  const Eigen::Vector3d inertia = cfg.get_triple("inertia");
  if (!(inertia.minCoeff() > 0.0)) throw ConfigError("inertia components must be positive");
  const Eigen::Vector3d pi0 = cfg.get_triple_or("pi0", inertia.cwiseProduct(cfg.get_triple("omega0")));
  const double horizon = cfg.get_real("horizon");
  const int nsteps = detail::step_count(horizon, step);

  const auto spec = LieAlgebraSpec::so3();
  auto ham = [inertia](const DualVector& pi) {
    return 0.5 * pi.dot(Eigen::VectorXd(inertia.cwiseInverse().asDiagonal() * pi));
  };
  GroupRhs rhs = [&spec, &ham](double, const GroupState& s) {
    GroupStateDeriv d;
    d.g_dir = AlgebraVector::Zero(3);
    d.y_dot = lie_poisson_rhs(spec, ham, s.y);
    return d;
  };
  GroupState s0;
  s0.y = pi0;
  const auto traj = flow_ode(spec, rhs, 0.0, s0, step, nsteps);

  CsvBuilder csv({"t", "Pi1", "Pi2", "Pi3", "hamiltonian", "casimir"});
  const double h0 = ham(pi0), c0 = pi0.squaredNorm();
  double max_h_drift = 0.0, max_c_drift = 0.0;
  for (int n = 0; n < static_cast<int>(traj.size()); ++n) {
    const double h = ham(traj[n].y), c = traj[n].y.squaredNorm();
    max_h_drift = std::max(max_h_drift, std::abs(h - h0) / std::abs(h0));
    max_c_drift = std::max(max_c_drift, std::abs(c - c0) / std::abs(c0));
    csv.row({n * step, traj[n].y(0), traj[n].y(1), traj[n].y(2), h, c});
  }

  RunOutput out;
  out.csv = csv.text();
  out.summary = {{"kind", "lie_poisson"},
                 {"config", detail::config_echo(cfg)},
                 {"rows", csv.rows()},
                 {"max_relative_hamiltonian_drift", max_h_drift},
                 {"max_relative_casimir_drift", max_c_drift}};
  return out;
}

/// Second-order acceleration Lagrangian l = 1/2 |xi'|^2 with analytic
/// partials; the workhorse of the k = 2 scenarios.
inline LagrangianDef acceleration_lagrangian() {
  LagrangianDef lag;
  lag.order = 2;
  lag.eval = [](const HigherJet& jet) { return 0.5 * jet.xi[1].squaredNorm(); };
  lag.d_xi = [](const HigherJet& jet, int i) {
    return i == 1 ? DualVector(jet.xi[1]) : DualVector(DualVector::Zero(jet.xi[0].size()));
  };
  lag.d_group = [](const HigherJet& jet) { return DualVector::Zero(jet.xi[0].size()); };
  return lag;
}

inline RunOutput run_dae_flow(const ScenarioConfig& cfg, double step) {
  const Eigen::Vector3d xi0 = cfg.get_triple("xi0");
  const Eigen::Vector3d xidot0 = cfg.get_triple("xidot0");
  const Eigen::Vector3d xiddot0 = cfg.get_triple_or("xiddot0", Eigen::Vector3d::Zero());
  const double horizon = cfg.get_real("horizon");
  const int nsteps = detail::step_count(horizon, step);

  const auto spec = LieAlgebraSpec::so3();
  const LagrangianDef lag = acceleration_lagrangian();
  PontryaginPoint p0;
  p0.jet.g = cfg.get_matrix_or("g0", GroupElement::Identity());
  p0.jet.xi = {xi0, xidot0};
  p0.alpha = {DualVector(-xiddot0), DualVector(xidot0)};  // Legendre: alpha1 = xi', alpha0 = -xi''

  DaeFlowResult res;
  try {
    res = flow_dae_W1(spec, lag, p0, 0.0, step, nsteps);
  } catch (const std::exception& e) {
    throw SolverError(e.what());
  }

  CsvBuilder csv({"t", "xi1", "xi2", "xi3", "xidot1", "xidot2", "xidot3", "alpha0_1", "alpha0_2",
                  "alpha0_3", "alpha1_1", "alpha1_2", "alpha1_3"});
  for (int n = 0; n < static_cast<int>(res.points.size()); ++n) {
    const auto& p = res.points[n];
    csv.row({n * step, p.jet.xi[0](0), p.jet.xi[0](1), p.jet.xi[0](2), p.jet.xi[1](0),
             p.jet.xi[1](1), p.jet.xi[1](2), p.alpha[0](0), p.alpha[0](1), p.alpha[0](2),
             p.alpha[1](0), p.alpha[1](1), p.alpha[1](2)});
  }

  RunOutput out;
  out.csv = csv.text();
  out.summary = {{"kind", "dae_flow"},
                 {"config", detail::config_echo(cfg)},
                 {"rows", csv.rows()},
                 {"max_constraint_drift", res.max_constraint_drift},
                 {"reprojections", res.reprojections}};
  return out;
}

inline RunOutput run_ocp_rigid_body(const ScenarioConfig& cfg, double step, std::uint64_t seed) {
  RigidBodyScenario sc;
  sc.inertia = cfg.get_triple_or("inertia", Eigen::Vector3d::Ones());
  if (!(sc.inertia.minCoeff() > 0.0)) throw ConfigError("inertia components must be positive");
  sc.c1 = cfg.get_real("c1");
  sc.c2 = cfg.get_real("c2");
  if (sc.c1 < 0.0 || sc.c2 < 0.0) throw ConfigError("cost weights must be nonnegative");
  sc.r0 = cfg.get_matrix_or("r0", GroupElement::Identity());
  sc.rf = cfg.get_matrix_or("rf", GroupElement::Identity());
  sc.omega0 = cfg.get_triple("omega0");
  sc.omegaf = cfg.get_triple("omegaf");
  sc.tf = cfg.get_real("horizon");
  const int nsteps = detail::step_count(sc.tf, step);

  OcpSolution sol;
  try {
    sol = solve_ocp(sc, nsteps, seed);
  } catch (const SingularOcpError& e) {
    const auto rep = report_singular_ocp(sc);
    throw SolverError(std::string(e.what()) + "\n" + rep.description +
                      " (bordered rank " + std::to_string(rep.hessian_rank) + ")");
  } catch (const std::exception& e) {
    throw SolverError(e.what());
  }

  CsvBuilder csv({"t", "Omega1", "Omega2", "Omega3", "u1", "u2", "half_omega_sq", "half_u_sq"});
  double omega3_span = 0.0, max_phi3 = 0.0;
  for (const auto& node : sol.nodes) {
    omega3_span = std::max(omega3_span, std::abs(node.omega(2) - sol.nodes.front().omega(2)));
    max_phi3 = std::max(max_phi3,
                        std::abs(sc.inertia(2) * node.omega_dot(2) -
                                 (sc.inertia(0) - sc.inertia(1)) * node.omega(0) * node.omega(1)));
    csv.row({node.t, node.omega(0), node.omega(1), node.omega(2), node.u(0), node.u(1),
             0.5 * node.omega.squaredNorm(), 0.5 * node.u.squaredNorm()});
  }

  RunOutput out;
  out.csv = csv.text();
  out.summary = {{"kind", "ocp_rigid_body"},
                 {"config", detail::config_echo(cfg)},
                 {"rows", csv.rows()},
                 {"cost", sol.cost},
                 {"shooting_iterations", sol.shooting.iterations},
                 {"shooting_residual_norm", sol.shooting.residual_norm},
                 {"omega3_span", omega3_span},
                 {"max_phi3_residual", max_phi3}};
  return out;
}

inline RunOutput run_discrete_bvp(const ScenarioConfig& cfg, double /*step ignored: h = horizon/n*/) {
  const int nseg = static_cast<int>(cfg.get_int("n"));
  if (nseg < 5) throw ConfigError("discrete_bvp: need n >= 5 segments");
  const double horizon = cfg.get_real("horizon");
  const double h = horizon / nseg;
  const Eigen::Vector3d a = cfg.get_triple("a");
  const Eigen::Vector3d b = cfg.get_triple_or("b", Eigen::Vector3d::Zero());

  // Reference curve g' = g (a + t b), sampled by fine Munthe-Kaas steps; the
  // boundary node pairs and the initial guess come from it.
  const auto spec = LieAlgebraSpec::so3();
  GroupRhs rhs = [a, b](double t, const GroupState&) {
    GroupStateDeriv d;
    d.g_dir = a + t * b;
    d.y_dot = Eigen::VectorXd();
    return d;
  };
  const int refine = 16;
  GroupState gs;
  gs.y = Eigen::VectorXd();
  const auto fine = flow_ode(spec, rhs, 0.0, gs, h / refine, nseg * refine);

  DiscretePath guess;
  guess.h = h;
  for (int k = 0; k <= nseg; ++k) guess.g.push_back(fine[k * refine].g);

  DiscreteBvpResult res;
  try {
    res = solve_discrete_bvp(guess, log_gap_lagrangian());
  } catch (const std::exception& e) {
    throw SolverError(e.what());
  }
  if (!res.converged) throw SolverError("discrete_bvp: Newton failed, residual " +
                                        std::to_string(res.residual_norm));

  CsvBuilder csv({"t", "r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33",
                  "gap_to_reference"});
  for (int k = 0; k <= nseg; ++k) {
    const GroupElement& g = res.path.g[k];
    const double gap = group_log(GroupElement(fine[k * refine].g.transpose() * g)).norm();
    csv.row({k * h, g(0, 0), g(0, 1), g(0, 2), g(1, 0), g(1, 1), g(1, 2), g(2, 0), g(2, 1),
             g(2, 2), gap});
  }

  RunOutput out;
  out.csv = csv.text();
  out.summary = {{"kind", "discrete_bvp"},
                 {"config", detail::config_echo(cfg)},
                 {"rows", csv.rows()},
                 {"newton_iterations", res.iterations},
                 {"residual_norm", res.residual_norm}};
  return out;
}

inline RunOutput run_euler_poincare_check(const ScenarioConfig& cfg, double step,
                                          std::uint64_t seed) {
  const int k = static_cast<int>(cfg.get_int_or("order", 2));
  if (k < 1 || k > 3) throw ConfigError("euler_poincare_check: order must be 1, 2 or 3");
  const double horizon = cfg.get_real("horizon");
  const int nsteps = detail::step_count(horizon, step);

  // Flow the reduced equation xi^(2k-1) = ad*_xi xi^(2k-2) for
  // l = 1/2 |xi^(k-1)|^2, then re-measure the Euler-Poincare residual of the
  // sampled curve; it should vanish at the differencing order.
  const auto spec = LieAlgebraSpec::so3();
  const int nslots = 2 * k - 1;
  GroupRhs rhs = [&spec, nslots](double, const GroupState& s) {
    GroupStateDeriv d;
    d.g_dir = AlgebraVector::Zero(3);
    d.y_dot.resize(3 * nslots);
    for (int i = 0; i + 1 < nslots; ++i) d.y_dot.segment(3 * i, 3) = s.y.segment(3 * (i + 1), 3);
    d.y_dot.segment(3 * (nslots - 1), 3) =
        spec.ad_star(s.y.segment(0, 3), s.y.segment(3 * (nslots - 1), 3));
    return d;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  GroupState s0;
  s0.y.resize(3 * nslots);
  for (int i = 0; i < s0.y.size(); ++i) s0.y(i) = unif(rng);
  const auto traj = flow_ode(spec, rhs, 0.0, s0, step, nsteps);

  LagrangianDef lag;
  lag.order = k;
  lag.eval = [k](const HigherJet& jet) { return 0.5 * jet.xi[k - 1].squaredNorm(); };
  lag.d_xi = [k](const HigherJet& jet, int i) {
    return i == k - 1 ? DualVector(jet.xi[k - 1]) : DualVector(DualVector::Zero(3));
  };
  lag.d_group = [](const HigherJet&) { return DualVector::Zero(3); };

  SampledCurve curve;
  curve.t0 = 0.0;
  curve.h = step;
  for (const auto& s : traj) {
    HigherJet jet;
    jet.xi.resize(k);
    for (int i = 0; i < k; ++i) jet.xi[i] = s.y.segment(3 * i, 3);
    curve.nodes.push_back(std::move(jet));
  }
  const Series res = euler_poincare_residual(spec, curve, lag);

  CsvBuilder csv({"t", "xi1", "xi2", "xi3", "residual_norm"});
  double max_res = 0.0;
  for (int n = 0; n < curve.size(); ++n) {
    const bool valid = n >= res.offset && n <= res.last_node();
    const double rn = valid ? res.at_node(n).norm() : 0.0;
    max_res = std::max(max_res, rn);
    csv.row({n * step, curve.nodes[n].xi[0](0), curve.nodes[n].xi[0](1), curve.nodes[n].xi[0](2), rn});
  }

  RunOutput out;
  out.csv = csv.text();
  out.summary = {{"kind", "euler_poincare_check"},
                 {"config", detail::config_echo(cfg)},
                 {"rows", csv.rows()},
                 {"order", k},
                 {"max_residual_norm", max_res}};
  return out;
}

inline RunOutput run_scenario(const ScenarioConfig& cfg, std::optional<double> step_override,
                              std::optional<std::uint64_t> seed_override) {
  const double step = step_override ? *step_override
                                    : (cfg.has("step") ? cfg.get_real("step") : 1e-3);
  if (!(step > 0.0)) throw ConfigError("step must be positive");
  const std::uint64_t seed =
      seed_override ? *seed_override : static_cast<std::uint64_t>(cfg.get_int_or("seed", 0));
  if (cfg.kind == "free_body") return run_free_body(cfg, step);
  if (cfg.kind == "lie_poisson") return run_lie_poisson(cfg, step);
  if (cfg.kind == "dae_flow") return run_dae_flow(cfg, step);
  if (cfg.kind == "ocp_rigid_body") return run_ocp_rigid_body(cfg, step, seed);
  if (cfg.kind == "discrete_bvp") return run_discrete_bvp(cfg, step);
  return run_euler_poincare_check(cfg, step, seed);
}

// ---------------------------------------------------------------------------
// Regularity classification

struct ClassifyOutput {
  bool nondegenerate = false;
  int rank = 0;
  int expected_rank = 0;
  std::string probe_description;
};

inline ClassifyOutput classify_scenario(const ScenarioConfig& cfg) {
  ClassifyOutput out;
  HigherJet probe;
  if (cfg.kind == "ocp_rigid_body") {
    auto vak = to_vakonomic(rigid_body_system(cfg.get_triple_or("inertia", Eigen::Vector3d::Ones()),
                                              cfg.get_real("c1"), cfg.get_real("c2")));
    probe.xi = {AlgebraVector(3), AlgebraVector(3)};
    probe.xi[0] << 0.3, -0.2, 0.5;
    probe.xi[1] << 0.1, 0.4, -0.3;
    const auto rep = constrained_regularity_test(vak.lagrangian, vak.constraints, probe);
    out.nondegenerate = rep.nondegenerate;
    out.rank = rep.rank;
    out.expected_rank = static_cast<int>(rep.matrix.rows());
    out.probe_description = "bordered form at xi = (0.3, -0.2, 0.5), xi' = (0.1, 0.4, -0.3)";
    return out;
  }
  if (cfg.kind == "free_body" || cfg.kind == "lie_poisson") {
    const Eigen::Vector3d inertia = cfg.get_triple("inertia");
    LagrangianDef lag;
    lag.order = 1;
    lag.eval = [inertia](const HigherJet& jet) {
      return 0.5 * jet.xi[0].dot(Eigen::VectorXd(inertia.asDiagonal() * jet.xi[0]));
    };
    probe.xi = {AlgebraVector(3)};
    probe.xi[0] << 0.7, -0.1, 0.2;
    const auto rep = regularity_test(lag, probe);
    out.nondegenerate = rep.nondegenerate;
    out.rank = rep.rank;
    out.expected_rank = 3;
    out.probe_description = "velocity Hessian at Omega = (0.7, -0.1, 0.2)";
    return out;
  }
  if (cfg.kind == "dae_flow" || cfg.kind == "euler_poincare_check" || cfg.kind == "discrete_bvp") {
    const LagrangianDef lag = acceleration_lagrangian();
    probe.xi = {AlgebraVector(3), AlgebraVector(3)};
    probe.xi[0] << 0.3, -0.2, 0.5;
    probe.xi[1] << 0.1, 0.4, -0.3;
    const auto rep = regularity_test(lag, probe);
    out.nondegenerate = rep.nondegenerate;
    out.rank = rep.rank;
    out.expected_rank = 3;
    out.probe_description = "top-slot Hessian of l = |xi'|^2/2 at a generic jet";
    return out;
  }
  throw ConfigError("scenario kind does not define a Lagrangian to classify: " + cfg.kind);
}

}  // namespace lievar
