// focklab - experiment runner tying the library modules to configs and
// report files.  Exit codes: 0 all assertions pass, 1 assertion failure,
// 2 usage or configuration error.

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "focklab/config.hpp"
#include "focklab/equivalence.hpp"
#include "focklab/expanded_fock.hpp"
#include "focklab/lattice_field.hpp"
#include "focklab/serialize.hpp"

using namespace focklab;

namespace {

struct CheckLine {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

struct Reporter {
  std::string subcommand;
  uint64_t seed = 0;
  std::string config_echo = "{}";  // JSON fragment
  std::vector<CheckLine> checks;

  bool check(const std::string& name, double value, double tolerance) {
    bool ok = value <= tolerance;
    checks.push_back({name, value, tolerance, ok});
    return ok;
  }
  void record(const std::string& name, double value) {
    // informational: recorded with an infinite budget, never fails
    checks.push_back({name, value, std::numeric_limits<double>::infinity(),
                      true});
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  std::string to_json() const {
    std::string out = "{\"version\":\"";
    out += kFocklabVersion;
    out += "\",\"subcommand\":\"" + subcommand + "\"";
    out += ",\"seed\":" + std::to_string(seed);
    out += ",\"config\":" + config_echo;
    out += ",\"checks\":[";
    for (size_t i = 0; i < checks.size(); ++i) {
      if (i) out += ',';
      out += "{\"name\":\"" + json_escape(checks[i].name) + "\"";
      out += ",\"value\":" + format_double(checks[i].value);
      out += ",\"tolerance\":" + format_double(checks[i].tolerance);
      out += ",\"pass\":";
      out += checks[i].pass ? "true" : "false";
      out += '}';
    }
    out += "],\"pass\":";
    out += all_pass() ? "true" : "false";
    out += "}\n";
    return out;
  }

  std::string to_csv() const {
    std::string out = "name,value,tolerance,pass\n";
    for (const auto& c : checks) {
      out += c.name + ',' + format_double(c.value) + ',' +
             format_double(c.tolerance) + ',' + (c.pass ? "true" : "false") +
             '\n';
    }
    return out;
  }
};

void emit(const Reporter& rep, const std::string& out_path,
          const std::string& format) {
  std::string body = format == "csv" ? rep.to_csv() : rep.to_json();
  if (out_path.empty())
    std::cout << body;
  else
    write_file(out_path, body);
}

ClassicalPoly random_poly(std::mt19937_64& rng, unsigned modes,
                          unsigned max_degree, unsigned terms) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<unsigned> mode(1, modes);
  std::uniform_int_distribution<unsigned> kind(0, 1);
  std::uniform_int_distribution<unsigned> deg(1, max_degree);
  ClassicalPoly f(modes);
  for (unsigned t = 0; t < terms; ++t) {
    unsigned total = deg(rng);
    Exponents e;
    for (unsigned k = 0; k < total; ++k) {
      Var v = kind(rng) ? phi_var(mode(rng)) : pi_var(mode(rng));
      ++e[v];
    }
    f.add_term(e, coeff(rng));
  }
  return f;
}

int run_verify_algebra(unsigned modes, unsigned max_degree, unsigned trials,
                       uint64_t seed, const std::string& out,
                       const std::string& format) {
  Reporter rep;
  rep.subcommand = "verify-algebra";
  rep.seed = seed;
  rep.config_echo = "{\"modes\":" + std::to_string(modes) +
                    ",\"max_degree\":" + std::to_string(max_degree) +
                    ",\"trials\":" + std::to_string(trials) + "}";

  double worst_ccr = 0;
  unsigned nccr = std::max(3u, modes);
  for (unsigned j = 1; j <= 3; ++j)
    for (unsigned k = 1; k <= 3; ++k) {
      Complex delta = j == k ? Complex(0.0, 0.5) : Complex(0.0, 0.0);
      OperatorPoly diff = commutator(phi_op(j, nccr), pi_op(k, nccr)) -
                          OperatorPoly::identity(nccr) * delta;
      worst_ccr = std::max(worst_ccr, diff.max_coeff());
    }
  rep.check("ccr_pair_commutators", worst_ccr, 0.0);

  double worst_pow = 0;
  for (unsigned m = 1; m <= 5; ++m) {
    OperatorPoly phim = OperatorPoly::identity(1);
    for (unsigned r = 0; r < m; ++r) phim = phim * phi_op(1, 1);
    OperatorPoly phim1 = OperatorPoly::identity(1);
    for (unsigned r = 0; r + 1 < m; ++r) phim1 = phim1 * phi_op(1, 1);
    OperatorPoly diff = commutator(phim, pi_op(1, 1)) -
                        phim1 * Complex(0.0, 0.5 * m);
    worst_pow = std::max(worst_pow, diff.max_coeff());
  }
  rep.check("ccr_power_rule", worst_pow, 0.0);

  std::mt19937_64 rng(seed);
  double worst_bracket = 0;
  for (unsigned t = 0; t < trials; ++t) {
    ClassicalPoly f = random_poly(rng, modes, max_degree, 4);
    std::uniform_int_distribution<unsigned> mode(1, modes);
    unsigned j = mode(rng);
    worst_bracket = std::max(
        worst_bracket,
        check_bracket_identity(f, j, BracketSide::Phi, modes).max_coeff());
    worst_bracket = std::max(
        worst_bracket,
        check_bracket_identity(f, j, BracketSide::Pi, modes).max_coeff());
  }
  rep.check("bracket_identity_trials", worst_bracket, kSymbolicZeroTol);

  emit(rep, out, format);
  return rep.all_pass() ? 0 : 1;
}

int run_encode(const ExperimentConfig& cfg, const std::string& out,
               const std::string& format) {
  Reporter rep;
  rep.subcommand = "encode";
  rep.seed = cfg.seed;
  Ensemble ens = realize_ensemble(cfg);
  rep.config_echo = "{\"modes\":" + std::to_string(cfg.modes) +
                    ",\"cutoff\":" + std::to_string(cfg.cutoff) +
                    ",\"ensemble\":" + ensemble_to_json(ens) + "}";

  FockSpace space(cfg.modes, cfg.cutoff);
  Eigen::MatrixXcd rho = density_matrix(space, ens);
  rep.check("density_trace_deviation", std::abs(rho.trace() - 1.0), 1e-10);
  rep.check("density_hermiticity", (rho - rho.adjoint()).norm(), 1e-12);

  double worst_moment = 0;
  for (unsigned j = 1; j <= cfg.modes; ++j) {
    Eigen::MatrixXcd Phi = realize(space, phi_op(j, cfg.modes));
    Eigen::MatrixXcd Pi = realize(space, pi_op(j, cfg.modes));
    double cphi = 0, cpi = 0;
    for (size_t k = 0; k < ens.points.size(); ++k) {
      cphi += ens.weights[k] * ens.points[k].phi(j - 1);
      cpi += ens.weights[k] * ens.points[k].pi(j - 1);
    }
    worst_moment =
        std::max(worst_moment, std::abs(expectation(rho, Phi).real() - cphi));
    worst_moment =
        std::max(worst_moment, std::abs(expectation(rho, Pi).real() - cpi));
  }
  rep.check("first_moment_traces", worst_moment, cfg.tolerance);

  if (!cfg.hamiltonian.empty()) {
    ClassicalPoly H = parse_poly(cfg.hamiltonian);
    Eigen::MatrixXcd Hn = realize(space, quantize_normal(H, cfg.modes));
    double classical = classical_expectation(ens, H);
    rep.check("normal_product_trace",
              std::abs(expectation(rho, Hn).real() - classical),
              cfg.tolerance);
  }

  emit(rep, out, format);
  return rep.all_pass() ? 0 : 1;
}

int run_compare(const ExperimentConfig& cfg, const std::string& out,
                const std::string& format) {
  EquivalenceConfig ecfg = to_equivalence_config(cfg);
  if (ecfg.hamiltonian.empty())
    throw ConfigError("compare needs a hamiltonian", "/hamiltonian");
  EquivalenceReport report = compare_trajectories(ecfg);
  std::string body =
      format == "csv" ? report_to_csv(report) : report_to_json(report);
  if (out.empty())
    std::cout << body;
  else
    write_file(out, body);

  if (report.truncated_early) {
    std::cerr << "compare: " << report.diagnostic << "\n";
    return 1;
  }
  ClassicalPoly H = parse_poly(ecfg.hamiltonian);
  // the full-time gap is an assertion only for quadratic Hamiltonians;
  // beyond that it is a measurement
  if (H.degree() <= 2 && report.max_gap() > cfg.tolerance) {
    std::cerr << "compare: max gap " << report.max_gap() << " exceeds "
              << cfg.tolerance << "\n";
    return 1;
  }
  return 0;
}

int run_expanded(unsigned cutoff, const std::string& out,
                 const std::string& format) {
  Reporter rep;
  rep.subcommand = "expanded";
  rep.config_echo = "{\"cutoff\":" + std::to_string(cutoff) + "}";

  // conjugation residual of the reification on a single register
  {
    FockSpace single(1, cutoff);
    Eigen::MatrixXd X = reification_X(single);
    Eigen::VectorXd mask = single.interior_mask(2);
    Eigen::MatrixXcd A = realize(single, OperatorPoly::generator(ann(1), 1));
    double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd r1 = X * A - s * (A + A.adjoint()) * X;
    Eigen::MatrixXcd r2 = X * A.adjoint() - s * (A.adjoint() - A) * X;
    double worst =
        std::max((mask.asDiagonal() * r1 * mask.asDiagonal()).norm(),
                 (mask.asDiagonal() * r2 * mask.asDiagonal()).norm());
    rep.check("reification_conjugation_interior", worst, 1e-6);
  }

  Eigen::VectorXd w(1);
  w << 1.0;
  // finite-difference validation of the gain generator, free and quartic
  for (const char* inter : {"0", "0.25*phi1^4"}) {
    SecondOrderSystem sys = make_second_order(w, parse_poly(inter) * 1.0);
    HamiltonianSystem first = second_order_system(sys);
    FockSpace space = expanded_space(1, 16);
    GainOperators gv = gain_operators(sys, GainPicture::V);
    const double h = 1e-4;
    PhasePoint p0{Eigen::VectorXd::Constant(1, 1.0),
                  Eigen::VectorXd::Zero(1)};
    Eigen::VectorXcd v = encode_v(space, p0);
    Eigen::VectorXcd fd = (encode_v(space, rk4_step(first, p0, h)) -
                           encode_v(space, rk4_step(first, p0, -h))) /
                          (2.0 * h);
    double resid = (fd - apply(space, gv.total, v)).norm() / v.norm();
    rep.check(std::string("gain_finite_difference_") +
                  (sys.f.is_zero() ? "harmonic" : "quartic"),
              resid, 1e-5);
  }

  // z-picture generator is antiHermitian on the interior
  {
    SecondOrderSystem sys = make_second_order(w, parse_poly("0.1*phi1^4"));
    FockSpace space = expanded_space(1, 16);
    Eigen::MatrixXcd G =
        realize(space, gain_operators(sys, GainPicture::Z).total);
    Eigen::VectorXd mask = space.interior_mask(4);
    rep.check("z_gain_antihermitian_interior",
              (mask.asDiagonal() * (G + G.adjoint()) * mask.asDiagonal())
                  .norm(),
              1e-8);
  }

  // encoded points are eigenvectors of H_v at the classical energy
  {
    SecondOrderSystem sys = make_second_order(w, parse_poly("0.25*phi1^4"));
    HamiltonianSystem first = second_order_system(sys);
    FockSpace space = expanded_space(1, 20);
    Eigen::MatrixXcd Hv = realize(space, build_Hv(sys));
    double worst = 0;
    for (auto [phi, phidot] : {std::pair{1.0, 0.0}, {0.5, 0.3}}) {
      PhasePoint p{Eigen::VectorXd::Constant(1, phi),
                   Eigen::VectorXd::Constant(1, phidot)};
      EnergyClassification c =
          classify_energy_operator(Hv, {encode_v(space, p)});
      worst = std::max(worst, c.lambda_residuals[0]);
      worst = std::max(
          worst, std::fabs(c.energies[0] - system_energy(first, p)));
    }
    rep.check("Hv_classical_eigenvalue", worst, 1e-6);
  }

  // equilibrium encodings are stationary under the gain
  {
    SecondOrderSystem dw =
        make_second_order(w, parse_poly("0.25*phi1^4 - 0.68*phi1^2"));
    FockSpace space = expanded_space(1, 20);
    PhasePoint eq{Eigen::VectorXd::Constant(1, 0.6),
                  Eigen::VectorXd::Zero(1)};
    EquilibriumResidual r = equilibrium_gain_check(space, dw, eq);
    rep.check("equilibrium_gain_v", r.v_picture, 1e-6);
    rep.check("equilibrium_gain_z", r.z_picture, 1e-6);
  }

  emit(rep, out, format);
  return rep.all_pass() ? 0 : 1;
}

int run_lattice(const ExperimentConfig& cfg, const std::string& out,
                const std::string& format) {
  LatticeSpec spec;
  if (cfg.lattice) {
    spec = *cfg.lattice;
  } else {
    spec.d = 1;
    spec.M = 3;
    spec.dx = 1.0;
    spec.fields = 1;
    spec.masses = Eigen::VectorXd::Constant(1, 1.0);
  }
  unsigned cutoff = cfg.cutoff > 10 ? 10 : cfg.cutoff;

  Reporter rep;
  rep.subcommand = "lattice";
  rep.seed = cfg.seed;
  rep.config_echo = "{\"d\":" + std::to_string(spec.d) +
                    ",\"M\":" + std::to_string(spec.M) +
                    ",\"dx\":" + format_double(spec.dx) +
                    ",\"fields\":" + std::to_string(spec.fields) +
                    ",\"cutoff\":" + std::to_string(cutoff) + "}";

  FockSpace space = lattice_space(spec, cutoff);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::vector<LatticeState> samples;
  for (int k = 0; k < 4; ++k) {
    LatticeState s = zero_state(spec);
    for (Eigen::Index j = 0; j < s.phi.rows(); ++j)
      for (Eigen::Index x = 0; x < s.phi.cols(); ++x) {
        s.phi(j, x) = u(rng);
        s.pi(j, x) = u(rng);
      }
    samples.push_back(s);
  }
  CalibrationResult cal = calibrate_c(spec, space, samples);
  rep.check("calibration_residual", cal.residual, 1e-6);
  rep.check("calibration_vs_continuum",
            std::fabs(cal.c - continuum_c(spec)), 1e-6);

  // site expectations on a fresh state at the calibrated c
  {
    LatticeState s = zero_state(spec);
    for (Eigen::Index j = 0; j < s.phi.rows(); ++j)
      for (Eigen::Index x = 0; x < s.phi.cols(); ++x) {
        s.phi(j, x) = 2.0 * u(rng);
        s.pi(j, x) = 2.0 * u(rng);
      }
    rep.check("site_expectation_residual",
              encoding_residual(spec, space, {s}, cal.c), 1e-6);
  }

  // functional commutator identity with the kinetic density
  {
    ClassicalPoly kinetic(spec.fields * unsigned(site_count(spec)));
    for (unsigned j = 1; j <= spec.fields; ++j)
      for (size_t x = 0; x < site_count(spec); ++x)
        kinetic.add_term({{lattice_pi_var(spec, j, x), 2u}}, 0.5);
    rep.check("functional_commutator",
              functional_commutator_check(spec, space, kinetic, 1, 0), 1e-6);
  }

  // leapfrog frequency against the dispersion weight
  {
    auto grid = momentum_grid(spec);
    size_t pidx = grid.size() - 1;  // a nonzero momentum on M >= 2 grids
    double p2 = grid[pidx].squaredNorm();
    double wp = std::sqrt(spec.masses(0) * spec.masses(0) + p2);
    LatticeState s = zero_state(spec);
    for (size_t x = 0; x < site_count(spec); ++x)
      s.phi(0, x) =
          0.3 * std::cos(grid[pidx].dot(site_position(spec, x)));
    ClassicalPoly none = ClassicalPoly::constant(
        0.0, spec.fields * unsigned(site_count(spec)));
    double dt = 0.005;
    std::vector<double> uproj;
    LatticeState cur = s;
    auto project = [&](const LatticeState& st) {
      double acc = 0;
      for (size_t x = 0; x < site_count(spec); ++x)
        acc += st.phi(0, x) *
               std::cos(grid[pidx].dot(site_position(spec, x)));
      return acc;
    };
    uproj.push_back(project(cur));
    unsigned steps =
        static_cast<unsigned>(std::lround(10.0 * 2.0 * M_PI / wp / dt));
    for (unsigned k = 0; k < steps; ++k) {
      cur = leapfrog_evolve(spec, none, cur, dt, 1);
      uproj.push_back(project(cur));
    }
    double west = 0;
    int counted = 0;
    for (size_t k = 1; k + 1 < uproj.size(); k += 37) {
      if (std::fabs(uproj[k]) < 0.1) continue;
      west += std::acos((uproj[k + 1] + uproj[k - 1]) / (2.0 * uproj[k])) / dt;
      ++counted;
    }
    west /= std::max(counted, 1);
    rep.check("leapfrog_dispersion", std::fabs(west - wp), 1e-4);
  }

  emit(rep, out, format);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical-field ensembles on truncated Fock space"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "json";
  uint64_t seed = 0;
  bool seed_set = false;
  unsigned modes = 2, cutoff = 0, max_degree = 4, trials = 100;
  double t_max = -1, dt = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file (TOML or JSON)");
    cmd->add_option("--out", out_path, "report output path (default stdout)");
    cmd->add_option("--seed", seed, "random seed override")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* verify = app.add_subcommand(
      "verify-algebra", "symbolic commutator and bracket identity suites");
  add_common(verify);
  verify->add_option("--modes", modes, "mode count for random polynomials");
  verify->add_option("--max-degree", max_degree, "maximum polynomial degree");
  verify->add_option("--trials", trials, "number of random trials");

  CLI::App* encode = app.add_subcommand(
      "encode", "ensemble encodings and trace identities");
  add_common(encode);
  encode->add_option("--modes", modes, "mode count override");
  encode->add_option("--cutoff", cutoff, "occupation cutoff override");

  CLI::App* compare = app.add_subcommand(
      "compare", "classical vs Heisenberg trajectory comparison");
  add_common(compare);
  compare->add_option("--modes", modes, "mode count override");
  compare->add_option("--cutoff", cutoff, "occupation cutoff override");
  compare->add_option("--t-max", t_max, "evolution horizon override");
  compare->add_option("--dt", dt, "classical step override");

  CLI::App* expanded = app.add_subcommand(
      "expanded", "doubled-register encodings, reification, gain operators");
  add_common(expanded);
  expanded->add_option("--cutoff", cutoff, "occupation cutoff override");

  CLI::App* lattice = app.add_subcommand(
      "lattice", "periodic lattice encodings, calibration, dynamics");
  add_common(lattice);
  lattice->add_option("--cutoff", cutoff, "occupation cutoff override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (seed_set) cfg.seed = seed;
    if (encode->parsed() || compare->parsed()) {
      if (encode->count("--modes") || compare->count("--modes"))
        cfg.modes = modes;
    }
    if (cutoff > 0 &&
        (encode->count("--cutoff") || compare->count("--cutoff") ||
         expanded->count("--cutoff") || lattice->count("--cutoff")))
      cfg.cutoff = cutoff;
    if (t_max >= 0 && compare->count("--t-max")) cfg.t_max = t_max;
    if (dt > 0 && compare->count("--dt")) cfg.dt = dt;

    if (verify->parsed())
      return run_verify_algebra(modes, max_degree, trials,
                                seed_set ? seed : cfg.seed, out_path, format);
    if (encode->parsed()) return run_encode(cfg, out_path, format);
    if (compare->parsed()) return run_compare(cfg, out_path, format);
    if (expanded->parsed())
      return run_expanded(expanded->count("--cutoff") ? cutoff : 24, out_path,
                          format);
    if (lattice->parsed()) return run_lattice(cfg, out_path, format);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "hamiltonian parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
