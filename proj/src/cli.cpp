#include "geoflow/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <thread>

#include "CLI11.hpp"

#include "geoflow/analysis.hpp"
#include "geoflow/io.hpp"

namespace geoflow {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitVerify = 3;

struct RunConfig {
  std::string model = "nil";
  std::vector<double> g{0.0, 0.0, 0.0};
  std::vector<double> p;
  double T = 10.0;
  double h = 1e-3;
  std::string scheme = "midpoint";
  int stride = 10;
  std::string lattice = "standard";
  std::int64_t d = 0;
  std::string outdir;
  std::string out = "trajectory";
  std::uint64_t seed = 0;
  int jobs = 1;
  int samples = 5;
  std::string coord = "x";
  double level = 0.0;
  int direction = 1;
  double renorm = 1.0;
  std::string config_path;
};

// flags override config-file values override defaults
void merge_config(const CLI::App& cmd, RunConfig& rc) {
  if (rc.config_path.empty()) return;
  std::ifstream in(rc.config_path);
  if (!in) throw UsageError("cannot read config file " + rc.config_path);
  nlohmann::json cfg;
  in >> cfg;

  auto take = [&](const char* flag, const char* key, auto& target) {
    if (cmd.count(flag) == 0 && cfg.contains(key))
      target = cfg.at(key).get<std::decay_t<decltype(target)>>();
  };
  take("--model", "model", rc.model);
  take("--g", "g", rc.g);
  take("--p", "p", rc.p);
  take("--T", "T", rc.T);
  take("--h", "h", rc.h);
  take("--scheme", "scheme", rc.scheme);
  take("--stride", "stride", rc.stride);
  take("--lattice", "lattice", rc.lattice);
  take("--d", "d", rc.d);
  take("--outdir", "outdir", rc.outdir);
  take("--out", "out", rc.out);
  take("--seed", "seed", rc.seed);
  take("--jobs", "jobs", rc.jobs);
  take("--samples", "samples", rc.samples);
  take("--coord", "coord", rc.coord);
  take("--level", "level", rc.level);
  take("--dir", "dir", rc.direction);
  take("--renorm", "renorm", rc.renorm);
}

std::string output_dir(const RunConfig& rc, const CLI::App& cmd) {
  if (cmd.count("--outdir") > 0 && !rc.outdir.empty()) return rc.outdir;
  if (const char* env = std::getenv("GEOFLOW_OUT"); env && *env) return env;
  if (!rc.outdir.empty()) return rc.outdir;
  return ".";
}

PhaseState initial_state(Model m, const RunConfig& rc) {
  if (rc.p.size() != 3)
    throw UsageError("--p A,B,G (three momentum components) is required");
  if (rc.g.size() != 3) throw UsageError("--g must have three components");
  return {{m, rc.g[0], rc.g[1], rc.g[2]}, {m, rc.p[0], rc.p[1], rc.p[2]}};
}

LatticeSpec resolve_lattice(Model m, const RunConfig& rc) {
  std::int64_t d = rc.d;
  std::string sel = rc.lattice;
  if (sel.rfind("sol:", 0) == 0) {
    d = std::stoll(sel.substr(4));
    sel = "standard";
  }
  if (sel == "e3:cube") sel = "standard";
  if (sel != "standard")
    throw UsageError("unknown lattice selector '" + rc.lattice + "'");
  switch (m) {
    case Model::E3: return e3_standard_lattice();
    case Model::Nil: return nil_standard_lattice();
    case Model::Sol:
      if (d <= 0) throw UsageError("a Sol lattice needs --d (square-free, >= 2)");
      return sol_lattice(d);
  }
  throw UsageError("resolve_lattice: bad model tag");
}

void guard_regular(const Covector& p) {
  if (p.model == Model::Nil && std::abs(p.pg) < kRegularSetGuard)
    throw UsageError(
        "initial momentum lies in the singular set (pG = 0); the Nil suite "
        "needs a regular point");
  if (p.model == Model::Sol && std::abs(p.pb * p.pg) < kRegularSetGuard)
    throw UsageError(
        "initial momentum lies in the singular set (kappa = 0); the Sol "
        "suite needs a regular point");
}

Covector sample_regular_momentum(Model m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    double a = gauss(rng), b = gauss(rng), c = gauss(rng);
    const double n = std::sqrt(a * a + b * b + c * c);
    if (n < 1e-9) continue;
    a /= n;
    b /= n;
    c /= n;  // H = 1/2
    if (m == Model::Nil && std::abs(c) < 0.25) continue;
    if (m == Model::Sol && (std::abs(b) < 0.25 || std::abs(c) < 0.25)) continue;
    return {m, a, b, c};
  }
}

GroupElement sample_group_point(Model m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  return {m, box(rng), box(rng), box(rng)};
}

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& rc, const CLI::App& cmd) {
  const Model m = model_from_name(rc.model);
  const PhaseState s0 = initial_state(m, rc);
  const Scheme scheme = scheme_from_name(rc.scheme);
  const Trajectory traj =
      scheme == Scheme::OracleRK8
          ? oracle_integrate(s0, rc.T, rc.h, rc.stride)
          : integrate(s0, rc.T, rc.h, scheme, rc.stride);
  const std::string dir = output_dir(rc, cmd);
  const std::string csv_path = dir + "/" + rc.out + ".csv";
  const std::string json_path = dir + "/" + rc.out + ".json";
  atomic_write_text(csv_path, trajectory_to_csv(traj));
  atomic_write_text(json_path, trajectory_to_json(traj).dump());
  std::cout << "wrote " << csv_path << " (" << traj.states.size()
            << " rows) and " << json_path << "\n";
  return kExitOk;
}

struct Check {
  std::string name;
  double value;
  double tol;
  bool pass;
};

void record(std::vector<Check>& checks, const std::string& name, double value,
            double tol) {
  checks.push_back({name, value, tol, value <= tol});
}

int cmd_verify(const RunConfig& rc, const CLI::App& cmd) {
  const Model m = model_from_name(rc.model);

  std::vector<double> p0v = rc.p;
  if (p0v.empty()) {
    switch (m) {
      case Model::E3: p0v = {0.6, 0.8, 0.0}; break;
      case Model::Nil: p0v = {0.3, 0.4, 1.0}; break;
      case Model::Sol: p0v = {0.1, 1.0, 1.0}; break;
    }
  }
  const Covector p0{m, p0v[0], p0v[1], p0v[2]};
  guard_regular(p0);

  std::mt19937_64 rng(rc.seed);
  std::vector<PhaseState> ics{{identity(m), p0}};
  for (int i = 1; i < std::max(1, rc.samples); ++i)
    ics.push_back({identity(m), sample_regular_momentum(m, rng)});
  const int n = int(ics.size());

  // per-IC maxima, merged afterwards
  std::vector<double> cross(n, 0.0), energy(n, 0.0), casimir(n, 0.0),
      momentum(n, 0.0), suite_drift(n, 0.0);
  std::vector<std::string> failures(n);

  const IntegralSuite suite = conserved_suite(m);
  const IntegralSuite psi = momentum_suite(m);

  parallel_for(n, rc.jobs, [&](int i) {
    try {
      const PhaseState& s0 = ics[i];
      // scheme cross-validation over a short window
      {
        const Trajectory a = integrate(s0, 10.0, 1e-3, Scheme::ImplicitMidpoint, 10);
        const Trajectory b = oracle_integrate(s0, 10.0, 1e-3, 10);
        double worst = 0.0;
        for (size_t k = 0; k < a.states.size(); ++k) {
          const auto ca = to_canonical(a.states[k]);
          const auto cb = to_canonical(b.states[k]);
          const auto pa = a.states[k], pb = b.states[k];
          worst = std::max({worst, std::abs(pa.g.x - pb.g.x),
                            std::abs(pa.g.y - pb.g.y),
                            std::abs(pa.g.z - pb.g.z),
                            std::abs(pa.p.pa - pb.p.pa),
                            std::abs(pa.p.pb - pb.p.pb),
                            std::abs(pa.p.pg - pb.p.pg)});
          (void)ca;
          (void)cb;
        }
        cross[i] = worst;
      }
      // long midpoint run: exact invariants and the conserved suite
      {
        const Trajectory traj =
            integrate(s0, rc.T, rc.h, Scheme::ImplicitMidpoint, 10);
        const DriftReport rep = drift_report(traj, suite);
        for (const DriftRecord& r : rep.records) {
          if (r.name == "energy") energy[i] = std::max(energy[i], r.max_drift);
          else if (r.name == "kappa" || r.name == "p_gamma")
            casimir[i] = std::max(casimir[i], r.max_drift);
          suite_drift[i] = std::max(suite_drift[i], r.max_drift);
        }
      }
      // momentum map along the oracle flow
      {
        const Trajectory traj = oracle_integrate(s0, rc.T, rc.h, 10);
        const DriftReport rep = drift_report(traj, psi);
        for (const DriftRecord& r : rep.records)
          momentum[i] = std::max(momentum[i], r.max_drift);
      }
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  for (const std::string& f : failures)
    if (!f.empty()) throw Error("verify: " + f);

  auto vmax = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  };

  std::vector<Check> checks;
  record(checks, "oracle_cross_check", vmax(cross), 1e-6);
  record(checks, "energy_drift", vmax(energy), 1e-10);
  if (m == Model::Nil) record(checks, "p_gamma_drift", vmax(casimir), 1e-12);
  if (m == Model::Sol) record(checks, "kappa_drift", vmax(casimir), 1e-10);
  record(checks, "momentum_drift", vmax(momentum),
         m == Model::E3 ? 0.0 : 1e-8);
  record(checks, "suite_drift", vmax(suite_drift),
         m == Model::E3 ? 1e-12 : (m == Model::Nil ? 1e-6 : 1e-9));

  // Poisson-commutation residuals at random regular points
  {
    auto H = [](const PhaseState& s) { return hamiltonian(s.p); };
    std::vector<std::pair<Evaluator, Evaluator>> pairs;
    if (m == Model::E3) {
      auto pa = [](const PhaseState& s) { return s.p.pa; };
      auto pb = [](const PhaseState& s) { return s.p.pb; };
      auto pg = [](const PhaseState& s) { return s.p.pg; };
      pairs = {{pa, pb}, {pa, pg}, {pb, pg}, {H, pa}};
    } else if (m == Model::Nil) {
      auto pg = [](const PhaseState& s) { return s.p.pg; };
      auto zb = [](const PhaseState& s) {
        const Covector psi = left_momentum(s);
        return -2.0 * psi.pb / psi.pg;
      };
      auto za = [](const PhaseState& s) {
        const Covector psi = left_momentum(s);
        return 2.0 * psi.pa / psi.pg;
      };
      pairs = {{H, pg}, {H, zb}, {H, za}, {Evaluator(pg), zb}, {Evaluator(pg), za}};
    } else {
      auto kappa = [](const PhaseState& s) { return s.p.pb * s.p.pg; };
      pairs = {{H, kappa}};
    }
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const PhaseState pt{sample_group_point(m, rng),
                          sample_regular_momentum(m, rng)};
      for (const auto& [f1, f2] : pairs)
        worst = std::max(worst, std::abs(bracket_fd(f1, f2, pt, 1e-5)));
    }
    record(checks, "bracket_residual", worst, 1e-5);
  }

  bool all_pass = true;
  nlohmann::json jchecks = nlohmann::json::array();
  for (const Check& c : checks) {
    all_pass = all_pass && c.pass;
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " = " << c.value
              << " (tol " << c.tol << ")\n";
    jchecks.push_back({{"name", c.name},
                       {"value", c.value},
                       {"tolerance", c.tol},
                       {"pass", c.pass}});
  }
  const nlohmann::json report{{"model", model_name(m)},
                              {"seed", rc.seed},
                              {"T", rc.T},
                              {"h", rc.h},
                              {"samples", n},
                              {"checks", jchecks},
                              {"pass", all_pass}};
  const std::string path =
      output_dir(rc, cmd) + "/verify_" + model_name(m) + ".json";
  atomic_write_text(path, report.dump(2));
  std::cout << (all_pass ? "verification passed: " : "verification FAILED: ")
            << path << "\n";
  return all_pass ? kExitOk : kExitVerify;
}

int cmd_lattice(const RunConfig& rc) {
  const Model m = model_from_name(rc.model);
  const LatticeSpec spec = resolve_lattice(m, rc);
  std::cout << lattice_spec_to_json(spec).dump(2) << "\n";
  return kExitOk;
}

int cmd_pell(const RunConfig& rc) {
  const QuadraticField field = make_quadratic_field(rc.d);
  const UnitElement u = fundamental_unit(field);
  const nlohmann::json j{
      {"d", field.d},
      {"ring_basis", field.half_basis ? "1,(1+sqrt(d))/2" : "1,sqrt(d)"},
      {"a", u.a},
      {"b", u.b},
      {"value", u.value},
      {"norm", u.norm}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_section(const RunConfig& rc, const CLI::App& cmd) {
  const Model m = model_from_name(rc.model);
  const PhaseState s0 = initial_state(m, rc);
  const Scheme scheme = scheme_from_name(rc.scheme);
  const Trajectory traj =
      scheme == Scheme::OracleRK8
          ? oracle_integrate(s0, rc.T, rc.h, rc.stride)
          : integrate(s0, rc.T, rc.h, scheme, rc.stride);
  const SectionSpec spec{coordinate_index(rc.coord), rc.level, rc.direction};
  const auto crossings = poincare_section(traj, spec);
  const std::string path = output_dir(rc, cmd) + "/" + rc.out + "_section.csv";
  atomic_write_text(path, section_csv(crossings, m));
  std::cout << crossings.size() << " crossings -> " << path << "\n";
  return kExitOk;
}

int cmd_rotation(const RunConfig& rc) {
  const Model m = model_from_name(rc.model);
  const PhaseState s0 = initial_state(m, rc);
  const LatticeSpec lattice = resolve_lattice(m, rc);
  const Trajectory traj =
      integrate(s0, rc.T, rc.h, scheme_from_name(rc.scheme), rc.stride);
  const RotationEstimate est = rotation_vector(traj, lattice);
  const nlohmann::json j{{"frequencies", est.frequencies},
                         {"residual", est.residual},
                         {"torus_warning", est.torus_warning}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_lyapunov(const RunConfig& rc) {
  const Model m = model_from_name(rc.model);
  const PhaseState s0 = initial_state(m, rc);
  const LatticeSpec lattice = resolve_lattice(m, rc);
  const double lambda = lyapunov_max(s0, lattice, rc.T, rc.renorm);
  const nlohmann::json j{{"lambda", lambda},
                         {"T", rc.T},
                         {"renorm_every", rc.renorm}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

void add_common(CLI::App* cmd, RunConfig& rc, bool needs_state) {
  cmd->add_option("--model", rc.model, "geometry: e3, nil or sol");
  cmd->add_option("--config", rc.config_path,
                  "JSON config file (flags take precedence)");
  cmd->add_option("--outdir", rc.outdir,
                  "output directory (default $GEOFLOW_OUT or .)");
  cmd->add_option("--seed", rc.seed, "seed for randomized suites");
  if (needs_state) {
    cmd->add_option("--g", rc.g, "initial group point x,y,z")->expected(3)->delimiter(',');
    cmd->add_option("--p", rc.p, "initial momentum pA,pB,pG")->expected(3)->delimiter(',');
    cmd->add_option("--T", rc.T, "flow time");
    cmd->add_option("--h", rc.h, "step size");
    cmd->add_option("--scheme", rc.scheme, "midpoint, leapfrog or oracle");
    cmd->add_option("--stride", rc.stride, "store every k-th step")
        ->check(CLI::PositiveNumber);
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"geoflow: integrable geodesic flow laboratory on E3, Nil and Sol"};
  app.require_subcommand(1);

  RunConfig rc;

  CLI::App* simulate = app.add_subcommand("simulate", "integrate a geodesic and write CSV/JSON");
  add_common(simulate, rc, true);

  CLI::App* verify = app.add_subcommand(
      "verify", "conservation, oracle cross-check and bracket residuals");
  add_common(verify, rc, true);
  verify->get_option("--T")->default_val(100.0);
  verify->get_option("--h")->default_val(1e-2);
  verify->add_option("--samples", rc.samples, "random initial conditions");
  verify->add_option("--jobs", rc.jobs, "parallel workers for scans");

  CLI::App* lattice = app.add_subcommand("lattice", "print a lattice spec as JSON");
  add_common(lattice, rc, false);
  lattice->add_option("--d", rc.d, "square-free field discriminant for sol");
  lattice->add_option("--lattice", rc.lattice, "standard | sol:<d> | e3:cube");

  CLI::App* pell = app.add_subcommand("pell", "fundamental unit of Q(sqrt(d))");
  pell->add_option("--d", rc.d, "square-free d >= 2")->required();

  CLI::App* section = app.add_subcommand("section", "Poincare section of a run");
  add_common(section, rc, true);
  section->add_option("--coord", rc.coord, "tracked coordinate: x,y,z,pA,pB,pG");
  section->add_option("--level", rc.level, "section level");
  section->add_option("--dir", rc.direction, "crossing direction +1/-1");
  section->add_option("--out", rc.out, "output basename");

  CLI::App* rotation = app.add_subcommand("rotation", "rotation vector of a run");
  add_common(rotation, rc, true);
  rotation->get_option("--T")->default_val(200.0);
  rotation->get_option("--h")->default_val(1e-2);
  rotation->add_option("--d", rc.d, "field discriminant for sol lattices");
  rotation->add_option("--lattice", rc.lattice, "lattice selector");

  CLI::App* lyapunov = app.add_subcommand("lyapunov", "maximal Lyapunov exponent");
  add_common(lyapunov, rc, true);
  lyapunov->get_option("--T")->default_val(500.0);
  lyapunov->add_option("--renorm", rc.renorm, "renormalization interval");
  lyapunov->add_option("--d", rc.d, "field discriminant for sol lattices");
  lyapunov->add_option("--lattice", rc.lattice, "lattice selector");

  simulate->add_option("--out", rc.out, "output basename");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    merge_config(*sub, rc);
    if (sub == simulate) return cmd_simulate(rc, *sub);
    if (sub == verify) return cmd_verify(rc, *sub);
    if (sub == lattice) return cmd_lattice(rc);
    if (sub == pell) return cmd_pell(rc);
    if (sub == section) return cmd_section(rc, *sub);
    if (sub == rotation) return cmd_rotation(rc);
    if (sub == lyapunov) return cmd_lyapunov(rc);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IntegrationError& e) {
    std::cerr << "integration error at t = " << e.time << ", h = " << e.step
              << ": " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace geoflow
