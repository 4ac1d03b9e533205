#include "geoflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geoflow {

DriftReport drift_report(const Trajectory& traj, const IntegralSuite& suite) {
  require_same_model(traj.model, suite.model, "drift_report");
  if (traj.states.empty()) throw UsageError("drift_report: empty trajectory");
  DriftReport report{traj.model, traj.scheme,
                     traj.times.back(), traj.step, {}};
  report.records.reserve(suite.entries.size());
  for (const IntegralEntry& entry : suite.entries) {
    DriftRecord rec{entry.name, 0.0, 0.0, entry.circle, entry.cls};
    for (size_t k = 0; k < traj.states.size(); ++k) {
      double v;
      try {
        v = entry.eval(traj.states[k]);
      } catch (const SingularSetError& e) {
        throw SingularSetError(entry.name + " at t = " +
                               std::to_string(traj.times[k]) + ": " + e.what());
      }
      if (k == 0) {
        rec.initial = v;
        continue;
      }
      const double d = entry.circle ? circle_distance(v, rec.initial, entry.modulus)
                                    : std::abs(v - rec.initial);
      rec.max_drift = std::max(rec.max_drift, d);
    }
    report.records.push_back(std::move(rec));
  }
  return report;
}

int coordinate_index(const std::string& name) {
  static const char* names[6] = {"x", "y", "z", "pA", "pB", "pG"};
  for (int i = 0; i < 6; ++i)
    if (name == names[i]) return i;
  throw UsageError("unknown phase coordinate '" + name + "'");
}

namespace {

double coord(const PhaseState& s, int i) {
  switch (i) {
    case 0: return s.g.x;
    case 1: return s.g.y;
    case 2: return s.g.z;
    case 3: return s.p.pa;
    case 4: return s.p.pb;
    default: return s.p.pg;
  }
}

// cubic Hermite value on [0, 1] from endpoint values and slopes (slopes
// already scaled by the interval length)
double hermite(double v0, double m0, double v1, double m1, double u) {
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * v0 + (u3 - 2 * u2 + u) * m0 +
         (-2 * u3 + 3 * u2) * v1 + (u3 - u2) * m1;
}

}  // namespace

std::vector<SectionCrossing> poincare_section(const Trajectory& traj,
                                              const SectionSpec& spec) {
  if (spec.coordinate < 0 || spec.coordinate > 5)
    throw UsageError("poincare_section: coordinate index out of range");
  if (spec.direction != 1 && spec.direction != -1)
    throw UsageError("poincare_section: direction must be +1 or -1");

  std::vector<SectionCrossing> out;
  const int ci = spec.coordinate;
  for (size_t k = 0; k + 1 < traj.states.size(); ++k) {
    const double v0 = coord(traj.states[k], ci) - spec.level;
    const double v1 = coord(traj.states[k + 1], ci) - spec.level;
    const bool crosses =
        spec.direction > 0 ? (v0 < 0.0 && v1 >= 0.0) : (v0 > 0.0 && v1 <= 0.0);
    if (!crosses) continue;

    const double dt = traj.times[k + 1] - traj.times[k];
    const auto f0 = phase_velocity(traj.states[k]);
    const auto f1 = phase_velocity(traj.states[k + 1]);

    // root of the tracked coordinate's Hermite cubic by bisection
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double vm = hermite(v0, dt * f0[ci], v1, dt * f1[ci], mid);
      if ((vm < 0.0) == (v0 < 0.0))
        lo = mid;
      else
        hi = mid;
    }
    const double u = 0.5 * (lo + hi);

    std::array<double, 6> c;
    for (int i = 0; i < 6; ++i)
      c[i] = hermite(coord(traj.states[k], i), dt * f0[i],
                     coord(traj.states[k + 1], i), dt * f1[i], u);
    out.push_back({traj.times[k] + u * dt,
                   {{traj.model, c[0], c[1], c[2]},
                    {traj.model, c[3], c[4], c[5]}}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// rotation vectors
// ---------------------------------------------------------------------------

namespace {

double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

// tracked phases per model; exact straight lines on regular tori for E3 and
// Nil, near-straight for Sol
std::array<double, 3> raw_phases(const PhaseState& s,
                                 const LatticeSpec& lattice) {
  switch (s.g.model) {
    case Model::E3:
      return {s.g.x, s.g.y, s.g.z};
    case Model::Nil: {
      const double pg = s.p.pg;
      if (std::abs(pg) < kRegularSetGuard)
        throw SingularSetError("rotation_vector: pG ~ 0");
      return {std::atan2(s.p.pb, s.p.pa),
              s.g.z + (s.g.x * s.p.pa + s.g.y * s.p.pb) / (2.0 * pg),
              s.g.y + s.p.pa / pg};
    }
    case Model::Sol: {
      const double kappa = s.p.pb * s.p.pg;
      if (std::abs(kappa) < kRegularSetGuard)
        throw SingularSetError("rotation_vector: kappa ~ 0");
      const double u = 0.5 * std::log(std::abs(s.p.pb / s.p.pg));
      const double w0 = 2.0 * std::sqrt(std::abs(kappa));
      const auto c = domain_coordinates(lattice, s.g);
      return {std::atan2(w0 * u, s.p.pa), c[1], c[2]};
    }
  }
  throw UsageError("rotation_vector: bad model tag");
}

}  // namespace

RotationEstimate rotation_vector(const Trajectory& traj,
                                 const LatticeSpec& lattice) {
  require_same_model(traj.model, lattice.model, "rotation_vector");
  const size_t n = traj.states.size();
  if (n < 3) throw UsageError("rotation_vector: need at least 3 samples");

  // unwrap the angular phases (the atan2-valued ones) sample to sample
  std::vector<std::array<double, 3>> theta(n);
  theta[0] = raw_phases(traj.states[0], lattice);
  const bool angular0 = traj.model != Model::E3;  // phase 0 is an atan2 angle
  for (size_t k = 1; k < n; ++k) {
    auto cur = raw_phases(traj.states[k], lattice);
    if (angular0) cur[0] = theta[k - 1][0] + wrap_pi(cur[0] - theta[k - 1][0]);
    theta[k] = cur;
  }

  RotationEstimate est;
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    // least squares line through (t_k, theta_k[j])
    double st = 0, sth = 0, stt = 0, stth = 0;
    for (size_t k = 0; k < n; ++k) {
      st += traj.times[k];
      sth += theta[k][j];
      stt += traj.times[k] * traj.times[k];
      stth += traj.times[k] * theta[k][j];
    }
    const double den = n * stt - st * st;
    const double omega = (n * stth - st * sth) / den;
    const double theta0 = (sth - omega * st) / n;
    est.frequencies[j] = omega;
    for (size_t k = 0; k < n; ++k)
      worst = std::max(worst,
                       std::abs(theta[k][j] - (theta0 + omega * traj.times[k])));
  }
  est.residual = worst;
  est.torus_warning = worst > 0.1;
  return est;
}

// ---------------------------------------------------------------------------
// recurrence and Lyapunov
// ---------------------------------------------------------------------------

Trajectory reduce_trajectory(const Trajectory& traj,
                             const LatticeSpec& lattice) {
  require_same_model(traj.model, lattice.model, "reduce_trajectory");
  Trajectory out = traj;
  for (PhaseState& s : out.states) s.g = reduce(lattice, s.g).rep;
  return out;
}

std::optional<double> recurrence_time(const Trajectory& traj, double eps,
                                      const LatticeSpec& lattice) {
  if (!(eps > 0.0)) throw UsageError("recurrence_time: eps must be positive");
  require_same_model(traj.model, lattice.model, "recurrence_time");
  if (traj.states.empty()) return std::nullopt;

  const auto periods = domain_periods(lattice);
  const auto c0 = domain_coordinates(lattice, traj.states[0].g);
  const Covector p0 = traj.states[0].p;

  for (size_t k = 1; k < traj.states.size(); ++k) {
    const auto c = domain_coordinates(lattice, traj.states[k].g);
    const Covector& p = traj.states[k].p;
    bool close = true;
    for (int i = 0; i < 3 && close; ++i)
      close = circle_distance(c[i], c0[i], periods[i]) < eps;
    close = close && std::abs(p.pa - p0.pa) < eps &&
            std::abs(p.pb - p0.pb) < eps && std::abs(p.pg - p0.pg) < eps;
    if (close) return traj.times[k];
  }
  return std::nullopt;
}

namespace {

constexpr double kLyapunovStep = 1e-2;
constexpr double kLyapunovSeparation = 1e-8;
constexpr double kLinearRegimeCap = 1e-2;
// initial displacement direction: mostly positional, with a small momentum
// part so the tangent dynamics can pick up every expanding direction
constexpr double kMomentumWeight = 0.1;

std::array<double, 6> state_difference(const PhaseState& a,
                                       const PhaseState& b) {
  return {b.g.x - a.g.x, b.g.y - a.g.y, b.g.z - a.g.z,
          b.p.pa - a.p.pa, b.p.pb - a.p.pb, b.p.pg - a.p.pg};
}

PhaseState displaced(const PhaseState& s, const std::array<double, 6>& d) {
  return {{s.g.model, s.g.x + d[0], s.g.y + d[1], s.g.z + d[2]},
          {s.p.model, s.p.pa + d[3], s.p.pb + d[4], s.p.pg + d[5]}};
}

}  // namespace

double lyapunov_max(const PhaseState& s, const LatticeSpec& lattice, double T,
                    double renorm_every) {
  require_same_model(s.g.model, lattice.model, "lyapunov_max");
  if (!(T > 0.0) || !(renorm_every > 0.0) || renorm_every > T)
    throw UsageError("lyapunov_max: need 0 < renorm_every <= T");

  const long long steps_per_chunk =
      std::max<long long>(1, std::llround(renorm_every / kLyapunovStep));
  const long long chunks =
      std::max<long long>(1, std::llround(T / renorm_every));

  std::array<double, 6> dir{1, 1, 1, kMomentumWeight, kMomentumWeight,
                            kMomentumWeight};
  double norm = 0.0;
  for (double v : dir) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : dir) v *= kLyapunovSeparation / norm;

  PhaseState base = s;
  PhaseState comp = displaced(s, dir);

  double log_sum = 0.0;
  for (long long c = 0; c < chunks; ++c) {
    for (long long k = 0; k < steps_per_chunk; ++k) {
      base = step(base, kLyapunovStep, Scheme::ImplicitMidpoint);
      comp = step(comp, kLyapunovStep, Scheme::ImplicitMidpoint);
      // recenter both by the same lattice word so coordinates stay bounded
      if (!in_fundamental_domain(lattice, base.g)) {
        const Reduction red = reduce(lattice, base.g);
        const GroupElement n = evaluate_word(lattice, red.word);
        base.g = red.rep;
        comp.g = multiply(n, comp.g);
      }
    }
    const auto diff = state_difference(base, comp);
    double d = 0.0;
    for (double v : diff) d += v * v;
    d = std::sqrt(d);
    if (d > kLinearRegimeCap)
      throw SeparationError(
          "lyapunov_max: separation left the linear regime; decrease "
          "renorm_every");
    if (d == 0.0) continue;  // identical states, nothing to renormalize
    log_sum += std::log(d / kLyapunovSeparation);
    std::array<double, 6> scaled;
    for (int i = 0; i < 6; ++i)
      scaled[i] = diff[i] * (kLyapunovSeparation / d);
    comp = displaced(base, scaled);
  }
  const double lambda =
      log_sum / (double(chunks) * double(steps_per_chunk) * kLyapunovStep);
  return std::max(0.0, lambda);
}

}  // namespace geoflow
