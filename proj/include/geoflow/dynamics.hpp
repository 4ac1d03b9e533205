#pragma once
#include <cstdint>
#include <vector>

#include "geoflow/groups.hpp"

// Euler-Arnold equations on g*, reconstruction on G, structure-preserving
// time stepping, and an independent canonical-chart oracle integrator.

namespace geoflow {

enum class Scheme { ImplicitMidpoint, SplittingLeapfrog, OracleRK8 };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);  // throws UsageError

/// Time-stamped sequence of phase states. times[k] is the flow time of
/// states[k]; both lists always share the trajectory's model.
struct Trajectory {
  Model model;
  std::vector<double> times;
  std::vector<PhaseState> states;
  Scheme scheme = Scheme::ImplicitMidpoint;
  double step = 0.0;
  int stride = 1;
};

/// dp/dt of the Lie-Poisson flow of H(p) = (pA^2 + pB^2 + pG^2)/2.
///
/// The quadratic fields come from the brackets [X,Y] = Z (Nil) and
/// [X,Y] = Y, [X,Z] = -Z (Sol); the abelian E3 field is zero. The global
/// sign is the one that keeps coadjoint(g(t), p(t)) constant along the
/// reconstructed flow:
///   Nil  (-pB pG, pA pG, 0)
///   Sol  (pG^2 - pB^2, pA pB, -pA pG)
Covector euler_field(const Covector& p);

/// Body velocity of the geodesic through s: dg/dt = dL_g * value.
/// The coframe is orthonormal, so this is just p read as an algebra vector.
AlgebraVector reconstruction_field(const PhaseState& s);

/// d/dt of the global coordinates (x, y, z, pA, pB, pG) at s.
std::array<double, 6> phase_velocity(const PhaseState& s);

/// One step of the named non-oracle scheme. h may be negative (the schemes
/// are time-symmetric); the oracle has its own entry point.
/// Throws IntegrationError when the midpoint Newton iteration fails.
PhaseState step(const PhaseState& s, double h, Scheme scheme);

/// Integrate for time T in steps of h, storing every stride-th sample (the
/// endpoint is always stored). Sample k sits at flow time k*h; the final
/// time is within h of T.
Trajectory integrate(const PhaseState& s, double T, double h, Scheme scheme,
                     int stride = 10);

/// Independent check integrator: Hamilton's equations in the canonical chart
/// (x, y, z, px, py, pz), advanced by an 8th-order extrapolated Gragg
/// midpoint step (fixed step; formally an explicit Runge-Kutta method), then
/// converted back to left-trivialized states through the coframe.
Trajectory oracle_integrate(const PhaseState& s, double T, double h,
                            int stride = 10);

/// Canonical right-hand side used by the oracle; exposed for verification.
CanonicalPoint canonical_field(Model m, const CanonicalPoint& u);

}  // namespace geoflow
