#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geoflow/dynamics.hpp"
#include "geoflow/integrals.hpp"
#include "geoflow/lattices.hpp"

// Dynamical diagnostics on trajectories: conservation drift, Poincare
// sections, rotation vectors, recurrence times, and a two-trajectory
// estimate of the maximal Lyapunov exponent.

namespace geoflow {

struct DriftRecord {
  std::string name;
  double initial = 0.0;
  double max_drift = 0.0;
  bool circle = false;
  ConservationClass cls = ConservationClass::Numeric;
};

struct DriftReport {
  Model model;
  Scheme scheme;
  double T = 0.0;
  double h = 0.0;
  std::vector<DriftRecord> records;
};

/// Max distance of each suite entry from its initial value over the
/// trajectory samples, with circle distance where flagged.
/// Singular-set failures are rethrown naming the first offending time.
DriftReport drift_report(const Trajectory& traj, const IntegralSuite& suite);

/// Phase coordinates by name: x, y, z, pA, pB, pG -> 0..5.
int coordinate_index(const std::string& name);

struct SectionSpec {
  int coordinate = 0;  // 0..5
  double level = 0.0;
  int direction = +1;  // +1 upward crossings, -1 downward
};

struct SectionCrossing {
  double t;
  PhaseState state;
};

/// Crossings of the tracked coordinate through the level in the given
/// direction, refined by cubic Hermite interpolation of the bracketing
/// samples (values plus vector-field slopes). No crossings is an empty
/// list, not an error.
std::vector<SectionCrossing> poincare_section(const Trajectory& traj,
                                              const SectionSpec& spec);

struct RotationEstimate {
  std::array<double, 3> frequencies{};  // radians (or box units) per time
  double residual = 0.0;                // max deviation from the linear fit
  bool torus_warning = false;           // residual > 0.1
};

/// Least-squares linear fit theta(t) = theta0 + omega t of three tracked
/// phases along the unreduced trajectory.
///
/// The phases are chosen per model so that the flow is a straight line on
/// a regular invariant torus: the raw coordinates for E3; for Nil the
/// momentum angle atan2(pB, pA), the corrected vertical phase
/// z + (x pA + y pB)/(2 pG), and the conserved transversal y + pA/pG; for
/// Sol the pendulum phase of (u, pA) with u = log|pB/pG|/2 and the two
/// translation coordinates in the lattice basis.
RotationEstimate rotation_vector(const Trajectory& traj,
                                 const LatticeSpec& lattice);

/// First sample time t > 0 at which every phase coordinate of the reduced
/// trajectory returns within eps of its start, in the quotient metric
/// (circle metric with the domain periods on group coordinates, plain
/// distance on momenta). The trajectory must already be reduced.
std::optional<double> recurrence_time(const Trajectory& traj, double eps,
                                      const LatticeSpec& lattice);

/// Reduce every sample of a trajectory into the fundamental domain.
Trajectory reduce_trajectory(const Trajectory& traj,
                             const LatticeSpec& lattice);

/// Benettin two-trajectory estimate of the maximal Lyapunov exponent of the
/// quotient flow through s. The companion starts displaced by 1e-8 (mostly
/// in the group coordinates) and is renormalized every renorm_every time
/// units; both trajectories are recentered by the same lattice word to keep
/// coordinates bounded. Implicit midpoint at h = 1e-2 inside.
/// Throws SeparationError if the separation passes 1e-2 between
/// renormalizations.
double lyapunov_max(const PhaseState& s, const LatticeSpec& lattice, double T,
                    double renorm_every);

}  // namespace geoflow
