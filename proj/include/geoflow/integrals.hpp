#pragma once
#include <functional>
#include <string>
#include <vector>

#include "geoflow/groups.hpp"

// Hamiltonian, momentum map, Casimirs, the named first-integral suites of
// the three geometries, and a finite-difference Poisson bracket checker.

namespace geoflow {

/// |pG| (Nil) or |kappa| (Sol) below this marks the singular set; the suite
/// evaluators refuse to divide there.
constexpr double kRegularSetGuard = 1e-12;

/// Kinetic energy H(p) = (pA^2 + pB^2 + pG^2)/2, the same quadratic form in
/// every model (the coframe is orthonormal).
double hamiltonian(const Covector& p);

/// coadjoint(s.g, s.p): conserved along the geodesic flow. Its numerical
/// conservation is the test that pins the Euler-field sign.
Covector left_momentum(const PhaseState& s);

/// Casimirs of the Lie-Poisson structure: every component of p for E3, pG
/// for Nil, kappa = pB*pG for Sol.
std::vector<double> casimirs(const Covector& p);

/// Reduce v into [0, m).
double mod_positive(double v, double m);

/// Distance on the circle of circumference m.
double circle_distance(double a, double b, double m);

struct NilZetaValue {
  double energy;       // H(p)
  double pg;           // Casimir
  double theta_beta;   // -2 psi_B / psi_G  mod beta_modulus
  double theta_alpha;  // +2 psi_A / psi_G  mod alpha_modulus
};

/// The four-component Nil suite. The circle entries are ratios of the
/// conserved momentum psi = left_momentum(s), so they are constant along the
/// flow and invariant mod 1 under the standard lattice.
/// Throws SingularSetError when |pG| < kRegularSetGuard.
NilZetaValue nil_zeta(const PhaseState& s, double beta_modulus = 1.0,
                      double alpha_modulus = 1.0);

struct NilXiValue {
  double energy;
  double pg;
  double theta_beta;
};

/// First three components of nil_zeta; the Lagrangian-torus suite.
NilXiValue nil_xi(const PhaseState& s, double beta_modulus = 1.0);

struct SolSuiteValue {
  double energy;  // H(p)
  double kappa;   // pB*pG
  int sign_pb;    // -1, 0, +1; 0 marks the singular set
};

SolSuiteValue sol_suite(const Covector& p);

using Evaluator = std::function<double(const PhaseState&)>;

/// Canonical Poisson bracket {f1, f2} at s, by central differences of the
/// two evaluators in the canonical chart. Throws StencilError if an
/// evaluator goes non-finite at a stencil offset.
double bracket_fd(const Evaluator& f1, const Evaluator& f2,
                  const PhaseState& s, double fd_step = 1e-5);

enum class ConservationClass { ExactLinear, ExactQuadratic, Numeric };

const char* conservation_class_name(ConservationClass c);

struct IntegralEntry {
  std::string name;
  Evaluator eval;
  ConservationClass cls = ConservationClass::Numeric;
  bool circle = false;
  double modulus = 0.0;  // positive when circle
};

struct IntegralSuite {
  Model model;
  std::vector<IntegralEntry> entries;
};

/// The named conserved suite of the model: psi = p for E3, zeta for Nil,
/// (g, kappa, sign pB) for Sol.
IntegralSuite conserved_suite(Model m, double beta_modulus = 1.0,
                              double alpha_modulus = 1.0);

/// The three components of the momentum map as a suite of its own.
IntegralSuite momentum_suite(Model m);

}  // namespace geoflow
