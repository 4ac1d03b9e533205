#include "geoflow/integrals.hpp"

#include <cmath>

namespace geoflow {

double hamiltonian(const Covector& p) {
  return 0.5 * (p.pa * p.pa + p.pb * p.pb + p.pg * p.pg);
}

Covector left_momentum(const PhaseState& s) { return coadjoint(s.g, s.p); }

std::vector<double> casimirs(const Covector& p) {
  switch (p.model) {
    case Model::E3: return {p.pa, p.pb, p.pg};
    case Model::Nil: return {p.pg};
    case Model::Sol: return {p.pb * p.pg};
  }
  throw UsageError("casimirs: bad model tag");
}

double mod_positive(double v, double m) {
  double r = std::fmod(v, m);
  if (r < 0.0) r += m;
  return r;
}

double circle_distance(double a, double b, double m) {
  const double d = mod_positive(std::abs(a - b), m);
  return std::min(d, m - d);
}

NilZetaValue nil_zeta(const PhaseState& s, double beta_modulus,
                      double alpha_modulus) {
  if (s.g.model != Model::Nil) throw UsageError("nil_zeta: model must be Nil");
  if (!(beta_modulus > 0.0) || !(alpha_modulus > 0.0))
    throw UsageError("nil_zeta: moduli must be positive");
  if (std::abs(s.p.pg) < kRegularSetGuard)
    throw SingularSetError("nil_zeta: |pG| below the regular-set guard");
  const Covector psi = left_momentum(s);
  return {hamiltonian(s.p), s.p.pg,
          mod_positive(-2.0 * psi.pb / psi.pg, beta_modulus),
          mod_positive(2.0 * psi.pa / psi.pg, alpha_modulus)};
}

NilXiValue nil_xi(const PhaseState& s, double beta_modulus) {
  const NilZetaValue z = nil_zeta(s, beta_modulus, 1.0);
  return {z.energy, z.pg, z.theta_beta};
}

SolSuiteValue sol_suite(const Covector& p) {
  if (p.model != Model::Sol) throw UsageError("sol_suite: model must be Sol");
  const int sign = (p.pb > 0.0) - (p.pb < 0.0);
  return {hamiltonian(p), p.pb * p.pg, sign};
}

double bracket_fd(const Evaluator& f1, const Evaluator& f2,
                  const PhaseState& s, double fd_step) {
  if (!(fd_step > 0.0)) throw UsageError("bracket_fd: fd_step must be positive");
  const Model m = s.g.model;
  const CanonicalPoint c0 = to_canonical(s);

  // grad[f][i] = d f / d c_i by central differences
  double grad[2][6];
  const Evaluator* fs[2] = {&f1, &f2};
  for (int f = 0; f < 2; ++f) {
    for (int i = 0; i < 6; ++i) {
      CanonicalPoint cp = c0, cm = c0;
      cp[i] += fd_step;
      cm[i] -= fd_step;
      const double vp = (*fs[f])(from_canonical(m, cp));
      const double vm = (*fs[f])(from_canonical(m, cm));
      if (!std::isfinite(vp) || !std::isfinite(vm))
        throw StencilError("bracket_fd: non-finite value at stencil offset " +
                           std::string(i < 3 ? "q" : "p") +
                           std::to_string(i % 3) +
                           (std::isfinite(vp) ? " - " : " + ") +
                           std::to_string(fd_step));
      grad[f][i] = (vp - vm) / (2.0 * fd_step);
    }
  }

  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    sum += grad[0][i] * grad[1][i + 3] - grad[0][i + 3] * grad[1][i];
  return sum;
}

const char* conservation_class_name(ConservationClass c) {
  switch (c) {
    case ConservationClass::ExactLinear: return "exact-linear";
    case ConservationClass::ExactQuadratic: return "exact-quadratic";
    case ConservationClass::Numeric: return "numeric";
  }
  return "?";
}

IntegralSuite conserved_suite(Model m, double beta_modulus,
                              double alpha_modulus) {
  IntegralSuite suite{m, {}};
  auto H = [](const PhaseState& s) { return hamiltonian(s.p); };
  switch (m) {
    case Model::E3:
      suite.entries = {
          {"psi_alpha", [](const PhaseState& s) { return s.p.pa; },
           ConservationClass::ExactLinear, false, 0.0},
          {"psi_beta", [](const PhaseState& s) { return s.p.pb; },
           ConservationClass::ExactLinear, false, 0.0},
          {"psi_gamma", [](const PhaseState& s) { return s.p.pg; },
           ConservationClass::ExactLinear, false, 0.0},
          {"energy", H, ConservationClass::ExactQuadratic, false, 0.0},
      };
      break;
    case Model::Nil:
      suite.entries = {
          {"energy", H, ConservationClass::ExactQuadratic, false, 0.0},
          {"p_gamma", [](const PhaseState& s) { return s.p.pg; },
           ConservationClass::ExactLinear, false, 0.0},
          {"zeta_beta",
           [beta_modulus](const PhaseState& s) {
             return nil_zeta(s, beta_modulus, 1.0).theta_beta;
           },
           ConservationClass::Numeric, true, beta_modulus},
          {"zeta_alpha",
           [alpha_modulus](const PhaseState& s) {
             return nil_zeta(s, 1.0, alpha_modulus).theta_alpha;
           },
           ConservationClass::Numeric, true, alpha_modulus},
      };
      break;
    case Model::Sol:
      suite.entries = {
          {"energy", H, ConservationClass::ExactQuadratic, false, 0.0},
          {"kappa", [](const PhaseState& s) { return s.p.pb * s.p.pg; },
           ConservationClass::ExactQuadratic, false, 0.0},
          {"sign_p_beta",
           [](const PhaseState& s) {
             return double(sol_suite(s.p).sign_pb);
           },
           ConservationClass::Numeric, false, 0.0},
      };
      break;
  }
  return suite;
}

IntegralSuite momentum_suite(Model m) {
  IntegralSuite suite{m, {}};
  const char* names[3] = {"psi_alpha", "psi_beta", "psi_gamma"};
  for (int i = 0; i < 3; ++i) {
    suite.entries.push_back(
        {names[i],
         [i](const PhaseState& s) {
           const Covector psi = left_momentum(s);
           return i == 0 ? psi.pa : (i == 1 ? psi.pb : psi.pg);
         },
         // Nil psi is quadratic in the chart; Sol is transcendental.
         m == Model::Sol ? ConservationClass::Numeric
                         : (m == Model::E3 ? ConservationClass::ExactLinear
                                           : ConservationClass::ExactQuadratic),
         false, 0.0});
  }
  return suite;
}

}  // namespace geoflow
