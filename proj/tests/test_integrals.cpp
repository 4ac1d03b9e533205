#include <cmath>
#include <random>

#include "doctest.h"
#include "geoflow/dynamics.hpp"
#include "geoflow/integrals.hpp"
#include "geoflow/lattices.hpp"

using namespace geoflow;

namespace {

const Model kModels[3] = {Model::E3, Model::Nil, Model::Sol};

Covector regular_momentum(Model m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    double a = gauss(rng), b = gauss(rng), c = gauss(rng);
    const double n = std::sqrt(a * a + b * b + c * c);
    if (n < 1e-9) continue;
    a /= n;
    b /= n;
    c /= n;
    if (m == Model::Nil && std::abs(c) < 0.25) continue;
    if (m == Model::Sol && (std::abs(b) < 0.25 || std::abs(c) < 0.25)) continue;
    return {m, a, b, c};
  }
}

PhaseState random_point(Model m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  return {{m, box(rng), box(rng), box(rng)}, regular_momentum(m, rng)};
}

}  // namespace

TEST_CASE("hamiltonian values") {
  CHECK(hamiltonian({Model::E3, 0, 0, 0}) == 0.0);
  CHECK(hamiltonian({Model::Nil, 1, 0, 1}) == 1.0);
  CHECK(hamiltonian({Model::Sol, 3, 4, 0}) == 12.5);
}

TEST_CASE("left momentum basics") {
  std::mt19937_64 rng(47);
  for (Model m : kModels) {
    const Covector p = regular_momentum(m, rng);
    const Covector psi = left_momentum({identity(m), p});
    CHECK(psi.pa == p.pa);
    CHECK(psi.pb == p.pb);
    CHECK(psi.pg == p.pg);
  }
  const Covector psi =
      left_momentum({{Model::Nil, 2, 4, 0}, {Model::Nil, 0, 0, 1}});
  CHECK(psi.pa == doctest::Approx(4.0));
  CHECK(psi.pb == doctest::Approx(-2.0));
  CHECK(psi.pg == 1.0);
}

TEST_CASE("left momentum is conserved along the flow") {
  // this conservation is what fixes the Euler-field sign: with the opposite
  // sign the drift is O(1) instead of integrator-level
  std::mt19937_64 rng(53);
  for (Model m : kModels) {
    for (int i = 0; i < 3; ++i) {
      const PhaseState s{identity(m), regular_momentum(m, rng)};
      const Trajectory traj = oracle_integrate(s, 10.0, 1e-3, 100);
      const Covector psi0 = left_momentum(s);
      double drift = 0.0;
      for (const PhaseState& st : traj.states) {
        const Covector psi = left_momentum(st);
        drift = std::max({drift, std::abs(psi.pa - psi0.pa),
                          std::abs(psi.pb - psi0.pb),
                          std::abs(psi.pg - psi0.pg)});
      }
      CHECK(drift <= 1e-8);
    }
  }
}

TEST_CASE("casimir lists") {
  const auto nil = casimirs({Model::Nil, 5, 7, 2});
  REQUIRE(nil.size() == 1);
  CHECK(nil[0] == 2.0);

  const auto sol = casimirs({Model::Sol, 9, 2, 3});
  REQUIRE(sol.size() == 1);
  CHECK(sol[0] == 6.0);

  const auto e3 = casimirs({Model::E3, 1, 2, 3});
  REQUIRE(e3.size() == 3);
  CHECK(e3[0] == 1.0);
  CHECK(e3[1] == 2.0);
  CHECK(e3[2] == 3.0);
}

TEST_CASE("nil zeta values at the identity fiber") {
  const NilZetaValue a = nil_zeta({identity(Model::Nil), {Model::Nil, 1, 0, 1}});
  CHECK(a.energy == 1.0);
  CHECK(a.pg == 1.0);
  CHECK(a.theta_beta == doctest::Approx(0.0));
  CHECK(a.theta_alpha == doctest::Approx(0.0));  // 2*1/1 = 2 = 0 mod 1

  const NilZetaValue b = nil_zeta({identity(Model::Nil), {Model::Nil, 0, 1, 2}});
  CHECK(b.energy == 2.5);
  CHECK(b.pg == 2.0);
  CHECK(b.theta_beta == doctest::Approx(0.0));  // -2*1/2 = -1 = 0 mod 1
  CHECK(b.theta_alpha == doctest::Approx(0.0));

  CHECK_THROWS_AS(nil_zeta({identity(Model::Nil), {Model::Nil, 1, 0, 0}}),
                  SingularSetError);
  CHECK_THROWS_AS(nil_zeta({identity(Model::Nil), {Model::Nil, 1, 0, 1e-13}}),
                  SingularSetError);
  CHECK_THROWS_AS(nil_zeta({identity(Model::Sol), {Model::Sol, 1, 0, 1}}),
                  UsageError);
}

TEST_CASE("nil xi equals the first three zeta components") {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 100; ++i) {
    const PhaseState s = random_point(Model::Nil, rng);
    const NilZetaValue z = nil_zeta(s);
    const NilXiValue x = nil_xi(s);
    CHECK(x.energy == z.energy);
    CHECK(x.pg == z.pg);
    CHECK(x.theta_beta == z.theta_beta);
  }
}

TEST_CASE("zeta is conserved along the flow, circle metric on the angles") {
  const PhaseState s{identity(Model::Nil), {Model::Nil, 0.3, 0.4, 1.0}};
  const Trajectory traj = oracle_integrate(s, 50.0, 1e-2, 10);
  const NilZetaValue z0 = nil_zeta(s);
  double worst = 0.0;
  for (const PhaseState& st : traj.states) {
    const NilZetaValue z = nil_zeta(st);
    worst = std::max({worst, std::abs(z.energy - z0.energy),
                      std::abs(z.pg - z0.pg),
                      circle_distance(z.theta_beta, z0.theta_beta, 1.0),
                      circle_distance(z.theta_alpha, z0.theta_alpha, 1.0)});
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("zeta descends to the lattice quotient") {
  // shifting the fiber data by a lattice element must not move the angles:
  // psi shifts by coadjoint(n, .), which changes the two ratios by even
  // integers for the standard generators
  const LatticeSpec lattice = nil_standard_lattice();
  std::mt19937_64 rng(61);
  for (int i = 0; i < 100; ++i) {
    const Covector psi = regular_momentum(Model::Nil, rng);
    for (const GroupElement& n : lattice.generators) {
      const Covector shifted = coadjoint(n, psi);
      const double tb0 = mod_positive(-2.0 * psi.pb / psi.pg, 1.0);
      const double ta0 = mod_positive(2.0 * psi.pa / psi.pg, 1.0);
      const double tb1 = mod_positive(-2.0 * shifted.pb / shifted.pg, 1.0);
      const double ta1 = mod_positive(2.0 * shifted.pa / shifted.pg, 1.0);
      CHECK(circle_distance(tb0, tb1, 1.0) <= 1e-12);
      CHECK(circle_distance(ta0, ta1, 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("sol suite values") {
  const SolSuiteValue a = sol_suite({Model::Sol, 0, 1, 1});
  CHECK(a.energy == 1.0);
  CHECK(a.kappa == 1.0);
  CHECK(a.sign_pb == 1);

  const SolSuiteValue b = sol_suite({Model::Sol, 1, 0, 2});
  CHECK(b.energy == 2.5);
  CHECK(b.kappa == 0.0);
  CHECK(b.sign_pb == 0);

  const PhaseState s{identity(Model::Sol), {Model::Sol, 0.1, 1.0, 1.0}};
  const Trajectory traj = oracle_integrate(s, 50.0, 1e-2, 10);
  double worst = 0.0;
  for (const PhaseState& st : traj.states) {
    const SolSuiteValue v = sol_suite(st.p);
    worst = std::max({worst, std::abs(v.energy - 1.005), std::abs(v.kappa - 1.0)});
    CHECK(v.sign_pb == 1);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("bracket of a function with itself vanishes") {
  std::mt19937_64 rng(67);
  auto H = [](const PhaseState& s) { return hamiltonian(s.p); };
  for (Model m : kModels) {
    const PhaseState s = random_point(m, rng);
    CHECK(std::abs(bracket_fd(H, H, s)) <= 1e-10);
  }
}

TEST_CASE("commuting pairs have small bracket residuals") {
  std::mt19937_64 rng(71);
  auto H = [](const PhaseState& s) { return hamiltonian(s.p); };

  // Nil: energy and the Casimir against the angle ratios
  auto pg = [](const PhaseState& s) { return s.p.pg; };
  auto zeta_b = [](const PhaseState& s) {
    const Covector psi = left_momentum(s);
    return -2.0 * psi.pb / psi.pg;
  };
  auto zeta_a = [](const PhaseState& s) {
    const Covector psi = left_momentum(s);
    return 2.0 * psi.pa / psi.pg;
  };
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PhaseState s = random_point(Model::Nil, rng);
    worst = std::max({worst, std::abs(bracket_fd(H, pg, s)),
                      std::abs(bracket_fd(H, zeta_b, s)),
                      std::abs(bracket_fd(H, zeta_a, s)),
                      std::abs(bracket_fd(pg, zeta_b, s)),
                      std::abs(bracket_fd(pg, zeta_a, s))});
  }
  CHECK(worst <= 1e-5);

  // Sol: energy against kappa
  auto kappa = [](const PhaseState& s) { return s.p.pb * s.p.pg; };
  worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PhaseState s = random_point(Model::Sol, rng);
    worst = std::max(worst, std::abs(bracket_fd(H, kappa, s)));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("the two angle ratios do not commute with each other") {
  // {-2 psi_B/psi_G, 2 psi_A/psi_G} = 4/pG: the fibers are isotropic, not
  // Lagrangian, which is why only the first two entries commute with all
  auto zeta_b = [](const PhaseState& s) {
    const Covector psi = left_momentum(s);
    return -2.0 * psi.pb / psi.pg;
  };
  auto zeta_a = [](const PhaseState& s) {
    const Covector psi = left_momentum(s);
    return 2.0 * psi.pa / psi.pg;
  };
  std::mt19937_64 rng(73);
  for (int i = 0; i < 20; ++i) {
    const PhaseState s = random_point(Model::Nil, rng);
    const double expected = 4.0 / s.p.pg;
    CHECK(bracket_fd(zeta_b, zeta_a, s) ==
          doctest::Approx(expected).epsilon(1e-4));
  }
}

TEST_CASE("bracket antisymmetry is exact") {
  std::mt19937_64 rng(79);
  auto H = [](const PhaseState& s) { return hamiltonian(s.p); };
  auto f = [](const PhaseState& s) { return s.g.x * s.p.pb + s.g.z; };
  for (Model m : kModels) {
    for (int i = 0; i < 20; ++i) {
      const PhaseState s = random_point(m, rng);
      const double ab = bracket_fd(H, f, s);
      const double ba = bracket_fd(f, H, s);
      CHECK(std::abs(ab + ba) <= 1e-12);
    }
  }
}

TEST_CASE("bracket Leibniz rule") {
  std::mt19937_64 rng(83);
  auto f = [](const PhaseState& s) { return hamiltonian(s.p); };
  auto g = [](const PhaseState& s) { return s.g.x + 0.5 * s.p.pb; };
  auto h = [](const PhaseState& s) { return s.p.pg + 0.2 * s.g.y; };
  auto gh = [&](const PhaseState& s) { return g(s) * h(s); };
  for (int i = 0; i < 20; ++i) {
    const PhaseState s = random_point(Model::Nil, rng);
    const double lhs = bracket_fd(f, gh, s, 1e-4);
    const double rhs = g(s) * bracket_fd(f, h, s, 1e-4) +
                       h(s) * bracket_fd(f, g, s, 1e-4);
    CHECK(std::abs(lhs - rhs) <= 1e-4);
  }
}

TEST_CASE("bracket stencil rejects non-finite evaluations") {
  auto bad = [](const PhaseState& s) { return 1.0 / (s.g.x - s.g.x); };
  auto H = [](const PhaseState& s) { return hamiltonian(s.p); };
  const PhaseState s{identity(Model::E3), {Model::E3, 1, 0, 0}};
  CHECK_THROWS_AS(bracket_fd(bad, H, s), StencilError);
}

TEST_CASE("suite conservation per class over long runs") {
  std::mt19937_64 rng(89);
  for (Model m : kModels) {
    const IntegralSuite suite = conserved_suite(m);
    for (int i = 0; i < 3; ++i) {
      const PhaseState s{identity(m), regular_momentum(m, rng)};
      const Trajectory traj =
          integrate(s, 100.0, 1e-2, Scheme::ImplicitMidpoint, 20);
      for (const IntegralEntry& e : suite.entries) {
        const double v0 = e.eval(traj.states.front());
        double drift = 0.0;
        for (const PhaseState& st : traj.states) {
          const double v = e.eval(st);
          drift = std::max(drift, e.circle ? circle_distance(v, v0, e.modulus)
                                           : std::abs(v - v0));
        }
        switch (e.cls) {
          case ConservationClass::ExactLinear: CHECK(drift <= 1e-12); break;
          case ConservationClass::ExactQuadratic: CHECK(drift <= 1e-10); break;
          case ConservationClass::Numeric:
            CHECK(drift <= (m == Model::Sol ? 1e-9 : 1e-6));
            break;
        }
      }
    }
  }
}
