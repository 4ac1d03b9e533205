#include <cmath>
#include <random>

#include "doctest.h"
#include "geoflow/groups.hpp"
#include "geoflow/lattices.hpp"

using namespace geoflow;

namespace {

double element_distance(const GroupElement& a, const GroupElement& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y),
                   std::abs(a.z - b.z)});
}

// exhaustive minimality check of the unit search: no unit of absolute norm 1
// lies strictly between 1 and the reported one for coefficients up to the
// reported ones
void check_pell_minimality(const QuadraticField& field, const UnitElement& u) {
  for (std::int64_t b = 0; b <= u.b; ++b) {
    for (std::int64_t a = -std::abs(u.a) - 2; a <= std::abs(u.a) + 2; ++a) {
      const std::int64_t n = ring_norm(field, a, b);
      if (n != 1 && n != -1) continue;
      const double value = a + b * field.omega();
      CHECK(!(value > 1.0 + 1e-12 && value < u.value - 1e-12));
    }
  }
}

}  // namespace

TEST_CASE("quadratic field validation") {
  CHECK_THROWS_AS(make_quadratic_field(4), UsageError);
  CHECK_THROWS_AS(make_quadratic_field(12), UsageError);
  CHECK_THROWS_AS(make_quadratic_field(1), UsageError);
  CHECK(make_quadratic_field(2).half_basis == false);
  CHECK(make_quadratic_field(5).half_basis == true);
  CHECK(make_quadratic_field(5).omega() == doctest::Approx((1 + std::sqrt(5.0)) / 2));
}

TEST_CASE("fundamental units for small discriminants") {
  const UnitElement u2 = fundamental_unit(make_quadratic_field(2));
  CHECK(u2.a == 1);
  CHECK(u2.b == 1);
  CHECK(u2.norm == -1);
  CHECK(u2.value == doctest::Approx(1 + std::sqrt(2.0)).epsilon(1e-14));

  const UnitElement u3 = fundamental_unit(make_quadratic_field(3));
  CHECK(u3.a == 2);
  CHECK(u3.b == 1);
  CHECK(u3.norm == 1);
  CHECK(u3.value == doctest::Approx(2 + std::sqrt(3.0)).epsilon(1e-14));

  const UnitElement u5 = fundamental_unit(make_quadratic_field(5));
  CHECK(u5.a == 0);
  CHECK(u5.b == 1);
  CHECK(u5.norm == -1);
  CHECK(u5.value == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-14));

  for (std::int64_t d : {2, 3, 5, 6, 7, 10, 13})
    check_pell_minimality(make_quadratic_field(d),
                          fundamental_unit(make_quadratic_field(d)));
}

TEST_CASE("unit squares") {
  const QuadraticField f2 = make_quadratic_field(2);
  const UnitElement sq = unit_square(f2, fundamental_unit(f2));
  CHECK(sq.a == 3);
  CHECK(sq.b == 2);
  CHECK(sq.norm == 1);
  CHECK(sq.value == doctest::Approx(3 + 2 * std::sqrt(2.0)));

  const QuadraticField f5 = make_quadratic_field(5);
  const UnitElement sq5 = unit_square(f5, fundamental_unit(f5));
  CHECK(sq5.a == 1);
  CHECK(sq5.b == 1);
  CHECK(ring_norm(f5, sq5.a, sq5.b) == 1);
}

TEST_CASE("nil standard lattice") {
  const LatticeSpec spec = nil_standard_lattice();
  REQUIRE(spec.generators.size() == 3);
  CHECK(element_distance(spec.generators[0], {Model::Nil, 1, 0, 0}) == 0.0);
  CHECK(element_distance(spec.generators[1], {Model::Nil, 0, 2, 0}) == 0.0);
  CHECK(element_distance(spec.generators[2], {Model::Nil, 0, 0, 1}) == 0.0);

  // the commutator of the first two generators is a power of the third
  const GroupElement& a = spec.generators[0];
  const GroupElement& b = spec.generators[1];
  const GroupElement comm =
      multiply(multiply(a, b), multiply(inverse(a), inverse(b)));
  CHECK(element_distance(comm, {Model::Nil, 0, 0, 2}) <= 1e-15);

  CHECK(minimal_displacement(spec, 4) >= 0.5);
}

TEST_CASE("sol lattice for d = 2") {
  const LatticeSpec spec = sol_lattice(2);
  REQUIRE(spec.sol.has_value());
  const SolLatticeData& data = *spec.sol;

  CHECK(data.fundamental.a == 1);
  CHECK(data.fundamental.b == 1);
  CHECK(data.fundamental.norm == -1);
  CHECK(data.unit_plus.a == 3);
  CHECK(data.unit_plus.b == 2);
  CHECK(data.unit_plus.norm == 1);
  CHECK(data.log_unit ==
        doctest::Approx(std::log(3 + 2 * std::sqrt(2.0))).epsilon(1e-14));

  CHECK(element_distance(spec.generators[0],
                         {Model::Sol, std::log(3 + 2 * std::sqrt(2.0)), 0, 0}) <= 1e-15);
  CHECK(element_distance(spec.generators[1], {Model::Sol, 0, 1, 1}) == 0.0);
  CHECK(element_distance(spec.generators[2],
                         {Model::Sol, 0, std::sqrt(2.0), -std::sqrt(2.0)}) <= 1e-15);

  CHECK(data.monodromy[0][0] == 3);
  CHECK(data.monodromy[0][1] == 4);
  CHECK(data.monodromy[1][0] == 2);
  CHECK(data.monodromy[1][1] == 3);
}

TEST_CASE("sol lattice conjugation acts as the unit") {
  const LatticeSpec spec = sol_lattice(2);
  const GroupElement& t = spec.generators[0];
  const double u = 3 + 2 * std::sqrt(2.0);
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const GroupElement trans{Model::Sol, 0, box(rng), box(rng)};
    const GroupElement conj = multiply(multiply(t, trans), inverse(t));
    CHECK(conj.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(conj.y == doctest::Approx(u * trans.y).epsilon(1e-12));
    CHECK(conj.z == doctest::Approx(trans.z / u).epsilon(1e-12));
  }
}

TEST_CASE("sol lattice closure under conjugation by t") {
  // t T_i t^-1 must land on the integer combination given by the monodromy
  // column of omega_i
  for (std::int64_t d : {2, 3, 5}) {
    const LatticeSpec spec = sol_lattice(d);
    const GroupElement& t = spec.generators[0];
    for (int i = 0; i < 2; ++i) {
      const GroupElement conj =
          multiply(multiply(t, spec.generators[1 + i]), inverse(t));
      const std::int64_t c1 = spec.sol->monodromy[0][i];
      const std::int64_t c2 = spec.sol->monodromy[1][i];
      const GroupElement span = multiply(generator_power(spec, 1, c1),
                                         generator_power(spec, 2, c2));
      CHECK(element_distance(conj, span) <= 1e-10);
    }
  }
}

TEST_CASE("monodromy stretch") {
  const LatticeSpec d2 = sol_lattice(2);
  CHECK(monodromy_stretch(d2) ==
        doctest::Approx(std::log(3 + 2 * std::sqrt(2.0))).epsilon(1e-12));
  CHECK(monodromy_stretch(d2) ==
        doctest::Approx(std::log(d2.sol->unit_plus.value)).epsilon(1e-12));
  CHECK(monodromy_stretch(d2) == doctest::Approx(1.76275).epsilon(1e-5));

  const LatticeSpec d3 = sol_lattice(3);
  CHECK(monodromy_stretch(d3) ==
        doctest::Approx(std::log(2 + std::sqrt(3.0))).epsilon(1e-12));
  CHECK(monodromy_stretch(d3) == doctest::Approx(1.31696).epsilon(1e-5));

  CHECK_THROWS_AS(monodromy_stretch(nil_standard_lattice()), UsageError);
}

TEST_CASE("monodromy determinant is one") {
  for (std::int64_t d : {2, 3, 5, 6, 7, 10, 11, 13, 17, 19, 21}) {
    const LatticeSpec spec = sol_lattice(d);
    const auto& M = spec.sol->monodromy;
    CHECK(M[0][0] * M[1][1] - M[0][1] * M[1][0] == 1);
    CHECK(std::abs(M[0][0] + M[1][1]) > 2);
  }
}

TEST_CASE("generator powers agree with repeated multiplication") {
  for (const LatticeSpec& spec :
       {e3_standard_lattice(), nil_standard_lattice(), sol_lattice(2)}) {
    for (int i = 0; i < 3; ++i) {
      GroupElement acc = identity(spec.model);
      for (int k = 0; k < 5; ++k) acc = multiply(acc, spec.generators[i]);
      CHECK(element_distance(acc, generator_power(spec, i, 5)) <= 1e-12);
      CHECK(element_distance(inverse(acc), generator_power(spec, i, -5)) <= 1e-12);
    }
  }
}

TEST_CASE("reduce leaves domain points alone") {
  const LatticeSpec nil = nil_standard_lattice();
  const GroupElement g{Model::Nil, 0.3, 1.7, 0.9};
  const Reduction red = reduce(nil, g);
  CHECK(red.word.empty());
  CHECK(element_distance(red.rep, g) == 0.0);
}

TEST_CASE("reduce worked examples") {
  const Reduction e3 =
      reduce(e3_standard_lattice(), {Model::E3, 2.5, -0.5, 7.25});
  CHECK(element_distance(e3.rep, {Model::E3, 0.5, 0.5, 0.25}) <= 1e-12);

  const Reduction nil =
      reduce(nil_standard_lattice(), {Model::Nil, 1.5, 0, 0});
  CHECK(element_distance(nil.rep, {Model::Nil, 0.5, 0, 0}) <= 1e-15);
  REQUIRE(nil.word.size() == 1);
  CHECK(nil.word[0].index == 0);
  CHECK(nil.word[0].power == -1);
}

TEST_CASE("reduction soundness over random elements") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> wide(-20.0, 20.0);
  std::uniform_real_distribution<double> xish(-5.0, 5.0);
  for (const LatticeSpec& spec :
       {e3_standard_lattice(), nil_standard_lattice(), sol_lattice(2),
        sol_lattice(5)}) {
    for (int i = 0; i < 300; ++i) {
      const GroupElement g{spec.model,
                           spec.model == Model::Sol ? xish(rng) : wide(rng),
                           wide(rng), wide(rng)};
      const Reduction red = reduce(spec, g);
      CHECK(in_fundamental_domain(spec, red.rep));
      const GroupElement n = evaluate_word(spec, red.word);
      CHECK(element_distance(multiply(n, g), red.rep) <= 1e-10);
    }
  }
}

TEST_CASE("domain periods and coordinates") {
  const LatticeSpec sol = sol_lattice(2);
  const auto per = domain_periods(sol);
  CHECK(per[0] == doctest::Approx(std::log(3 + 2 * std::sqrt(2.0))));
  CHECK(per[1] == 1.0);
  CHECK(per[2] == 1.0);

  // basis coordinates of a lattice translation are integers
  const GroupElement n = multiply(generator_power(sol, 1, 2),
                                  generator_power(sol, 2, -3));
  const auto c = domain_coordinates(sol, n);
  CHECK(c[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c[2] == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("minimal displacement flags near-indiscrete generators") {
  LatticeSpec bad{Model::E3,
                  {{Model::E3, 1, 0, 0},
                   {Model::E3, 1.0000001, 0, 0},
                   {Model::E3, 0, 0, 1}},
                  std::nullopt};
  CHECK(minimal_displacement(bad, 2) <= 1e-6);
}
