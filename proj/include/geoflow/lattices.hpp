#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "geoflow/model.hpp"

// Cocompact discrete subgroups of the three geometries: Z^3 for E3, the
// standard integer lattice of Nil, and Sol lattices built from a real
// quadratic number field (ring of integers, fundamental unit, Galois
// conjugation, monodromy of the unit action), together with reduction into
// a fixed fundamental domain.

namespace geoflow {

/// Q(sqrt(d)) with the standard ring of integers: basis (1, omega) where
/// omega = sqrt(d) for d = 2,3 mod 4 and (1+sqrt(d))/2 for d = 1 mod 4.
struct QuadraticField {
  std::int64_t d = 2;
  bool half_basis = false;  // true iff d = 1 mod 4

  double omega() const;
  double omega_conj() const;  // Galois image sigma(omega)
};

/// Throws UsageError unless d >= 2 and square-free.
QuadraticField make_quadratic_field(std::int64_t d);

/// A unit a + b*omega of the ring of integers, with its numeric value and
/// norm in {+1, -1}.
struct UnitElement {
  std::int64_t a = 0, b = 0;
  double value = 1.0;
  int norm = 1;
};

/// Field norm of a + b*omega, exact integer arithmetic.
std::int64_t ring_norm(const QuadraticField& field, std::int64_t a,
                       std::int64_t b);

/// Smallest unit > 1 of the ring of integers, by brute-force search over the
/// omega-coefficient b (the fundamental solution has the smallest b).
/// Throws CapacityError past b = 10^6.
UnitElement fundamental_unit(const QuadraticField& field);

/// (a + b*omega)^2, always norm +1.
UnitElement unit_square(const QuadraticField& field, const UnitElement& u);

struct SolLatticeData {
  QuadraticField field;
  UnitElement fundamental;                      // smallest unit > 1
  UnitElement unit_plus;                        // norm +1 unit used to embed
  std::array<std::array<std::int64_t, 2>, 2> monodromy{};  // u+ acting on (1, omega)
  std::array<std::array<std::int64_t, 2>, 2> ideal_basis{{{1, 0}, {0, 1}}};
  double log_unit = 0.0;                        // x-period of the lattice
};

/// Generators of the discrete cocompact subgroup, plus the Sol field data.
/// Generator order: E3 (e1, e2, e3); Nil ((1,0,0), (0,2,0), (0,0,1));
/// Sol (t, (0,1,1), (0,omega,sigma(omega))).
struct LatticeSpec {
  Model model;
  std::vector<GroupElement> generators;
  std::optional<SolLatticeData> sol;
};

LatticeSpec e3_standard_lattice();
LatticeSpec nil_standard_lattice();

/// Embed <u+> ⋉ O_K into Sol by (u, a) -> (log u, a, sigma(a)). The
/// embedding is a homomorphism only for a norm +1 unit, so the fundamental
/// unit is squared when its norm is -1.
LatticeSpec sol_lattice(const QuadraticField& field);
LatticeSpec sol_lattice(std::int64_t d);

/// log of the top eigenvalue of the monodromy matrix; equals log(unit_plus).
double monodromy_stretch(const LatticeSpec& spec);

/// A signed generator power; a word is read left to right as a product.
struct WordFactor {
  int index;
  std::int64_t power;
};
using Word = std::vector<WordFactor>;

GroupElement generator_power(const LatticeSpec& spec, int index,
                             std::int64_t power);
GroupElement evaluate_word(const LatticeSpec& spec, const Word& word);

struct Reduction {
  GroupElement rep;  // evaluate_word(word) * g, inside the fundamental domain
  Word word;
};

/// Reduce g into the fundamental domain: coordinate boxes for E3 and Nil,
/// x in [0, log u+) with (y, z) reduced by the translation sublattice for
/// Sol. Left cosets: the word acts by left multiplication.
Reduction reduce(const LatticeSpec& spec, const GroupElement& g);

bool in_fundamental_domain(const LatticeSpec& spec, const GroupElement& g);

/// Coordinates of g in the domain box: (x, y, z) for E3/Nil, and
/// (x, c1, c2) for Sol where (c1, c2) are translation-basis coordinates.
std::array<double, 3> domain_coordinates(const LatticeSpec& spec,
                                         const GroupElement& g);

/// Box lengths matching domain_coordinates; the circle moduli of the
/// quotient metric.
std::array<double, 3> domain_periods(const LatticeSpec& spec);

/// Smallest nonzero coordinate norm over all words of length <= max_length;
/// a brute-force discreteness check.
double minimal_displacement(const LatticeSpec& spec, int max_length);

}  // namespace geoflow
