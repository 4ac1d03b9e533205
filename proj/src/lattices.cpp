#include "geoflow/lattices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "geoflow/groups.hpp"

namespace geoflow {

namespace {

constexpr std::int64_t kUnitSearchBound = 1000000;

bool is_square_free(std::int64_t d) {
  if (d % 4 == 0) return false;
  for (std::int64_t k = 2; k * k <= d; ++k)
    if (d % (k * k) == 0) return false;
  return true;
}

// exact integer square root test
bool perfect_square(std::int64_t t, std::int64_t& root) {
  if (t < 0) return false;
  std::int64_t r = std::llround(std::sqrt(double(t)));
  for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
    if (c * c == t) {
      root = c;
      return true;
    }
  return false;
}

std::int64_t checked(__int128 v, const char* where) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw CapacityError(std::string(where) + ": integer overflow");
  return std::int64_t(v);
}

}  // namespace

double QuadraticField::omega() const {
  return half_basis ? 0.5 * (1.0 + std::sqrt(double(d))) : std::sqrt(double(d));
}

double QuadraticField::omega_conj() const {
  return half_basis ? 0.5 * (1.0 - std::sqrt(double(d))) : -std::sqrt(double(d));
}

QuadraticField make_quadratic_field(std::int64_t d) {
  if (d < 2) throw UsageError("quadratic field: d must be >= 2");
  if (!is_square_free(d))
    throw UsageError("quadratic field: d = " + std::to_string(d) +
                     " is not square-free");
  return {d, d % 4 == 1};
}

std::int64_t ring_norm(const QuadraticField& field, std::int64_t a,
                       std::int64_t b) {
  const __int128 A = a, B = b;
  __int128 n;
  if (field.half_basis)
    n = A * A + A * B - B * B * ((field.d - 1) / 4);
  else
    n = A * A - B * B * field.d;
  return checked(n, "ring_norm");
}

UnitElement fundamental_unit(const QuadraticField& field) {
  const std::int64_t d = field.d;
  for (std::int64_t b = 1; b <= kUnitSearchBound; ++b) {
    const std::int64_t db2 = checked(__int128(d) * b * b, "fundamental_unit");
    UnitElement best{};
    bool found = false;
    auto consider = [&](std::int64_t a, int norm) {
      const double value = a + b * field.omega();
      if (value <= 1.0) return;
      if (!found || value < best.value) {
        best = {a, b, value, norm};
        found = true;
      }
    };
    if (field.half_basis) {
      // norm n solutions of a^2 + ab + b^2(1-d)/4 = n have discriminant
      // d b^2 + 4n; take the root a = (-b + r)/2
      for (int n : {-1, +1}) {
        std::int64_t r;
        if (perfect_square(db2 + 4 * n, r) && (r - b) % 2 == 0)
          consider((-b + r) / 2, n);
      }
    } else {
      std::int64_t r;
      if (perfect_square(db2 - 1, r)) consider(r, -1);
      if (perfect_square(db2 + 1, r)) consider(r, +1);
    }
    if (found) return best;
  }
  throw CapacityError("fundamental_unit: no unit with b <= 10^6 for d = " +
                      std::to_string(field.d));
}

UnitElement unit_square(const QuadraticField& field, const UnitElement& u) {
  const __int128 A = u.a, B = u.b;
  std::int64_t a2, b2;
  if (field.half_basis) {
    // omega^2 = (d-1)/4 + omega
    a2 = checked(A * A + B * B * ((field.d - 1) / 4), "unit_square");
    b2 = checked(2 * A * B + B * B, "unit_square");
  } else {
    a2 = checked(A * A + B * B * field.d, "unit_square");
    b2 = checked(2 * A * B, "unit_square");
  }
  return {a2, b2, a2 + b2 * field.omega(), 1};
}

namespace {

void check_discreteness(const LatticeSpec& spec) {
  const double min_disp = minimal_displacement(spec, 3);
  if (!(min_disp > 1e-6))
    throw UsageError("lattice generators are not uniformly discrete");
}

}  // namespace

LatticeSpec e3_standard_lattice() {
  LatticeSpec spec{Model::E3,
                   {{Model::E3, 1, 0, 0}, {Model::E3, 0, 1, 0}, {Model::E3, 0, 0, 1}},
                   std::nullopt};
  check_discreteness(spec);
  return spec;
}

LatticeSpec nil_standard_lattice() {
  LatticeSpec spec{Model::Nil,
                   {{Model::Nil, 1, 0, 0}, {Model::Nil, 0, 2, 0}, {Model::Nil, 0, 0, 1}},
                   std::nullopt};
  check_discreteness(spec);
  return spec;
}

LatticeSpec sol_lattice(const QuadraticField& field) {
  SolLatticeData data;
  data.field = field;
  data.fundamental = fundamental_unit(field);
  data.unit_plus = data.fundamental.norm == 1
                       ? data.fundamental
                       : unit_square(field, data.fundamental);
  data.log_unit = std::log(data.unit_plus.value);

  // multiplication by u+ = A + B*omega on the basis (1, omega), columns are
  // the images
  const std::int64_t A = data.unit_plus.a, B = data.unit_plus.b;
  if (field.half_basis) {
    data.monodromy = {{{A, B * ((field.d - 1) / 4)}, {B, A + B}}};
  } else {
    data.monodromy = {{{A, B * field.d}, {B, A}}};
  }
  const __int128 det = __int128(data.monodromy[0][0]) * data.monodromy[1][1] -
                       __int128(data.monodromy[0][1]) * data.monodromy[1][0];
  if (det != 1)
    throw Error("sol_lattice: monodromy determinant is not 1");

  const double w = field.omega(), wc = field.omega_conj();
  LatticeSpec spec{Model::Sol,
                   {{Model::Sol, data.log_unit, 0, 0},
                    {Model::Sol, 0, 1, 1},
                    {Model::Sol, 0, w, wc}},
                   data};
  check_discreteness(spec);
  return spec;
}

LatticeSpec sol_lattice(std::int64_t d) {
  return sol_lattice(make_quadratic_field(d));
}

double monodromy_stretch(const LatticeSpec& spec) {
  if (spec.model != Model::Sol || !spec.sol)
    throw UsageError("monodromy_stretch: needs a Sol lattice");
  const auto& M = spec.sol->monodromy;
  const double tr = double(M[0][0]) + double(M[1][1]);
  if (std::abs(tr) <= 2.0)
    throw Error("monodromy_stretch: |trace| <= 2, matrix is not hyperbolic");
  const double lam = 0.5 * (tr + std::sqrt(tr * tr - 4.0));
  return std::log(lam);
}

GroupElement generator_power(const LatticeSpec& spec, int index,
                             std::int64_t power) {
  if (index < 0 || size_t(index) >= spec.generators.size())
    throw UsageError("generator_power: index out of range");
  const GroupElement& g = spec.generators[index];
  const double n = double(power);
  switch (spec.model) {
    case Model::E3:
    case Model::Nil:
      // one-parameter subgroups are coordinate lines (exp is the identity)
      return {g.model, n * g.x, n * g.y, n * g.z};
    case Model::Sol:
      if (g.x == 0.0) return {g.model, 0.0, n * g.y, n * g.z};
      if (g.y == 0.0 && g.z == 0.0) return {g.model, n * g.x, 0.0, 0.0};
      throw UsageError("generator_power: unsupported Sol generator shape");
  }
  throw UsageError("generator_power: bad model tag");
}

GroupElement evaluate_word(const LatticeSpec& spec, const Word& word) {
  GroupElement out = identity(spec.model);
  for (const WordFactor& f : word)
    out = multiply(out, generator_power(spec, f.index, f.power));
  return out;
}

namespace {

// translation-basis coordinates of the Sol (y, z) plane
void sol_basis_coords(const SolLatticeData& data, double y, double z,
                      double& c1, double& c2) {
  const double w = data.field.omega(), wc = data.field.omega_conj();
  c2 = (z - y) / (wc - w);
  c1 = y - c2 * w;
}

}  // namespace

std::array<double, 3> domain_coordinates(const LatticeSpec& spec,
                                         const GroupElement& g) {
  require_same_model(spec.model, g.model, "domain_coordinates");
  if (spec.model == Model::Sol) {
    double c1, c2;
    sol_basis_coords(*spec.sol, g.y, g.z, c1, c2);
    return {g.x, c1, c2};
  }
  return {g.x, g.y, g.z};
}

std::array<double, 3> domain_periods(const LatticeSpec& spec) {
  switch (spec.model) {
    case Model::E3: return {1.0, 1.0, 1.0};
    case Model::Nil: return {1.0, 2.0, 1.0};
    case Model::Sol: return {spec.sol->log_unit, 1.0, 1.0};
  }
  throw UsageError("domain_periods: bad model tag");
}

bool in_fundamental_domain(const LatticeSpec& spec, const GroupElement& g) {
  const auto c = domain_coordinates(spec, g);
  const auto per = domain_periods(spec);
  for (int i = 0; i < 3; ++i)
    if (!(c[i] >= 0.0 && c[i] < per[i])) return false;
  return true;
}

Reduction reduce(const LatticeSpec& spec, const GroupElement& g) {
  require_same_model(spec.model, g.model, "reduce");
  if (!finite(g)) throw ReductionError("reduce: non-finite coordinates");

  constexpr double kMaxPower = 9e15;  // stay in the exact-double integer range
  GroupElement cur = g;
  Word word;

  auto apply = [&](int index, double count) {
    if (count == 0.0) return;
    if (std::abs(count) > kMaxPower)
      throw ReductionError("reduce: generator power out of range");
    const std::int64_t n = std::int64_t(count);
    cur = multiply(generator_power(spec, index, -n), cur);
    word.insert(word.begin(), {index, -n});
  };

  for (int pass = 0; pass < 4; ++pass) {
    if (in_fundamental_domain(spec, cur)) return {cur, word};
    switch (spec.model) {
      case Model::E3:
        for (int i = 0; i < 3; ++i) {
          const double c = (i == 0 ? cur.x : i == 1 ? cur.y : cur.z);
          apply(i, std::floor(c));
        }
        break;
      case Model::Nil:
        apply(0, std::floor(cur.x));
        apply(1, std::floor(cur.y / 2.0));
        apply(2, std::floor(cur.z));
        break;
      case Model::Sol: {
        apply(0, std::floor(cur.x / spec.sol->log_unit));
        // basis coordinates are linear in (y, z), so removing the T2 part
        // leaves c1 unchanged
        double c1, c2;
        sol_basis_coords(*spec.sol, cur.y, cur.z, c1, c2);
        apply(2, std::floor(c2));
        apply(1, std::floor(c1));
        break;
      }
    }
  }
  if (in_fundamental_domain(spec, cur)) return {cur, word};
  throw ReductionError("reduce: did not land in the fundamental domain");
}

double minimal_displacement(const LatticeSpec& spec, int max_length) {
  std::vector<GroupElement> frontier{identity(spec.model)};
  std::unordered_set<std::string> seen;
  auto key = [](const GroupElement& g) {
    return std::to_string(std::llround(g.x * 1e9)) + "," +
           std::to_string(std::llround(g.y * 1e9)) + "," +
           std::to_string(std::llround(g.z * 1e9));
  };
  seen.insert(key(frontier[0]));
  double best = std::numeric_limits<double>::infinity();
  for (int len = 0; len < max_length; ++len) {
    std::vector<GroupElement> next;
    for (const GroupElement& e : frontier) {
      for (size_t i = 0; i < spec.generators.size(); ++i) {
        for (int sgn : {+1, -1}) {
          const GroupElement n =
              multiply(e, generator_power(spec, int(i), sgn));
          if (!seen.insert(key(n)).second) continue;
          const double norm =
              std::sqrt(n.x * n.x + n.y * n.y + n.z * n.z);
          if (norm > 1e-9) best = std::min(best, norm);
          next.push_back(n);
        }
      }
    }
    frontier = std::move(next);
  }
  return best;
}

}  // namespace geoflow
