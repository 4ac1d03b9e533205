#pragma once
#include <array>
#include <cmath>
#include <string>

#include "geoflow/errors.hpp"

namespace geoflow {

/// The three homogeneous geometries carried by every value type.
enum class Model { E3, Nil, Sol };

const char* model_name(Model m);
Model model_from_name(const std::string& name);  // throws UsageError

/// A point of the group G in global (x, y, z) coordinates.
/// The identity is (0, 0, 0) for all three models.
struct GroupElement {
  Model model;
  double x = 0.0, y = 0.0, z = 0.0;
};

/// An element of the Lie algebra in the frame (X, Y, Z) dual to the
/// left-invariant coframe (alpha, beta, gamma) at the identity.
struct AlgebraVector {
  Model model;
  double cx = 0.0, cy = 0.0, cz = 0.0;
};

/// Left-trivialized momentum p = pA*alpha + pB*beta + pG*gamma.
struct Covector {
  Model model;
  double pa = 0.0, pb = 0.0, pg = 0.0;
};

/// A left-trivialized point of T*G.
struct PhaseState {
  GroupElement g;
  Covector p;
};

inline GroupElement identity(Model m) { return {m, 0.0, 0.0, 0.0}; }

inline void require_same_model(Model a, Model b, const char* where) {
  if (a != b) throw UsageError(std::string(where) + ": model mismatch");
}

inline bool finite(const GroupElement& g) {
  return std::isfinite(g.x) && std::isfinite(g.y) && std::isfinite(g.z);
}

inline bool finite(const Covector& p) {
  return std::isfinite(p.pa) && std::isfinite(p.pb) && std::isfinite(p.pg);
}

}  // namespace geoflow
