#include "geoflow/groups.hpp"

#include <cmath>

namespace geoflow {

const char* model_name(Model m) {
  switch (m) {
    case Model::E3: return "e3";
    case Model::Nil: return "nil";
    case Model::Sol: return "sol";
  }
  return "?";
}

Model model_from_name(const std::string& name) {
  if (name == "e3" || name == "E3") return Model::E3;
  if (name == "nil" || name == "Nil") return Model::Nil;
  if (name == "sol" || name == "Sol") return Model::Sol;
  throw UsageError("unknown model '" + name + "' (expected e3, nil or sol)");
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  require_same_model(a.model, b.model, "multiply");
  switch (a.model) {
    case Model::E3:
      return {a.model, a.x + b.x, a.y + b.y, a.z + b.z};
    case Model::Nil:
      return {a.model, a.x + b.x, a.y + b.y,
              a.z + b.z + 0.5 * (a.x * b.y - b.x * a.y)};
    case Model::Sol:
      return {a.model, a.x + b.x, std::exp(a.x) * b.y + a.y,
              std::exp(-a.x) * b.z + a.z};
  }
  throw UsageError("multiply: bad model tag");
}

GroupElement inverse(const GroupElement& a) {
  switch (a.model) {
    case Model::E3:
    case Model::Nil:
      // the Nil central term cancels in a * a^-1
      return {a.model, -a.x, -a.y, -a.z};
    case Model::Sol:
      return {a.model, -a.x, -std::exp(-a.x) * a.y, -std::exp(a.x) * a.z};
  }
  throw UsageError("inverse: bad model tag");
}

GroupElement exponential(const AlgebraVector& v, double t) {
  switch (v.model) {
    case Model::E3:
    case Model::Nil:
      return {v.model, t * v.cx, t * v.cy, t * v.cz};
    case Model::Sol: {
      const double a = v.cx;
      const double ta = t * a;
      if (std::abs(ta) < 1e-6) {
        // (e^{ta}-1)/a and (1-e^{-ta})/a expanded to cubic order in ta
        const double fy = t * (1.0 + ta * (0.5 + ta * (1.0 / 6.0 + ta / 24.0)));
        const double fz = t * (1.0 - ta * (0.5 - ta * (1.0 / 6.0 - ta / 24.0)));
        return {v.model, ta, v.cy * fy, v.cz * fz};
      }
      return {v.model, ta, v.cy * std::expm1(ta) / a,
              v.cz * (-std::expm1(-ta)) / a};
    }
  }
  throw UsageError("exponential: bad model tag");
}

Covector coadjoint(const GroupElement& h, const Covector& p) {
  require_same_model(h.model, p.model, "coadjoint");
  switch (h.model) {
    case Model::E3:
      return p;
    case Model::Nil:
      return {p.model, p.pa + h.y * p.pg, p.pb - h.x * p.pg, p.pg};
    case Model::Sol: {
      const double ex = std::exp(h.x);
      const double emx = std::exp(-h.x);
      return {p.model, p.pa + h.y * emx * p.pb - h.z * ex * p.pg, emx * p.pb,
              ex * p.pg};
    }
  }
  throw UsageError("coadjoint: bad model tag");
}

// Coframe components of a covector written in the coordinate basis:
//   Nil  px = pA + y/2 pG,  py = pB - x/2 pG,  pz = pG
//   Sol  px = pA,           py = e^-x pB,      pz = e^x pG
CanonicalPoint to_canonical(const PhaseState& s) {
  require_same_model(s.g.model, s.p.model, "to_canonical");
  const auto& g = s.g;
  const auto& p = s.p;
  switch (g.model) {
    case Model::E3:
      return {g.x, g.y, g.z, p.pa, p.pb, p.pg};
    case Model::Nil:
      return {g.x, g.y, g.z, p.pa + 0.5 * g.y * p.pg, p.pb - 0.5 * g.x * p.pg,
              p.pg};
    case Model::Sol:
      return {g.x, g.y, g.z, p.pa, std::exp(-g.x) * p.pb,
              std::exp(g.x) * p.pg};
  }
  throw UsageError("to_canonical: bad model tag");
}

PhaseState from_canonical(Model m, const CanonicalPoint& c) {
  GroupElement g{m, c[0], c[1], c[2]};
  switch (m) {
    case Model::E3:
      return {g, {m, c[3], c[4], c[5]}};
    case Model::Nil:
      return {g, {m, c[3] - 0.5 * c[1] * c[5], c[4] + 0.5 * c[0] * c[5], c[5]}};
    case Model::Sol:
      return {g, {m, c[3], std::exp(c[0]) * c[4], std::exp(-c[0]) * c[5]}};
  }
  throw UsageError("from_canonical: bad model tag");
}

}  // namespace geoflow
