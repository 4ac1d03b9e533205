#pragma once
#include <array>

#include "geoflow/model.hpp"

// Group operations, exponential maps, coadjoint actions, and the coframe
// change of chart for the three geometries:
//
//   E3   (x,y,z)*(x',y',z') = (x+x', y+y', z+z')
//   Nil  (x,y,z)*(x',y',z') = (x+x', y+y', z+z' + (x*y' - x'*y)/2)
//   Sol  (x,y,z)*(x',y',z') = (x+x', e^x*y' + y, e^-x*z' + z)
//
// The left-invariant coframe is alpha = dx, beta = dy, gamma = dz - (x dy - y dx)/2
// for Nil and alpha = dx, beta = e^-x dy, gamma = e^x dz for Sol; the metric
// makes it orthonormal in every model.

namespace geoflow {

GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);

/// exp(t*v): the one-parameter subgroup of v evaluated at time t.
/// For E3 and Nil this is t*(cx, cy, cz). For Sol with cx != 0 the y and z
/// legs pick up the factors (e^{t cx} - 1)/cx and (1 - e^{-t cx})/cx; the
/// removable singularity at cx -> 0 is handled by a cubic Taylor branch
/// below |t*cx| < 1e-6.
GroupElement exponential(const AlgebraVector& v, double t);

/// Momentum of the left G-action in the left trivialization.
///
/// The composition convention is fixed so that
///   coadjoint(h1*h2, p) == coadjoint(h1, coadjoint(h2, p)),
/// which makes h -> coadjoint(h, .) a homomorphism, and so that
/// coadjoint(g(t), p(t)) is constant along geodesics:
///   E3   p
///   Nil  (pA + y*pG, pB - x*pG, pG)
///   Sol  (pA + y e^-x pB - z e^x pG, e^-x pB, e^x pG)
///
/// Nil preserves pG exactly and Sol preserves pB*pG exactly (the e^x and
/// e^-x factors cancel).
Covector coadjoint(const GroupElement& h, const Covector& p);

/// Canonical chart (x, y, z, px, py, pz): the global Darboux coordinates on
/// T*G in which the oracle integrator and the bracket checker operate.
using CanonicalPoint = std::array<double, 6>;

CanonicalPoint to_canonical(const PhaseState& s);
PhaseState from_canonical(Model m, const CanonicalPoint& c);

}  // namespace geoflow
