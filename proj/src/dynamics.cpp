#include "geoflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace geoflow {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ImplicitMidpoint: return "midpoint";
    case Scheme::SplittingLeapfrog: return "leapfrog";
    case Scheme::OracleRK8: return "oracle";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "midpoint") return Scheme::ImplicitMidpoint;
  if (name == "leapfrog") return Scheme::SplittingLeapfrog;
  if (name == "oracle") return Scheme::OracleRK8;
  throw UsageError("unknown scheme '" + name +
                   "' (expected midpoint, leapfrog or oracle)");
}

Covector euler_field(const Covector& p) {
  switch (p.model) {
    case Model::E3:
      return {p.model, 0.0, 0.0, 0.0};
    case Model::Nil:
      return {p.model, -p.pb * p.pg, p.pa * p.pg, 0.0};
    case Model::Sol:
      return {p.model, p.pg * p.pg - p.pb * p.pb, p.pa * p.pb, -p.pa * p.pg};
  }
  throw UsageError("euler_field: bad model tag");
}

AlgebraVector reconstruction_field(const PhaseState& s) {
  return {s.p.model, s.p.pa, s.p.pb, s.p.pg};
}

namespace {

using Vec6 = std::array<double, 6>;
using Mat6 = std::array<std::array<double, 6>, 6>;

Vec6 pack(const PhaseState& s) {
  return {s.g.x, s.g.y, s.g.z, s.p.pa, s.p.pb, s.p.pg};
}

PhaseState unpack(Model m, const Vec6& u) {
  return {{m, u[0], u[1], u[2]}, {m, u[3], u[4], u[5]}};
}

// Full coordinate vector field: group part dL_g(p) written out in the chart,
// momentum part the Euler field.
Vec6 field(Model m, const Vec6& u) {
  const double pa = u[3], pb = u[4], pg = u[5];
  switch (m) {
    case Model::E3:
      return {pa, pb, pg, 0.0, 0.0, 0.0};
    case Model::Nil:
      return {pa, pb, pg + 0.5 * (u[0] * pb - u[1] * pa), -pb * pg, pa * pg,
              0.0};
    case Model::Sol: {
      const double ex = std::exp(u[0]);
      return {pa, ex * pb, pg / ex, pg * pg - pb * pb, pa * pb, -pa * pg};
    }
  }
  throw UsageError("field: bad model tag");
}

// Analytic Jacobian of field().
Mat6 field_jacobian(Model m, const Vec6& u) {
  Mat6 J{};
  const double pa = u[3], pb = u[4], pg = u[5];
  switch (m) {
    case Model::E3:
      J[0][3] = 1.0;
      J[1][4] = 1.0;
      J[2][5] = 1.0;
      break;
    case Model::Nil:
      J[0][3] = 1.0;
      J[1][4] = 1.0;
      J[2][0] = 0.5 * pb;
      J[2][1] = -0.5 * pa;
      J[2][3] = -0.5 * u[1];
      J[2][4] = 0.5 * u[0];
      J[2][5] = 1.0;
      J[3][4] = -pg;
      J[3][5] = -pb;
      J[4][3] = pg;
      J[4][5] = pa;
      break;
    case Model::Sol: {
      const double ex = std::exp(u[0]);
      const double emx = 1.0 / ex;
      J[0][3] = 1.0;
      J[1][0] = ex * pb;
      J[1][4] = ex;
      J[2][0] = -emx * pg;
      J[2][5] = emx;
      J[3][4] = -2.0 * pb;
      J[3][5] = 2.0 * pg;
      J[4][3] = pb;
      J[4][4] = pa;
      J[5][3] = -pg;
      J[5][5] = -pa;
      break;
    }
  }
  return J;
}

// In-place LU solve with partial pivoting; returns false on a singular pivot.
template <size_t N>
bool lu_solve(std::array<std::array<double, N>, N>& A,
              std::array<double, N>& b) {
  for (size_t k = 0; k < N; ++k) {
    size_t piv = k;
    for (size_t i = k + 1; i < N; ++i)
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    if (std::abs(A[piv][k]) < 1e-300) return false;
    if (piv != k) {
      std::swap(A[piv], A[k]);
      std::swap(b[piv], b[k]);
    }
    for (size_t i = k + 1; i < N; ++i) {
      const double f = A[i][k] / A[k][k];
      A[i][k] = f;
      for (size_t j = k + 1; j < N; ++j) A[i][j] -= f * A[k][j];
      b[i] -= f * b[k];
    }
  }
  for (size_t i = N; i-- > 0;) {
    for (size_t j = i + 1; j < N; ++j) b[i] -= A[i][j] * b[j];
    b[i] /= A[i][i];
  }
  return true;
}

constexpr int kNewtonMaxIter = 50;
constexpr double kNewtonTol = 1e-14;

// Implicit midpoint on the full 6-dimensional coordinate system:
//   w = u + h f((u + w)/2)
// solved by Newton with the analytic Jacobian, falling back to a fixed-point
// sweep when the Newton matrix is singular. The iteration stops at the
// round-off floor, so quadratic invariants of the flow are held to it.
Vec6 midpoint_solve(Model m, const Vec6& u, double h, double t_for_error) {
  Vec6 w = u;
  {
    const Vec6 f0 = field(m, u);
    for (int i = 0; i < 6; ++i) w[i] = u[i] + h * f0[i];
  }
  double prev_res = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
    Vec6 mid;
    for (int i = 0; i < 6; ++i) mid[i] = 0.5 * (u[i] + w[i]);
    const Vec6 f = field(m, mid);
    Vec6 G;
    double res = 0.0;
    for (int i = 0; i < 6; ++i) {
      G[i] = w[i] - u[i] - h * f[i];
      res = std::max(res, std::abs(G[i]));
    }
    if (res <= kNewtonTol) return w;
    if (res < 1e-10 && res >= prev_res) return w;  // round-off floor
    prev_res = res;

    Mat6 J = field_jacobian(m, mid);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) J[i][j] = (i == j ? 1.0 : 0.0) - 0.5 * h * J[i][j];
    Vec6 dw = G;
    if (lu_solve(J, dw)) {
      for (int i = 0; i < 6; ++i) w[i] -= dw[i];
    } else {
      for (int i = 0; i < 6; ++i) w[i] = u[i] + h * f[i];
    }
  }
  throw IntegrationError("implicit midpoint: Newton did not converge",
                         t_for_error, h);
}

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Vec3 euler3(Model m, const Vec3& p) {
  const Covector d = euler_field({m, p[0], p[1], p[2]});
  return {d.pa, d.pb, d.pg};
}

Mat3 euler3_jacobian(Model m, const Vec3& p) {
  Mat3 J{};
  switch (m) {
    case Model::E3:
      break;
    case Model::Nil:
      J[0][1] = -p[2];
      J[0][2] = -p[1];
      J[1][0] = p[2];
      J[1][2] = p[0];
      break;
    case Model::Sol:
      J[0][1] = -2.0 * p[1];
      J[0][2] = 2.0 * p[2];
      J[1][0] = p[1];
      J[1][1] = p[0];
      J[2][0] = -p[2];
      J[2][2] = -p[0];
      break;
  }
  return J;
}

// Implicit midpoint on the momentum subsystem alone.
Vec3 momentum_midpoint(Model m, const Vec3& p, double h, double t_for_error) {
  if (m == Model::E3) return p;
  Vec3 w = p;
  {
    const Vec3 f0 = euler3(m, p);
    for (int i = 0; i < 3; ++i) w[i] = p[i] + h * f0[i];
  }
  double prev_res = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
    Vec3 mid;
    for (int i = 0; i < 3; ++i) mid[i] = 0.5 * (p[i] + w[i]);
    const Vec3 f = euler3(m, mid);
    Vec3 G;
    double res = 0.0;
    for (int i = 0; i < 3; ++i) {
      G[i] = w[i] - p[i] - h * f[i];
      res = std::max(res, std::abs(G[i]));
    }
    if (res <= kNewtonTol) return w;
    if (res < 1e-10 && res >= prev_res) return w;
    prev_res = res;

    Mat3 J = euler3_jacobian(m, mid);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) J[i][j] = (i == j ? 1.0 : 0.0) - 0.5 * h * J[i][j];
    Vec3 dw = G;
    if (lu_solve(J, dw)) {
      for (int i = 0; i < 3; ++i) w[i] -= dw[i];
    } else {
      for (int i = 0; i < 3; ++i) w[i] = p[i] + h * f[i];
    }
  }
  throw IntegrationError("splitting leapfrog: Newton did not converge",
                         t_for_error, h);
}

// Strang splitting: half momentum kick, exact exponential-map group
// translation with the frozen body velocity, half momentum kick.
PhaseState leapfrog_step(const PhaseState& s, double h, double t_for_error) {
  const Model m = s.g.model;
  Vec3 p{s.p.pa, s.p.pb, s.p.pg};
  p = momentum_midpoint(m, p, 0.5 * h, t_for_error);
  const GroupElement g =
      multiply(s.g, exponential({m, p[0], p[1], p[2]}, h));
  p = momentum_midpoint(m, p, 0.5 * h, t_for_error);
  return {g, {m, p[0], p[1], p[2]}};
}

}  // namespace

std::array<double, 6> phase_velocity(const PhaseState& s) {
  require_same_model(s.g.model, s.p.model, "phase_velocity");
  return field(s.g.model, pack(s));
}

PhaseState step(const PhaseState& s, double h, Scheme scheme) {
  require_same_model(s.g.model, s.p.model, "step");
  if (h == 0.0 || !std::isfinite(h)) throw UsageError("step: h must be nonzero and finite");
  switch (scheme) {
    case Scheme::ImplicitMidpoint:
      return unpack(s.g.model, midpoint_solve(s.g.model, pack(s), h, 0.0));
    case Scheme::SplittingLeapfrog:
      return leapfrog_step(s, h, 0.0);
    case Scheme::OracleRK8:
      throw UsageError("step: the oracle has its own entry point");
  }
  throw UsageError("step: bad scheme tag");
}

namespace {

Trajectory make_trajectory(Model m, Scheme scheme, double h, int stride) {
  Trajectory traj;
  traj.model = m;
  traj.scheme = scheme;
  traj.step = h;
  traj.stride = stride;
  return traj;
}

long long step_count(double T, double h) {
  if (!(T > 0.0)) throw UsageError("integrate: T must be positive");
  if (!(h > 0.0) || h > T + 1e-15) throw UsageError("integrate: need 0 < h <= T");
  return std::max<long long>(1, std::llround(T / h));
}

}  // namespace

Trajectory integrate(const PhaseState& s, double T, double h, Scheme scheme,
                     int stride) {
  require_same_model(s.g.model, s.p.model, "integrate");
  if (scheme == Scheme::OracleRK8) return oracle_integrate(s, T, h, stride);
  if (stride < 1) throw UsageError("integrate: stride must be >= 1");
  const Model m = s.g.model;
  const long long n = step_count(T, h);
  Trajectory traj = make_trajectory(m, scheme, h, stride);
  traj.times.push_back(0.0);
  traj.states.push_back(s);
  PhaseState cur = s;
  for (long long k = 1; k <= n; ++k) {
    try {
      cur = (scheme == Scheme::ImplicitMidpoint)
                ? unpack(m, midpoint_solve(m, pack(cur), h, (k - 1) * h))
                : leapfrog_step(cur, h, (k - 1) * h);
    } catch (const IntegrationError& e) {
      throw IntegrationError(std::string(e.what()) + " at t = " +
                                 std::to_string((k - 1) * h),
                             (k - 1) * h, h);
    }
    if (k % stride == 0 || k == n) {
      traj.times.push_back(k * h);
      traj.states.push_back(cur);
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Oracle: canonical Hamilton equations, 8th-order extrapolated Gragg midpoint
// ---------------------------------------------------------------------------

CanonicalPoint canonical_field(Model m, const CanonicalPoint& u) {
  const double px = u[3], py = u[4], pz = u[5];
  switch (m) {
    case Model::E3:
      return {px, py, pz, 0.0, 0.0, 0.0};
    case Model::Nil: {
      // H = ((px - y/2 pz)^2 + (py + x/2 pz)^2 + pz^2)/2
      const double ba = px - 0.5 * u[1] * pz;
      const double bb = py + 0.5 * u[0] * pz;
      return {ba, bb, -0.5 * u[1] * ba + 0.5 * u[0] * bb + pz,
              -0.5 * bb * pz, 0.5 * ba * pz, 0.0};
    }
    case Model::Sol: {
      // H = (px^2 + e^{2x} py^2 + e^{-2x} pz^2)/2
      const double e2 = std::exp(2.0 * u[0]);
      return {px, e2 * py, pz / e2, pz * pz / e2 - e2 * py * py, 0.0, 0.0};
    }
  }
  throw UsageError("canonical_field: bad model tag");
}

namespace {

// Gragg's modified midpoint: advance u by H in n substeps (n even). The
// error of the smoothed result expands in even powers of H/n, which is what
// the extrapolation below relies on.
CanonicalPoint gragg(Model m, const CanonicalPoint& u, double H, int n) {
  const double h = H / n;
  CanonicalPoint z0 = u;
  CanonicalPoint f = canonical_field(m, z0);
  CanonicalPoint z1;
  for (int i = 0; i < 6; ++i) z1[i] = z0[i] + h * f[i];
  for (int k = 1; k < n; ++k) {
    f = canonical_field(m, z1);
    CanonicalPoint z2;
    for (int i = 0; i < 6; ++i) z2[i] = z0[i] + 2.0 * h * f[i];
    z0 = z1;
    z1 = z2;
  }
  f = canonical_field(m, z1);
  CanonicalPoint out;
  for (int i = 0; i < 6; ++i) out[i] = 0.5 * (z1[i] + z0[i] + h * f[i]);
  return out;
}

constexpr int kSeq[4] = {2, 4, 6, 8};

// One macro step of order 8: Aitken-Neville extrapolation of the Gragg
// results to substep size zero in the variable (H/n)^2.
CanonicalPoint oracle_step(Model m, const CanonicalPoint& u, double H) {
  CanonicalPoint tab[4][4];
  for (int i = 0; i < 4; ++i) {
    tab[i][0] = gragg(m, u, H, kSeq[i]);
    for (int j = 1; j <= i; ++j) {
      const double r = double(kSeq[i]) / double(kSeq[i - j]);
      const double den = r * r - 1.0;
      for (int c = 0; c < 6; ++c)
        tab[i][j][c] =
            tab[i][j - 1][c] + (tab[i][j - 1][c] - tab[i - 1][j - 1][c]) / den;
    }
  }
  return tab[3][3];
}

}  // namespace

Trajectory oracle_integrate(const PhaseState& s, double T, double h,
                            int stride) {
  require_same_model(s.g.model, s.p.model, "oracle_integrate");
  if (stride < 1) throw UsageError("oracle_integrate: stride must be >= 1");
  if (!(h > 0.0)) throw UsageError("oracle_integrate: h must be positive");
  const Model m = s.g.model;
  const long long n = step_count(T, h);
  Trajectory traj = make_trajectory(m, Scheme::OracleRK8, h, stride);
  traj.times.push_back(0.0);
  traj.states.push_back(s);
  CanonicalPoint u = to_canonical(s);
  for (long long k = 1; k <= n; ++k) {
    u = oracle_step(m, u, h);
    for (double c : u)
      if (!std::isfinite(c))
        throw IntegrationError("oracle: non-finite state", k * h, h);
    if (k % stride == 0 || k == n) {
      traj.times.push_back(k * h);
      traj.states.push_back(from_canonical(m, u));
    }
  }
  return traj;
}

}  // namespace geoflow
