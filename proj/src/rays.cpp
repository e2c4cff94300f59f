#include "wavelab/rays.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavelab {

namespace {

struct Deriv {
  std::array<double, 3> dx{}, dk{};
};

// exact flow field of H = 1/2 [ (1 + beta m)|k|^2 + gamma m ((sum k)^2 - |k|^2) ]
Deriv flow(const RadialMedium& m, const RayState& z) {
  Deriv d;
  const double rx = z.x[0] - m.center[0], ry = z.x[1] - m.center[1], rz = z.x[2] - m.center[2];
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  const double mb = mollifier(r, m.width);
  const double mp = mollifier_prime(r, m.width);
  const double s = z.k[0] + z.k[1] + z.k[2];
  const double k2 = z.k[0] * z.k[0] + z.k[1] * z.k[1] + z.k[2] * z.k[2];
  const double diag = 1.0 + (m.beta - m.gamma) * mb;
  for (int i = 0; i < 3; ++i) d.dx[i] = diag * z.k[i] + m.gamma * mb * s;
  if (r > 0.0 && mp != 0.0) {
    const double dh = 0.5 * (m.beta * k2 + m.gamma * (s * s - k2)) * mp / r;
    d.dk[0] = -dh * rx;
    d.dk[1] = -dh * ry;
    d.dk[2] = -dh * rz;
  }
  return d;
}

// one implicit-midpoint substep of size dt (fixed-point solve)
RayState midpoint(const RadialMedium& m, const RayState& z, double dt, const RayOptions& opts) {
  RayState mid = z;
  {
    const Deriv d0 = flow(m, z);
    for (int i = 0; i < 3; ++i) {
      mid.x[i] = z.x[i] + 0.5 * dt * d0.dx[i];
      mid.k[i] = z.k[i] + 0.5 * dt * d0.dk[i];
    }
  }
  for (int it = 0; it < opts.fixed_point_iters; ++it) {
    const Deriv d = flow(m, mid);
    double delta = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double nx = z.x[i] + 0.5 * dt * d.dx[i];
      const double nk = z.k[i] + 0.5 * dt * d.dk[i];
      delta = std::max(delta, std::max(std::abs(nx - mid.x[i]), std::abs(nk - mid.k[i])));
      mid.x[i] = nx;
      mid.k[i] = nk;
    }
    if (delta < opts.fixed_point_tol) break;
  }
  RayState out;
  for (int i = 0; i < 3; ++i) {
    out.x[i] = 2.0 * mid.x[i] - z.x[i];
    out.k[i] = 2.0 * mid.k[i] - z.k[i];
  }
  return out;
}

}  // namespace

double ray_hamiltonian(const RadialMedium& m, const RayState& z) {
  const double rx = z.x[0] - m.center[0], ry = z.x[1] - m.center[1], rz = z.x[2] - m.center[2];
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  const double mb = mollifier(r, m.width);
  const double s = z.k[0] + z.k[1] + z.k[2];
  const double k2 = z.k[0] * z.k[0] + z.k[1] * z.k[1] + z.k[2] * z.k[2];
  return 0.5 * ((1.0 + m.beta * mb) * k2 + m.gamma * mb * (s * s - k2));
}

RayTrajectory ray_trace(const RadialMedium& m, const RayState& z0, double T,
                        const RayOptions& opts) {
  const double k2 = z0.k[0] * z0.k[0] + z0.k[1] * z0.k[1] + z0.k[2] * z0.k[2];
  if (!(k2 > 0.0)) throw std::invalid_argument("ray_trace: zero initial momentum");
  if (!(T > 0.0)) throw std::invalid_argument("ray_trace: T must be positive");

  // fourth-order composition of midpoint substeps
  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2);
  const double w0 = -cbrt2 * w1;

  const int nsteps = std::max(1, static_cast<int>(std::ceil(T / opts.dt)));
  const double dt = T / nsteps;

  RayTrajectory traj;
  traj.h0 = ray_hamiltonian(m, z0);
  const double href = std::max(std::abs(traj.h0), 1e-30);
  const double r0 = m.perturbation_radius();

  RayState z = z0;
  auto radius = [&](const RayState& s) {
    const double ax = s.x[0] - m.center[0], ay = s.x[1] - m.center[1],
                 az = s.x[2] - m.center[2];
    return std::sqrt(ax * ax + ay * ay + az * az);
  };
  double last_r = radius(z);
  if (r0 <= 0.0 || last_r > r0) {
    traj.escaped = true;
    traj.t_escape = 0.0;
  }
  traj.times.push_back(0.0);
  traj.states.push_back(z);

  for (int k = 1; k <= nsteps; ++k) {
    z = midpoint(m, z, w1 * dt, opts);
    z = midpoint(m, z, w0 * dt, opts);
    z = midpoint(m, z, w1 * dt, opts);
    const double t = k * dt;
    const double h = ray_hamiltonian(m, z);
    traj.max_h_drift = std::max(traj.max_h_drift, std::abs(h - traj.h0) / href);
    const double r = radius(z);
    if (!traj.escaped && r > r0) {
      traj.escaped = true;
      traj.t_escape = t;
    } else if (traj.escaped && r < last_r - 1e-9 * std::max(1.0, r0)) {
      traj.monotone_after_escape = false;
    }
    last_r = r;
    if (k % std::max(1, opts.record_stride) == 0 || k == nsteps) {
      traj.times.push_back(t);
      traj.states.push_back(z);
    }
  }
  traj.final_radius = last_r;
  return traj;
}

RayScan non_trapping_scan(const RadialMedium& m, int nrays, double T, const RayOptions& opts) {
  RayScan scan;
  scan.total = nrays;
  scan.min_final_radius = 1e300;
  bool all = true;
  const double r0 = std::max(m.perturbation_radius(), 1e-6);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < nrays; ++i) {
    // golden-angle fan of directions, staggered launch radii inside the ball
    const double zc = 1.0 - 2.0 * (i + 0.5) / nrays;
    const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const double ph = golden * i;
    const std::array<double, 3> dir{rho * std::cos(ph), rho * std::sin(ph), zc};
    const double launch = 0.5 * r0 * static_cast<double>(i % 3) / 2.0;
    RayState z0;
    for (int a = 0; a < 3; ++a) {
      // offset direction decorrelated from the momentum direction
      z0.x[a] = m.center[a] + launch * dir[(a + 1) % 3];
      z0.k[a] = dir[a];
    }
    const RayTrajectory tr = ray_trace(m, z0, T, opts);
    if (tr.escaped) ++scan.escaped;
    all = all && tr.escaped && tr.monotone_after_escape;
    scan.max_h_drift = std::max(scan.max_h_drift, tr.max_h_drift);
    scan.min_final_radius = std::min(scan.min_final_radius, tr.final_radius);
  }
  scan.all_escaped_monotone = all;
  return scan;
}

}  // namespace wavelab
