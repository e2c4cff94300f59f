#pragma once

// Bicharacteristic rays of the variable medium: Hamiltonian flow of
// H(x, k) = (1/2) sum_ij a_ij(x) k_i k_j with the analytic radial family
// (evaluated off-grid, on the full space -- rays probe trapping before any
// torus wrap matters). Integrator: implicit-midpoint steps composed to
// fourth order, so H is conserved to integrator tolerance with no drift.

#include <array>
#include <vector>

#include "wavelab/media.hpp"

namespace wavelab {

struct RayState {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::array<double, 3> k{0.0, 0.0, 0.0};
};

struct RayOptions {
  double dt = 2e-3;
  int record_stride = 50;   // trajectory samples every this many steps
  int fixed_point_iters = 64;
  double fixed_point_tol = 1e-14;
};

struct RayTrajectory {
  std::vector<double> times;
  std::vector<RayState> states;
  double h0 = 0.0;           // initial Hamiltonian
  double max_h_drift = 0.0;  // max |H - H0| / max(|H0|, eps)
  bool escaped = false;      // left the perturbation ball
  double t_escape = -1.0;
  bool monotone_after_escape = true;  // |x - center| nondecreasing afterwards
  double final_radius = 0.0;
};

double ray_hamiltonian(const RadialMedium& m, const RayState& z);
RayTrajectory ray_trace(const RadialMedium& m, const RayState& z0, double T,
                        const RayOptions& opts = {});

struct RayScan {
  int total = 0, escaped = 0;
  double max_h_drift = 0.0;
  double min_final_radius = 0.0;
  bool all_escaped_monotone = false;
};
// deterministic fan of rays launched from inside the perturbation ball
RayScan non_trapping_scan(const RadialMedium& m, int nrays, double T,
                          const RayOptions& opts = {});

}  // namespace wavelab
