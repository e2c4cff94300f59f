#pragma once

// Variable-coefficient acoustics on the periodic box (three dimensions):
// u_tt = div(a(x) grad u) - a0(x) u with a(x) symmetric positive definite and
// equal to the identity outside a compact perturbation ball. Time stepping is
// velocity Verlet on a symmetric discrete operator (flux-form second
// differences with arithmetic-mean half-node coefficients on the diagonal,
// centered first differences for the cross terms), so the one-step map S
// satisfies S^T = swap . S . swap exactly and the adjoint dynamics is a
// component swap away from the forward solver.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

// analytic radial family: a_ij(x) = (1 + beta m(r)) delta_ij
//                                   + gamma m(r) (1 - delta_ij),
//                         a0(x)   = a0_amp m_0(r),
// with m the C-infinity mollifier of the given support radius and
// r = |x - center| (torus metric when rendered on a grid)
struct RadialMedium {
  double beta = 0.0;     // diagonal bump amplitude (> -1 keeps hyperbolicity)
  double width = 1.0;    // support radius of the matrix bump
  double gamma = 0.0;    // off-diagonal coupling amplitude
  double a0_amp = 0.0;   // potential amplitude (>= 0)
  double a0_width = 1.0; // support radius of the potential bump
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double perturbation_radius() const;  // max of the two widths
};

// d/dr of mollifier(r, R)
double mollifier_prime(double r, double R);

// nodal coefficient arrays; symmetric storage (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
struct CoefficientField {
  GridSpec grid;
  std::array<std::vector<double>, 6> a;
  std::vector<double> a0;
  double perturbation_radius = 0.0;
  static int slot(int i, int j);  // upper-triangle index
};
CoefficientField identity_medium(const GridSpec& g);
CoefficientField render_medium(const GridSpec& g, const RadialMedium& m);

struct HyperbolicityReport {
  double alpha = 0.0;  // half the smallest nodal eigenvalue of a(x)
  double min_eig = 0.0, max_eig = 0.0;
  double max_potential = 0.0, min_potential = 0.0;
};
// throws if some nodal matrix fails positive definiteness or a0 < 0
HyperbolicityReport check_hyperbolicity(const CoefficientField& c);

// out = div(a grad u) - a0 u; symmetric as a matrix in the nodal basis
std::vector<double> apply_operator(const CoefficientField& c, const std::vector<double>& u);
// <u, -A u> h^n  (discrete potential-energy quadratic form, >= 0)
double operator_quadratic(const CoefficientField& c, const std::vector<double>& u);

struct FdtdOptions {
  double cfl = 0.4;        // fraction of the Verlet stability limit, <= 0.5
  int steps_multiple = 1;  // round the step count up to a multiple (snapshots)
  int power_iters = 48;    // spectral-radius estimation for the step size
  int forced_steps = 0;    // > 0: use exactly this step count (exact inverses)
};
double stable_dt(const CoefficientField& c, const FdtdOptions& opts);

struct FdtdRun {
  StateVector y;
  double dt = 0.0;
  int steps = 0;
  double energy0 = 0.0;
  double energy_drift = 0.0;  // max |E - E0| / E0 over steps
};
// t may be negative: the stepper is time-reversible, and a backward run with
// the same forced step count inverts the forward run to roundoff
FdtdRun evolve_fdtd(const CoefficientField& c, const StateVector& y0, double t,
                    const FdtdOptions& opts = {});
// swap -> evolve -> swap; exact transpose of evolve_fdtd at matching options
FdtdRun adjoint_evolve_fdtd(const CoefficientField& c, const StateVector& psi, double t,
                            const FdtdOptions& opts = {});
StateVector adjoint_evolve_var(const CoefficientField& c, const TestFunction& psi, double t,
                               const FdtdOptions& opts = {});

// step through [0, t]; cb(step, time, state) after every step (and at step 0)
FdtdRun fdtd_walk(const CoefficientField& c, const StateVector& y0, double t,
                  const FdtdOptions& opts,
                  const std::function<void(int, double, const StateVector&)>& cb);

struct DecayProfile {
  std::vector<double> times, norms;  // local energy seminorm inside radius R
  double radius = 0.0;
  double alpha_fit = 0.0;  // minus the fitted slope of log norm vs t
  double fit_r2 = 0.0;
  double fit_lo = 0.0, fit_hi = 0.0;
  double energy_drift = 0.0;
};
DecayProfile local_energy_decay(const CoefficientField& c, const StateVector& y0, double R,
                                const std::vector<double>& times, double fit_lo, double fit_hi,
                                const FdtdOptions& opts = {});

}  // namespace wavelab
