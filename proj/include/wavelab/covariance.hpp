#pragma once

// Exact spectral dynamics of translation-invariant covariances. Per mode the
// 2x2 matrix evolves by congruence with the propagator symbol,
//   qhat_t(k) = G_t(k) qhat_0(k) G_t(k)^T,
// which preserves positive semidefiniteness, the antisymmetric part, and the
// per-mode invariant qhat^11 + |k|^2 qhat^00. Time averages converge to the
// limit matrix
//   qhat_inf^00 = (qhat^00 + qhat^11/|k|^2)/2,   qhat_inf^01 = (qhat^01 - qhat^10)/2,
//   qhat_inf^10 = -qhat_inf^01,                  qhat_inf^11 = (qhat^11 + |k|^2 qhat^00)/2,
// where the |k|^-2 factor is the Fourier multiplier of the Laplacian's
// fundamental solution; its zero mode is set to zero and flagged.

#include <functional>
#include <string>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

// real 2x2 per wavevector; realizable real-field specs have q01 == q10
struct SpectralCovariance {
  GridSpec grid;
  std::vector<double> q00, q01, q10, q11;
};
SpectralCovariance make_covariance(const GridSpec& g);

// diagonal entries >= 0 and 2x2 determinant >= -tol at every mode
bool is_positive_semidefinite(const SpectralCovariance& q, double tol, std::size_t* bad_mode = nullptr);
// max |q^ij(-k) - q^ji(k)|
double cross_symmetry_defect(const SpectralCovariance& q);

SpectralCovariance evolve_covariance(const SpectralCovariance& q0, double t);

struct LimitCovariance {
  SpectralCovariance q;
  bool zero_mode_warning = false;  // qhat0^11(0) != 0 was dropped
};
LimitCovariance limit_covariance(const SpectralCovariance& q0);

// numerical time average of evolve_covariance over [t0, t1] (trapezoid,
// nsamples+1 points); oracle for the limit matrix
SpectralCovariance time_average_covariance(const SpectralCovariance& q0, double t0, double t1,
                                           int nsamples);

// mean energy density e = L^-n sum_k [ qhat^11 + (|k|^2 + 1) qhat^00 ]
// (velocity + gradient + mass); the mass term oscillates under the flow, so
// e_t is only bounded, not constant — see conserved_energy for the invariant
double energy_density(const SpectralCovariance& q);
double energy_density_t(const SpectralCovariance& q0, double t);

// zero-mass part L^-n sum_k [ qhat^11 + |k|^2 qhat^00 ]; every summand is a
// per-mode invariant of the congruence flow, so the sum is conserved exactly
double conserved_energy(const SpectralCovariance& q);

// position covariance q^ij(z) at a node offset, via inverse transform
enum class Entry { e00 = 0, e01 = 1, e10 = 2, e11 = 3 };
ScalarField position_covariance(const SpectralCovariance& q, Entry e,
                                double* out_imag_residue = nullptr);

// independent radial path for isotropic densities in n = 3:
//   q(|z|) = (1/(2 pi^2 |z|)) \int_0^kmax r sin(r |z|) f(r) dr
// (Gauss-Legendre panels); at z = 0 the integrand limit r^2 f(r) is used.
double radial_position_covariance(const std::function<double(double)>& f, double zabs,
                                  double kmax, int panels = 64, int order = 16);

// Q(psi, psi) = L^-n sum_k sum_ij qhat^ij(k) conj(psihat^i) psihat^j (real part)
double quadratic_form(const SpectralCovariance& q, const StateVector& psi);
double quadratic_form(const SpectralCovariance& q, const TestFunction& psi);
double quadratic_form(const SpectralCovariance& q, const SpectralField& ph0,
                      const SpectralField& ph1);

// lattice sums L^-n sum_{k != 0} (|k|^{2-i-j} + |k|^{-2}) |qhat^ij(k)| feeding
// the finiteness condition on the limit measure; recompute on refined grids
// to see whether the values stabilize
struct IntegrabilityReport {
  double s00, s01, s10, s11;
  double total() const { return s00 + s01 + s10 + s11; }
};
IntegrabilityReport ft_integrability_report(const SpectralCovariance& q);

struct ConvergenceRow {
  double t;
  double max_dev;    // max over probed offsets of |q_t - q_inf|, entry 00
  double scale;      // max |q_inf| over probed offsets
};
std::vector<ConvergenceRow> convergence_profile(const SpectralCovariance& q0,
                                                const std::vector<double>& times,
                                                const std::vector<std::size_t>& offsets);

}  // namespace wavelab
