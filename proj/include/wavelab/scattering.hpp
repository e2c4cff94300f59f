#pragma once

// Wave-operator approximation for the adjoint dynamics: W psi is the free
// Cauchy data with U0'(t) W psi ~ U'(t) psi for large t, built as
// U0'(-T) U'(T) psi at a finite horizon with a Cauchy-increment certificate
// in an exponentially weighted energy norm. Residuals of the scattering
// identity are evaluated in mean square over the initial measure, i.e. as
// exact spectral quadratic forms, so they carry no Monte Carlo noise.

#include <vector>

#include "wavelab/covariance.hpp"
#include "wavelab/media.hpp"

namespace wavelab {

struct WaveOperatorResult {
  StateVector w;                        // free Cauchy data approximating W psi
  std::vector<double> stage_times;      // T/8, T/4, T/2, T
  std::vector<double> cook_increments;  // weighted-norm gaps between stages
  double delta = 0.0;                   // weight rate used for the increments
};
// delta <= 0 selects the default 0.1 * (2 pi / L)
WaveOperatorResult wave_operator_approx(const CoefficientField& c, const TestFunction& psi,
                                        double T, double delta = 0.0,
                                        const FdtdOptions& opts = {});

struct ScatteringRow {
  double t = 0.0;
  double residual = 0.0;  // sqrt Q0(D, D), D = U'(t) psi - U0'(t) w
  double scale = 0.0;     // sqrt Q0(P, P), P = U'(t) psi
};
std::vector<ScatteringRow> scattering_residual(const CoefficientField& c,
                                               const SpectralCovariance& q0,
                                               const TestFunction& psi, const StateVector& w,
                                               const std::vector<double>& times,
                                               const FdtdOptions& opts = {});

}  // namespace wavelab
