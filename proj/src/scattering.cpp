#include "wavelab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace wavelab {

namespace {

// walk the adjoint variable dynamics once, handing out U'(t) psi (plus the
// step index, for exactly invertible backward legs) at the requested times
void adjoint_walk_snapshots(const CoefficientField& c, const TestFunction& psi, double tmax,
                            const std::vector<double>& targets, const FdtdOptions& opts,
                            const std::function<void(int, double, const StateVector&)>& sink) {
  StateVector swapped{psi.psi1, psi.psi0};
  std::size_t next = 0;
  fdtd_walk(c, swapped, tmax, opts, [&](int step, double time, const StateVector& y) {
    bool hit = false;
    while (next < targets.size() && time >= targets[next] - 1e-12) {
      ++next;
      hit = true;
    }
    if (hit) sink(step, time, StateVector{y.v, y.u});  // unswap
  });
}

StateVector subtract(const StateVector& a, const StateVector& b) {
  StateVector d = a;
  for (std::size_t i = 0; i < d.u.a.size(); ++i) {
    d.u.a[i] -= b.u.a[i];
    d.v.a[i] -= b.v.a[i];
  }
  return d;
}

}  // namespace

WaveOperatorResult wave_operator_approx(const CoefficientField& c, const TestFunction& psi,
                                        double T, double delta, const FdtdOptions& opts) {
  if (!(T > 0.0)) throw std::invalid_argument("wave_operator_approx: T must be positive");
  const GridSpec& g = c.grid;
  WaveOperatorResult res;
  res.delta = delta > 0.0 ? delta : 0.1 * g.k_fundamental();

  // the comparison free group runs on the same stepper with identity
  // coefficients, so for an identity medium the Cook stages collapse to psi
  // itself and the increments sit at roundoff
  const CoefficientField free_medium = identity_medium(g);

  FdtdOptions stage_opts = opts;
  stage_opts.steps_multiple = std::max(8, opts.steps_multiple);
  stage_opts.forced_steps = 0;
  const std::vector<double> targets{T / 8.0, T / 4.0, T / 2.0, T};

  std::vector<StateVector> stages;
  adjoint_walk_snapshots(c, psi, T, targets, stage_opts,
                         [&](int step, double time, const StateVector& phi) {
                           res.stage_times.push_back(time);
                           FdtdOptions back = opts;
                           back.forced_steps = step;  // exact lattice inverse pacing
                           stages.push_back(
                               adjoint_evolve_fdtd(free_medium, phi, -time, back).y);
                         });
  if (stages.size() != targets.size())
    throw std::runtime_error("wave_operator_approx: missed a stage snapshot");
  for (std::size_t k = 1; k < stages.size(); ++k)
    res.cook_increments.push_back(weighted_norm(subtract(stages[k], stages[k - 1]), res.delta));
  res.w = std::move(stages.back());
  return res;
}

std::vector<ScatteringRow> scattering_residual(const CoefficientField& c,
                                               const SpectralCovariance& q0,
                                               const TestFunction& psi, const StateVector& w,
                                               const std::vector<double>& times,
                                               const FdtdOptions& opts) {
  if (times.empty()) return {};
  const CoefficientField free_medium = identity_medium(c.grid);
  std::vector<double> targets = times;
  std::sort(targets.begin(), targets.end());
  std::vector<ScatteringRow> rows;
  adjoint_walk_snapshots(
      c, psi, targets.back(), targets, opts,
      [&](int, double time, const StateVector& phi) {
        const StateVector free = adjoint_evolve_fdtd(free_medium, w, time, opts).y;
        const StateVector diff = subtract(phi, free);
        ScatteringRow row;
        row.t = time;
        row.residual = std::sqrt(std::max(0.0, quadratic_form(q0, diff)));
        row.scale = std::sqrt(std::max(0.0, quadratic_form(q0, phi)));
        rows.push_back(row);
      });
  return rows;
}

}  // namespace wavelab
