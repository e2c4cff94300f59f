#include <cmath>

#include "doctest.h"
#include "wavelab/media.hpp"
#include "wavelab/propagator.hpp"
#include "wavelab/util.hpp"

using namespace wavelab;

namespace {

std::vector<double> random_scalar(const GridSpec& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> u(g.node_count());
  for (auto& v : u) v = rng.normal();
  return u;
}

}  // namespace

TEST_CASE("identity medium has half hyperbolicity constant") {
  const GridSpec g = make_grid(3, 8, 8.0);
  const CoefficientField c = identity_medium(g);
  const HyperbolicityReport rep = check_hyperbolicity(c);
  CHECK(rep.alpha == doctest::Approx(0.5));
  CHECK(rep.min_eig == doctest::Approx(1.0));
  CHECK(rep.max_eig == doctest::Approx(1.0));
  CHECK(rep.max_potential == 0.0);
}

TEST_CASE("rendered radial media respect the analytic eigenvalue from the bump family") {
  const GridSpec g = make_grid(3, 24, 24.0);
  RadialMedium m;
  m.beta = 0.8;
  m.gamma = 0.2;
  m.width = 3.0;
  m.a0_amp = 0.5;
  m.a0_width = 2.0;
  const CoefficientField c = render_medium(g, m);
  CHECK(c.perturbation_radius == doctest::Approx(3.0));
  const HyperbolicityReport rep = check_hyperbolicity(c);
  // candidates at full bump height: 1, 1 + beta + 2 gamma, 1 + beta - gamma
  const double analytic_min = std::min({1.0, 1.0 + m.beta + 2.0 * m.gamma,
                                        1.0 + m.beta - m.gamma});
  const double analytic_max = std::max({1.0, 1.0 + m.beta + 2.0 * m.gamma,
                                        1.0 + m.beta - m.gamma});
  CHECK(rep.min_eig == doctest::Approx(analytic_min).epsilon(1e-9));
  CHECK(rep.max_eig == doctest::Approx(analytic_max).epsilon(1e-9));
  CHECK(rep.max_potential == doctest::Approx(0.5).epsilon(1e-9));

  // an indefinite bump must be rejected
  RadialMedium bad = m;
  bad.beta = -1.5;
  bad.gamma = 0.0;
  CHECK_THROWS(check_hyperbolicity(render_medium(g, bad)));
  // negative potential rejected too
  RadialMedium badpot = m;
  badpot.a0_amp = -0.1;
  CHECK_THROWS(check_hyperbolicity(render_medium(g, badpot)));
}

TEST_CASE("rendering refuses perturbations touching the box scale") {
  const GridSpec g = make_grid(3, 16, 16.0);
  RadialMedium m;
  m.beta = 0.5;
  m.width = 5.0;  // >= L/4
  CHECK_THROWS(render_medium(g, m));
}

TEST_CASE("identity-medium operator is the discrete laplacian, second order accurate") {
  const GridSpec g = make_grid(3, 32, 16.0);
  const CoefficientField c = identity_medium(g);
  const double kf = g.k_fundamental();
  const ScalarField f = make_field(g, [&](const double* x) {
    return std::sin(kf * x[0]) * std::cos(2.0 * kf * x[2]);
  });
  const std::vector<double> lap = apply_operator(c, f.a);
  const double k2 = kf * kf * 5.0;
  double dev = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    dev = std::max(dev, std::abs(lap[i] + k2 * f.a[i]));
    scale = std::max(scale, std::abs(k2 * f.a[i]));
  }
  // centered differences: relative error ~ (k h)^2 / 12 per axis
  CHECK(dev / scale < 0.05);
}

TEST_CASE("discrete operator is symmetric and dissipative") {
  const GridSpec g = make_grid(3, 10, 10.0);
  RadialMedium m;
  m.beta = 0.6;
  m.gamma = 0.25;
  m.width = 2.0;
  m.a0_amp = 0.3;
  m.a0_width = 2.0;
  const CoefficientField c = render_medium(g, m);
  const auto u = random_scalar(g, 1);
  const auto v = random_scalar(g, 2);
  const auto au = apply_operator(c, u);
  const auto av = apply_operator(c, v);
  double uav = 0.0, vau = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    uav += u[i] * av[i];
    vau += v[i] * au[i];
  }
  CHECK(uav == doctest::Approx(vau).epsilon(1e-11));
  CHECK(operator_quadratic(c, u) >= 0.0);
  // quadratic form consistency: <u, -Au> h^n
  double direct = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) direct -= u[i] * au[i];
  direct *= g.cell_volume();
  CHECK(operator_quadratic(c, u) == doctest::Approx(direct).epsilon(1e-11));
}

TEST_CASE("verlet stepper is exactly time reversible") {
  const GridSpec g = make_grid(3, 12, 12.0);
  RadialMedium m;
  m.beta = 0.4;
  m.width = 2.0;
  const CoefficientField c = render_medium(g, m);
  Rng rng(3);
  StateVector y = make_state(g);
  for (auto& v : y.u.a) v = rng.normal();
  for (auto& v : y.v.a) v = rng.normal();
  FdtdOptions opts;
  opts.forced_steps = 32;
  const FdtdRun fwd = evolve_fdtd(c, y, 3.0, opts);
  const FdtdRun back = evolve_fdtd(c, fwd.y, -3.0, opts);
  double dev = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    dev = std::max({dev, std::abs(back.y.u.a[i] - y.u.a[i]),
                    std::abs(back.y.v.a[i] - y.v.a[i])});
    scale = std::max({scale, std::abs(y.u.a[i]), std::abs(y.v.a[i])});
  }
  CHECK(dev <= 1e-10 * scale);
}

TEST_CASE("verlet step satisfies the swap-transpose identity") {
  // <S y, p> == <y, swap S swap p> exactly (roundoff): the discrete adjoint
  // dynamics is the component swap conjugation of the forward dynamics.
  const GridSpec g = make_grid(3, 10, 10.0);
  RadialMedium m;
  m.beta = 0.7;
  m.gamma = 0.15;
  m.width = 2.0;
  m.a0_amp = 0.2;
  m.a0_width = 1.5;
  const CoefficientField c = render_medium(g, m);
  FdtdOptions opts;
  opts.forced_steps = 17;
  const double t = 2.3;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    Rng rng(40 + trial);
    StateVector y = make_state(g), p = make_state(g);
    for (auto& v : y.u.a) v = rng.normal();
    for (auto& v : y.v.a) v = rng.normal();
    for (auto& v : p.u.a) v = rng.normal();
    for (auto& v : p.v.a) v = rng.normal();
    const double lhs = inner_product(evolve_fdtd(c, y, t, opts).y, p);
    const double rhs = inner_product(y, adjoint_evolve_fdtd(c, p, t, opts).y);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("free-medium stepper matches the spectral propagator at second order") {
  RadialMedium none;  // all amplitudes zero: identity coefficients
  const double t = 2.0;
  double err_coarse = 0.0, err_fine = 0.0;
  for (int npts : {24, 48}) {
    const GridSpec g = make_grid(3, npts, 16.0);
    const CoefficientField c = identity_medium(g);
    const double kf = g.k_fundamental();
    StateVector y = make_state(g);
    y.u = make_field(g, [&](const double* x) {
      return std::sin(kf * x[0]) * std::sin(kf * x[1]);
    });
    y.v = make_field(g, [&](const double* x) { return std::cos(kf * x[2]); });
    FdtdOptions opts;
    opts.cfl = 0.2;
    // fix the step count across resolutions so only the space error varies;
    // at 512 steps the time error is ~1e-7, far below the space error
    opts.forced_steps = 512;
    const FdtdRun run = evolve_fdtd(c, y, t, opts);
    const StateVector ref = evolve(y, t);
    double dev = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      dev = std::max(dev, std::abs(run.y.u.a[i] - ref.u.a[i]));
      scale = std::max(scale, std::abs(ref.u.a[i]));
    }
    (npts == 24 ? err_coarse : err_fine) = dev / scale;
  }
  // halving h divides the error by about four
  CHECK(err_fine < err_coarse / 3.0);
  CHECK(err_coarse < 0.05);
}

TEST_CASE("discrete energy is conserved along the walk") {
  const GridSpec g = make_grid(3, 16, 16.0);
  RadialMedium m;
  m.beta = 0.5;
  m.gamma = 0.1;
  m.width = 3.0;
  m.a0_amp = 0.2;
  m.a0_width = 2.0;
  const CoefficientField c = render_medium(g, m);
  const double c0[3] = {0.0, 0.0, 0.0};
  const TestFunction psi = make_bump(g, c0, 2.5, 1.0, 0.5);
  const StateVector y0{psi.psi0, psi.psi1};
  const FdtdRun run = evolve_fdtd(c, y0, 6.0);
  CHECK(run.energy0 > 0.0);
  CHECK(run.energy_drift < 1e-3);
}

TEST_CASE("t = 0 evolution is the identity and adjoint swaps components") {
  const GridSpec g = make_grid(3, 8, 8.0);
  const CoefficientField c = identity_medium(g);
  const double c0[3] = {0.0, 0.0, 0.0};
  const TestFunction psi = make_bump(g, c0, 2.0, 0.7, -0.3);
  const StateVector got = adjoint_evolve_var(c, psi, 0.0);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    CHECK(got.u.a[i] == doctest::Approx(psi.psi0.a[i]));
    CHECK(got.v.a[i] == doctest::Approx(psi.psi1.a[i]));
  }
}

TEST_CASE("adjoint duality between the variable solver routes") {
  const GridSpec g = make_grid(3, 24, 12.0);
  RadialMedium m;
  m.beta = 0.5;
  m.width = 2.0;
  const CoefficientField c = render_medium(g, m);
  Rng rng(9);
  StateVector y = make_state(g);
  for (auto& v : y.u.a) v = rng.normal();
  for (auto& v : y.v.a) v = rng.normal();
  const double c0[3] = {1.0, 0.0, -1.0};
  const TestFunction psi = make_bump(g, c0, 2.0, 1.0, 1.0);
  const double t = 2.5;
  FdtdOptions opts;
  opts.forced_steps = 64;
  const double lhs = inner_product(evolve_fdtd(c, y, t, opts).y, StateVector{psi.psi0, psi.psi1});
  const double rhs = inner_product(y, adjoint_evolve_var(c, psi, t, opts));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("free-medium local energy drains by the sharp propagation cone") {
  // in continuum the ball empties exactly once t > R + support radius; on the
  // lattice a dispersive wake of the second-order stencil remains, so the
  // contract is: monotone drain to a small floor that shrinks under mesh
  // refinement. Position-only data keeps the conserved field mean (a torus
  // artifact that never drains) negligible.
  const double c0[3] = {0.0, 0.0, 0.0};
  std::vector<double> times{0.0, 2.0, 4.0, 6.0, 8.0};
  double ratio_coarse = 0.0, ratio_fine = 0.0;
  for (int npts : {48, 64}) {
    const GridSpec g = make_grid(3, npts, 24.0);
    const CoefficientField c = identity_medium(g);
    const TestFunction psi = make_bump(g, c0, 2.5, 1.0, 0.0);
    const StateVector y0{psi.psi0, psi.psi1};
    const DecayProfile prof = local_energy_decay(c, y0, 3.0, times, 5.0, 8.0);
    REQUIRE(prof.norms.size() == times.size());
    for (std::size_t i = 1; i < prof.norms.size(); ++i)
      CHECK(prof.norms[i] < prof.norms[i - 1]);
    CHECK(prof.energy_drift < 1e-12);
    (npts == 48 ? ratio_coarse : ratio_fine) = prof.norms.back() / prof.norms.front();
  }
  CHECK(ratio_coarse < 0.15);
  CHECK(ratio_fine < ratio_coarse);
}

TEST_CASE("stable step scales like the mesh") {
  const GridSpec g1 = make_grid(3, 16, 16.0);
  const GridSpec g2 = make_grid(3, 32, 16.0);
  const double dt1 = stable_dt(identity_medium(g1), {});
  const double dt2 = stable_dt(identity_medium(g2), {});
  CHECK(dt1 > 0.0);
  CHECK(dt2 > 0.0);
  CHECK(dt1 / dt2 == doctest::Approx(2.0).epsilon(0.05));
  // the identity-medium spectral radius is 12/h^2 at worst: dt bound known
  const double h = g1.spacing();
  const double lam = 12.0 / (h * h);
  const double bound = 0.4 * 2.0 / std::sqrt(1.05 * lam);
  CHECK(dt1 == doctest::Approx(bound).epsilon(0.1));
}
