// Acceptance harness: twelve numbered criteria, one [PASS]/[FAIL] line each,
// every tolerance pinned in this file. Exit code = number of failures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wavelab/clt.hpp"
#include "wavelab/covariance.hpp"
#include "wavelab/media.hpp"
#include "wavelab/propagator.hpp"
#include "wavelab/random_fields.hpp"
#include "wavelab/rays.hpp"
#include "wavelab/rooms.hpp"
#include "wavelab/scattering.hpp"
#include "wavelab/stats.hpp"
#include "wavelab/util.hpp"

using namespace wavelab;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " ("
            << detail << ")" << std::endl;
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(4) << v;
  return out.str();
}

StateVector random_state(const GridSpec& g, std::uint64_t seed) {
  Rng rng(seed);
  StateVector y = make_state(g);
  for (auto& v : y.u.a) v = rng.normal();
  for (auto& v : y.v.a) v = rng.normal();
  return y;
}

InitialMeasureSpec white_rademacher(const GridSpec& g) {
  MovingAverageModel m;
  const double amp = std::pow(g.spacing(), -0.5 * g.dim);
  m.kernel_u = Kernel{KernelShape::delta, 0.0, amp};
  m.kernel_v = Kernel{KernelShape::delta, 0.0, amp};
  m.noise_u = m.noise_v = NoiseLaw::rademacher;
  return make_ma_spec(m);
}

std::vector<double> member_functionals(const MovingAverageModel& m, const GridSpec& g,
                                       const StateVector& phi, std::size_t members,
                                       std::uint64_t master) {
  RoomCorridorPartition whole;
  whole.axis = 2;
  whole.room = g.length;
  whole.corridor = 0.0;
  const SlabSamples s =
      run_slab_ensemble_ma(m, phi, label_slabs(g, whole), members, master, 1);
  std::vector<double> out(members);
  for (std::size_t i = 0; i < members; ++i) out[i] = s.member_total(i);
  return out;
}

// --------------------------------------------------------------------------

void criterion_1_duality() {
  // |<U0(t) Y, Psi> - <Y, U0'(t) Psi>| <= 1e-10 * scale over 100 random draws
  const double tol = 1e-10;
  const GridSpec g = make_grid(3, 64, 32.0);
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const StateVector y = random_state(g, 1000 + trial);
    const StateVector p = random_state(g, 2000 + trial);
    Rng rt(3000 + trial);
    const double t = 0.2 + 12.0 * rt.uniform01();
    const double lhs = inner_product(evolve(y, t), p);
    const double rhs = inner_product(y, adjoint_evolve(p, t));
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  report(1, "free-group duality over 100 random states",
         worst <= tol, "max_rel=" + fmt(worst) + " tol=" + fmt(tol));
}

void criterion_2_covariance_engine() {
  // congruence == closed-form entries to 1e-12 per mode; per-mode invariant
  // conserved to 1e-12; one-sided derivative at t = 0 matches the generator
  // and rejects the flipped cross-term sign (the derived form is the one
  // implemented; the misprinted variant fails this check)
  const double tol = 1e-12;
  const GridSpec g = make_grid(3, 16, 16.0);
  SpectralCovariance q0 = make_covariance(g);
  Rng rng(42);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double a = 0.3 + rng.uniform01(), d = 0.3 + rng.uniform01();
    const double c = (2.0 * rng.uniform01() - 1.0) * 0.8 * std::sqrt(a * d);
    q0.q00[i] = a;
    q0.q11[i] = d;
    q0.q01[i] = q0.q10[i] = c;
  }
  double dev_formula = 0.0, dev_invariant = 0.0;
  for (double t : {0.0, 0.61, 3.7, 12.9}) {
    const SpectralCovariance qt = evolve_covariance(q0, t);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const double kabs = wavevector(g, i);
      const oracles::Mode2x2 ref = oracles::explicit_mode_evolution(
          kabs <= propagator_zero_threshold(g) ? 0.0 : kabs, t,
          {q0.q00[i], q0.q01[i], q0.q10[i], q0.q11[i]});
      dev_formula = std::max(
          {dev_formula, std::abs(qt.q00[i] - ref.q00), std::abs(qt.q01[i] - ref.q01),
           std::abs(qt.q10[i] - ref.q10), std::abs(qt.q11[i] - ref.q11)});
      const double k2 = kabs * kabs;
      dev_invariant = std::max(dev_invariant, std::abs((qt.q11[i] + k2 * qt.q00[i]) -
                                                       (q0.q11[i] + k2 * q0.q00[i])));
    }
  }
  // generator check at t = 0 on one representative mode
  const double kabs = 1.3, dt = 1e-7;
  const oracles::Mode2x2 q{0.8, 0.25, 0.25, 1.7};
  const oracles::Mode2x2 good = oracles::explicit_mode_evolution(kabs, dt, q);
  const oracles::Mode2x2 bad = oracles::flipped_sign_mode_evolution(kabs, dt, q);
  const double d00 = (good.q00 - q.q00) / dt, d00_ref = q.q01 + q.q10;
  const bool generator_ok = std::abs(d00 - d00_ref) <= 1e-5 * std::abs(d00_ref);
  const bool flipped_rejected =
      std::abs((bad.q00 - q.q00) / dt - d00_ref) > std::abs(d00_ref);
  const bool pass =
      dev_formula <= tol && dev_invariant <= tol * 60.0 && generator_ok && flipped_rejected;
  report(2, "covariance engine: closed-form entries, invariant, t=0 generator sign", pass,
         "formula_dev=" + fmt(dev_formula) + " invariant_dev=" + fmt(dev_invariant) +
             " flipped_rejected=" + (flipped_rejected ? std::string("yes") : "no") +
             " tol=" + fmt(tol));
}

void criterion_3_limit_covariance() {
  // time average over [T, 2T], T = 40 periods of the slowest mode, within 2%
  // entrywise (per channel, zero mode excluded) for two distinct specs
  const double tol = 0.02;
  const GridSpec g = make_grid(3, 16, 16.0);
  const double T = 40.0 * g.length;
  const int nsamples = 9000;

  auto check_spec = [&](const InitialMeasureSpec& spec) {
    const SpectralCovariance q0 = exact_covariance(spec, g);
    const SpectralCovariance avg = time_average_covariance(q0, T, 2.0 * T, nsamples);
    const LimitCovariance lim = limit_covariance(q0);
    const std::vector<double>* av[4] = {&avg.q00, &avg.q01, &avg.q10, &avg.q11};
    const std::vector<double>* lm[4] = {&lim.q.q00, &lim.q.q01, &lim.q.q10, &lim.q.q11};
    double s00 = 0.0, s11 = 0.0;
    for (std::size_t i = 1; i < g.node_count(); ++i) {
      s00 = std::max(s00, std::abs(lim.q.q00[i]));
      s11 = std::max(s11, std::abs(lim.q.q11[i]));
    }
    double rel = 0.0;
    for (int c = 0; c < 4; ++c) {
      double dev = 0.0, scale = 0.0;
      for (std::size_t i = 1; i < g.node_count(); ++i) {
        dev = std::max(dev, std::abs((*av[c])[i] - (*lm[c])[i]));
        scale = std::max(scale, std::abs((*lm[c])[i]));
      }
      if (scale <= 0.0) scale = std::sqrt(s00 * s11);
      rel = std::max(rel, dev / scale);
    }
    return rel;
  };

  IsotropicDensity d;
  d.f00 = [](double k) { return std::exp(-0.4 * k * k); };
  d.f01 = [](double k) { return 0.3 * std::exp(-0.5 * k * k); };
  d.f11 = [](double k) { return (1.0 + k * k) * std::exp(-0.4 * k * k); };
  const double rel_gauss = check_spec(make_isotropic_spec(d, power_mixing(1.0, 8.0)));

  MovingAverageModel m;
  m.kernel_u = Kernel{KernelShape::ball, 1.5, 1.0};
  m.kernel_v = Kernel{KernelShape::bump, 2.0, 1.0};
  const double rel_ma = check_spec(make_ma_spec(m));

  const bool pass = rel_gauss <= tol && rel_ma <= tol;
  report(3, "time-averaged covariance matches the limit matrix for two specs", pass,
         "rel_gauss=" + fmt(rel_gauss) + " rel_ma=" + fmt(rel_ma) + " tol=" + fmt(tol) +
             " T=" + fmt(T));
}

void criterion_4_kirchhoff() {
  // spherical-mean point solution vs spectral evolution, band-limited data,
  // 20 random probes, quadrature order 24: relative error < 1e-3
  const double tol = 1e-3;
  const GridSpec g = make_grid(3, 64, 32.0);
  const double kf = g.k_fundamental();
  const int mmax = 2;
  struct Wave {
    double k[3], a, b;
  };
  auto build = [&](std::uint64_t seed) {
    std::vector<Wave> waves;
    Rng rng(seed);
    for (int m0 = -mmax; m0 <= mmax; ++m0)
      for (int m1 = -mmax; m1 <= mmax; ++m1)
        for (int m2 = -mmax; m2 <= mmax; ++m2) {
          if (m0 == 0 && m1 == 0 && m2 == 0) continue;
          const double mm = m0 * m0 + m1 * m1 + m2 * m2;
          const double amp = 1.0 / ((1.0 + mm) * (1.0 + mm));
          waves.push_back(Wave{{kf * m0, kf * m1, kf * m2}, amp * rng.normal(),
                               amp * rng.normal()});
        }
    return waves;
  };
  const std::vector<Wave> wu = build(11), wv = build(12);
  auto value = [](const std::vector<Wave>& w, const std::array<double, 3>& x) {
    double s = 0.0;
    for (const Wave& q : w) {
      const double ph = q.k[0] * x[0] + q.k[1] * x[1] + q.k[2] * x[2];
      s += q.a * std::cos(ph) + q.b * std::sin(ph);
    }
    return s;
  };
  SmoothFn3 u0, v0;
  u0.value = [&](const std::array<double, 3>& x) { return value(wu, x); };
  u0.gradient = [&](const std::array<double, 3>& x) {
    std::array<double, 3> gr{0, 0, 0};
    for (const Wave& q : wu) {
      const double ph = q.k[0] * x[0] + q.k[1] * x[1] + q.k[2] * x[2];
      const double d = -q.a * std::sin(ph) + q.b * std::cos(ph);
      for (int i = 0; i < 3; ++i) gr[i] += d * q.k[i];
    }
    return gr;
  };
  v0.value = [&](const std::array<double, 3>& x) { return value(wv, x); };

  StateVector y0 = make_state(g);
  y0.u = make_field(g, [&](const double* x) { return u0.value({x[0], x[1], x[2]}); });
  y0.v = make_field(g, [&](const double* x) { return v0.value({x[0], x[1], x[2]}); });

  Rng pick(13);
  double max_err = 0.0, scale = 0.0;
  for (int p = 0; p < 20; ++p) {
    int ix[3];
    for (int a = 0; a < 3; ++a)
      ix[a] = static_cast<int>(pick.uniform01() * g.npts) % g.npts;
    const double t = 1.0 + 5.0 * pick.uniform01();
    const std::array<double, 3> x{coord(g, ix[0]), coord(g, ix[1]), coord(g, ix[2])};
    const double ref = evolve(y0, t).u.a[flatten(g, ix)];
    const double got = kirchhoff_3d(v0, &u0, x, t, 24);
    max_err = std::max(max_err, std::abs(got - ref));
    scale = std::max(scale, std::abs(ref));
  }
  const double rel = max_err / scale;
  report(4, "spherical-mean point solution matches the spectral group", rel < tol,
         "max_rel=" + fmt(rel) + " tol=" + fmt(tol));
}

void criterion_5_huygens() {
  // cone leakage < 1e-3 for a mollified pair with 4-cell padding at t_max/2
  const double tol = 1e-3;
  const GridSpec g = make_grid(3, 64, 32.0);
  const double c0[3] = {0.0, 0.0, 0.0};
  const TestFunction psi = make_bump(g, c0, 3.0, 1.0, 1.0);
  const double r_bar = psi.support_radius + 4.0 * g.spacing();
  const double t = 0.5 * g.horizon(r_bar, 0.0);
  const ConeReport rep = huygens_check(psi, t, r_bar);
  report(5, "strong Huygens cone leakage at half horizon", rep.leakage < tol,
         "leakage=" + fmt(rep.leakage) + " tol=" + fmt(tol) + " t=" + fmt(t));
}

void criterion_6_dispersion() {
  // sup-norm decay exponent -1.0 +- 0.15 over one decade of t, fitted past
  // the O(r/t) near-field transient of the position component
  const double tol = 0.15;
  const GridSpec g = make_grid(3, 176, 88.0);
  const double c0[3] = {0.0, 0.0, 0.0};
  const TestFunction psi = make_bump(g, c0, 2.0, 1.0, 0.0);
  std::vector<double> times;
  for (int i = 0; i < 8; ++i) times.push_back(4.0 * std::pow(10.0, i / 7.0));
  const DecayTable table = sup_decay_profile(psi, times);
  const bool pass = std::abs(table.slope0 + 1.0) <= tol && std::abs(table.slope1 + 1.0) <= tol;
  report(6, "dispersive sup-norm decay exponent is -1", pass,
         "slope_u=" + fmt(table.slope0) + " slope_v=" + fmt(table.slope1) + " tol=+-" +
             fmt(tol));
}

void criterion_7_reconstruction() {
  // exact room/corridor reconstruction per member (1e-10 relative) and
  // out-of-cone slabs at the leakage floor (1e-9 relative)
  const double tol_recon = 1e-10, tol_leak = 1e-9;
  const GridSpec g = make_grid(3, 32, 32.0);
  MovingAverageModel m;
  m.kernel_u = Kernel{KernelShape::ball, 1.5, 1.0};
  m.kernel_v = Kernel{KernelShape::delta, 0.0, std::pow(g.spacing(), -1.5)};
  const auto spec = make_ma_spec(m);
  const auto sampler = make_sampler(spec, g);
  const double c0[3] = {0.0, 0.0, 0.0};
  const TestFunction psi = make_bump(g, c0, 3.0, 1.0, 1.0);
  const double t = 8.0;
  const StateVector phi = adjoint_evolve(psi, t);
  RoomCorridorPartition part;
  part.axis = 2;
  part.room = 2.0;
  part.corridor = 1.0;
  const SlabLabels labels = label_slabs(g, part);

  double worst_recon = 0.0, worst_leak = 0.0;
  for (std::uint64_t mm = 0; mm < 20; ++mm) {
    const StateVector y = sampler->sample(derive_stream(777, mm));
    const RoomSums sums = decompose(y, phi, labels);
    const double direct = inner_product(y, phi);
    const double scale = std::max(1.0, std::abs(direct));
    worst_recon = std::max(worst_recon, std::abs(sums.total() - direct) / scale);
    // slabs whose interval cannot meet the inflated cone carry no mass
    double leak = 0.0;
    for (int j = labels.jmin; j < labels.jmin + labels.nslabs; ++j) {
      if (slab_active(labels, j, t, psi.support_radius + 2.0 * g.spacing())) continue;
      leak += std::abs(sums.rooms[j - labels.jmin]) + std::abs(sums.corridors[j - labels.jmin]);
    }
    worst_leak = std::max(worst_leak, leak / scale);
  }
  const bool pass = worst_recon <= tol_recon && worst_leak <= tol_leak;
  report(7, "room/corridor reconstruction and out-of-cone leakage", pass,
         "recon=" + fmt(worst_recon) + " tol=" + fmt(tol_recon) + " leak=" + fmt(worst_leak) +
             " tol=" + fmt(tol_leak));
}

void criterion_8_moment_scalings() {
  // E|r|^2 ~ d_t/t with slope 1.0 +- 0.2 and E|r|^4 ~ (d_t/t)^2 with slope
  // 1.0 +- 0.3, white Rademacher data, M = 4096, three grids at fixed h
  const double tol_r2 = 0.2, tol_r4 = 0.3;
  const std::size_t members = 4096;
  const double h = 0.5, r_psi = 1.25;
  Schedule sched;
  sched.delta = 0.5;
  std::vector<MomentScalingRow> rows;
  int min_rooms = 1 << 30;
  for (int npts : {32, 48, 64}) {
    const GridSpec g = make_grid(3, npts, h * npts);
    const auto spec = white_rademacher(g);
    const double t = 0.35 * g.length;
    const double c0[3] = {0.0, 0.0, 0.0};
    // velocity-only probe: a position component with nonzero mean couples to
    // the zero mode, whose variance grows like t^2/L^3 on the torus and would
    // contaminate the room moments
    const TestFunction psi = make_bump(g, c0, r_psi, 0.0, 1.0);
    const StateVector phi = adjoint_evolve(psi, t);
    RoomCorridorPartition part;
    part.axis = 2;
    part.room = sched.room_width(t);
    part.corridor = sched.corridor_width(t);
    const SlabLabels labels = label_slabs(g, part);
    const SlabSamples s =
        run_slab_ensemble_ma(std::get<MovingAverageModel>(spec.model), phi, labels, members,
                             derive_stream(88, npts), 1);
    const MomentScalingRow row = moment_row(s, t, r_psi, part.room, part.corridor);
    min_rooms = std::min(min_rooms, row.rooms_used);
    rows.push_back(row);
  }
  const MomentScalingStudy st = moment_scalings(rows);
  const bool pass = min_rooms >= 1 && std::abs(st.slope_r2 - 1.0) <= tol_r2 &&
                    std::abs(st.slope_r4 - 1.0) <= tol_r4;
  report(8, "room moment scalings across the grid family", pass,
         "slope_r2=" + fmt(st.slope_r2) + " tol=+-" + fmt(tol_r2) +
             " slope_r4=" + fmt(st.slope_r4) + " tol=+-" + fmt(tol_r4) +
             " interior_rooms_min=" + std::to_string(min_rooms));
}

struct CltRun {
  std::vector<double> samples;
  double q_t = 0.0, q_inf = 0.0;
};

CltRun clt_run(const GridSpec& g, double weight, double t, std::size_t members,
               std::uint64_t master) {
  const auto spec = white_rademacher(g);
  const double c0[3] = {0.0, 0.0, 0.0};
  // velocity-only probe so the torus zero mode (variance ~ t^2/L^3) drops out
  const TestFunction psi = make_bump(g, c0, 3.0, 0.0, weight);
  const SpectralCovariance q0 = exact_covariance(spec, g);
  CltRun out;
  out.q_t = quadratic_form(evolve_covariance(q0, t), psi);
  out.q_inf = quadratic_form(limit_covariance(q0).q, psi);
  const StateVector phi = adjoint_evolve(psi, t);
  out.samples = member_functionals(std::get<MovingAverageModel>(spec.model), g, phi, members,
                                   master);
  return out;
}

void criterion_9_clt(const CltRun& run, const GridSpec& g, std::size_t members) {
  // late-time Gaussianity: |skew| < 0.1, |exkurt| < 0.2, KS p > 0.01 against
  // Normal(0, Q_t); variance within 10% of Q_inf; t = 0 narrow-probe
  // non-Gaussian baseline detected at 3 sigma
  const double tol_skew = 0.1, tol_kurt = 0.2, tol_ks = 0.01, tol_var = 0.10;
  const NormalityReport rep = normality_report(run.samples, run.q_t);
  const bool var_ok = std::abs(rep.m.var - run.q_inf) <= tol_var * run.q_inf;

  const auto spec = white_rademacher(g);
  const double c0[3] = {0.0, 0.0, 0.0};
  const TestFunction narrow = make_bump(g, c0, 2.0, 0.0, 1.0);
  const StateVector phi0{narrow.psi0, narrow.psi1};
  const std::vector<double> base = member_functionals(
      std::get<MovingAverageModel>(spec.model), g, phi0, members, 1717);
  const MomentSummary bm = moments(base);
  const double zscore = bm.excess_kurtosis / bm.se_kurtosis;

  const bool pass = std::abs(rep.m.skewness) < tol_skew &&
                    std::abs(rep.m.excess_kurtosis) < tol_kurt && rep.ks_p > tol_ks &&
                    var_ok && zscore <= -3.0;
  report(9, "scalar functional is Gaussian at late time, non-Gaussian at t=0", pass,
         "skew=" + fmt(rep.m.skewness) + " exkurt=" + fmt(rep.m.excess_kurtosis) +
             " ks_p=" + fmt(rep.ks_p) + " var/q_inf=" + fmt(rep.m.var / run.q_inf) +
             " baseline_z=" + fmt(zscore));
}

void criterion_10_characteristic(const CltRun& run) {
  // |mu_hat - exp(-Q_inf/2)| <= 3 SE + 0.05; Lindeberg statistic decreasing
  // along the growing-box schedule and < 0.05 at the last stage (eps = 0.2)
  const double tol_abs = 0.05, tol_lind = 0.05, eps = 0.2;
  const ComplexMean cm = circular_mean(run.samples);
  const double target = std::exp(-0.5 * run.q_inf);
  const double dev = std::hypot(cm.re - target, cm.im);
  const bool char_ok = dev <= 3.0 * cm.se + tol_abs;

  const int npts_list[3] = {96, 160, 240};
  const double times[3] = {36.0, 66.0, 108.0};
  double stats[3];
  for (int i = 0; i < 3; ++i) {
    const GridSpec g = make_grid(3, npts_list[i], static_cast<double>(npts_list[i]));
    const auto spec = white_rademacher(g);
    const double c0[3] = {0.0, 0.0, 0.0};
    const TestFunction psi = make_bump(g, c0, 3.0, 0.0, 1.0);
    const StateVector phi = adjoint_evolve(psi, times[i]);
    RoomCorridorPartition part;
    part.axis = 2;
    part.room = 1.0;
    part.corridor = 0.0;
    const SlabSamples s =
        run_slab_ensemble_ma(std::get<MovingAverageModel>(spec.model), phi,
                             label_slabs(g, part), 192, derive_stream(99, i), 1);
    stats[i] = lindeberg_statistic(s, eps);
  }
  const bool lind_ok = stats[1] < stats[0] && stats[2] < stats[1] && stats[2] < tol_lind;
  report(10, "characteristic functional limit and Lindeberg fractions",
         char_ok && lind_ok,
         "char_dev=" + fmt(dev) + " tol=" + fmt(3.0 * cm.se + tol_abs) + " lindeberg=" +
             fmt(stats[0]) + "/" + fmt(stats[1]) + "/" + fmt(stats[2]) + " final_tol=" +
             fmt(tol_lind));
}

void criterion_11_counterexample() {
  // unmixed signs: u == +-t exactly, two atoms, Gaussian rejected at 1e-6
  const GridSpec g = make_grid(3, 16, 16.0);
  const double c0[3] = {0.0, 0.0, 0.0};
  const TestFunction psi = make_bump(g, c0, 2.0, 0.5, 1.0);
  const double t = 2.0;
  const CounterexampleReport rep = no_mixing_counterexample(g, psi, t, 100, 2024);
  const bool pass = rep.u_deviation <= 1e-10 * t &&
                    rep.max_dev_from_atom <= 1e-12 * std::max(1.0, rep.atom) &&
                    rep.ks_p_vs_gaussian < 1e-6;
  report(11, "no-mixing counterexample stays a two-atom law", pass,
         "u_dev=" + fmt(rep.u_deviation) + " atom_dev=" + fmt(rep.max_dev_from_atom) +
             " ks_p=" + fmt(rep.ks_p_vs_gaussian));
}

void criterion_12_variable_media() {
  // free-medium FDTD vs spectral < 1% at N=128; energy drift < 0.1%;
  // local-energy decay fit alpha > 0 with R^2 > 0.9; Cook increments
  // monotone; scattering residual < 5% late; variable-coefficient
  // characteristic functional within 3 SE + 0.07
  std::ostringstream note;
  bool pass = true;

  {  // free-medium accuracy at N = 128
    const GridSpec g = make_grid(3, 128, 64.0);
    const CoefficientField c = identity_medium(g);
    const double kf = g.k_fundamental();
    StateVector y = make_state(g);
    y.u = make_field(g, [&](const double* x) {
      return std::sin(kf * x[0]) * std::cos(kf * x[1]);
    });
    y.v = make_field(g, [&](const double* x) { return std::cos(kf * x[2]); });
    const double t = 4.0;
    const FdtdRun run = evolve_fdtd(c, y, t);
    const StateVector ref = evolve(y, t);
    double dev = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      dev = std::max({dev, std::abs(run.y.u.a[i] - ref.u.a[i]),
                      std::abs(run.y.v.a[i] - ref.v.a[i])});
      scale = std::max({scale, std::abs(ref.u.a[i]), std::abs(ref.v.a[i])});
    }
    const double rel = dev / scale;
    pass = pass && rel < 0.01;
    note << "free_rel=" << fmt(rel);
  }

  const GridSpec g = make_grid(3, 96, 48.0);
  RadialMedium med;
  med.beta = 0.5;
  med.gamma = 0.1;
  med.width = 3.0;
  const CoefficientField c = render_medium(g, med);
  check_hyperbolicity(c);
  const double c0[3] = {0.0, 0.0, 0.0};

  {  // discrete energy audit and decay fit on a non-trapping bump;
    // position-only data: a velocity mean would feed the conserved torus
    // zero mode, which never decays and would flatten the fit tail
    const TestFunction data = make_bump(g, c0, 2.0, 1.0, 0.0);
    const StateVector y0{data.psi0, data.psi1};
    std::vector<double> times;
    for (double t = 0.0; t <= 20.0 + 1e-9; t += 1.0) times.push_back(t);
    const DecayProfile prof = local_energy_decay(c, y0, 5.0, times, 10.0, 20.0);
    pass = pass && prof.energy_drift < 1e-3 && prof.alpha_fit > 0.0 && prof.fit_r2 > 0.9;
    note << " drift=" << fmt(prof.energy_drift) << " alpha=" << fmt(prof.alpha_fit)
         << " r2=" << fmt(prof.fit_r2);
  }

  const auto spec = white_rademacher(g);
  const SpectralCovariance q0 = exact_covariance(spec, g);
  // velocity-only probe (no zero-mode coupling), scaled so the limit
  // quadratic form is O(1)
  double weight = 1.0;
  {
    const TestFunction unit = make_bump(g, c0, 2.0, 0.0, 1.0);
    const double q_unit = quadratic_form(limit_covariance(q0).q, unit);
    weight = 1.0 / std::sqrt(q_unit);
  }
  const TestFunction psi = make_bump(g, c0, 2.0, 0.0, weight);

  const double T = 16.0;
  const WaveOperatorResult wres = wave_operator_approx(c, psi, T);
  {
    const bool mono = wres.cook_increments[1] < wres.cook_increments[0] &&
                      wres.cook_increments[2] < wres.cook_increments[1];
    pass = pass && mono;
    note << " cook=" << fmt(wres.cook_increments[0]) << "/" << fmt(wres.cook_increments[1])
         << "/" << fmt(wres.cook_increments[2]);
  }

  {  // scattering identity residual in mean square
    const auto rows = scattering_residual(c, q0, psi, wres.w, {4.0, 8.0, 12.0, 16.0, 19.0});
    const double rel_first = rows.front().residual / rows.front().scale;
    const double rel_last = rows.back().residual / rows.back().scale;
    pass = pass && rel_last < rel_first && rel_last < 0.05;
    note << " resid=" << fmt(rel_first) << "->" << fmt(rel_last);
  }

  {  // variable-coefficient characteristic functional
    const std::size_t members = 2048;
    const double t = 18.0;
    const StateVector phi = adjoint_evolve_var(c, psi, t);
    const std::vector<double> samples = member_functionals(
        std::get<MovingAverageModel>(spec.model), g, phi, members, 5150);
    const double q_inf_w = quadratic_form(limit_covariance(q0).q, wres.w);
    const ComplexMean cm = circular_mean(samples);
    const double target = std::exp(-0.5 * q_inf_w);
    const double dev = std::hypot(cm.re - target, cm.im);
    const double tol = 3.0 * cm.se + 0.07;
    const MomentSummary ms = moments(samples);
    const bool var_ok = std::abs(ms.var - q_inf_w) <= 0.10 * q_inf_w;
    pass = pass && dev <= tol && var_ok;
    note << " char_dev=" << fmt(dev) << " tol=" << fmt(tol)
         << " var/q=" << fmt(ms.var / q_inf_w);
  }

  report(12, "variable media: solver accuracy, decay, wave operator, functional", pass,
         note.str());
}

}  // namespace

int main() {
  std::cout << "acceptance harness: 12 criteria" << std::endl;
  criterion_1_duality();
  criterion_2_covariance_engine();
  criterion_3_limit_covariance();
  criterion_4_kirchhoff();
  criterion_5_huygens();
  criterion_6_dispersion();
  criterion_7_reconstruction();

  criterion_8_moment_scalings();

  {  // shared late-time ensemble for criteria 9 and 10
    const GridSpec g = make_grid(3, 64, 64.0);
    const std::size_t members = 4096;
    // weight scaled for an O(1) limit quadratic form
    const auto spec = white_rademacher(g);
    const SpectralCovariance q0 = exact_covariance(spec, g);
    const double c0[3] = {0.0, 0.0, 0.0};
    const TestFunction unit = make_bump(g, c0, 3.0, 0.0, 1.0);
    const double weight = 1.0 / std::sqrt(quadratic_form(limit_covariance(q0).q, unit));
    const CltRun run = clt_run(g, weight, 24.0, members, 4242);
    criterion_9_clt(run, g, members);
    criterion_10_characteristic(run);
  }

  criterion_11_counterexample();
  criterion_12_variable_media();

  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: ")
            << (g_failures == 0 ? "" : std::to_string(g_failures)) << std::endl;
  return g_failures;
}
