#include "wavelab/media.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavelab/stats.hpp"
#include "wavelab/util.hpp"

namespace wavelab {

double RadialMedium::perturbation_radius() const {
  double r = 0.0;
  if (beta != 0.0 || gamma != 0.0) r = std::max(r, width);
  if (a0_amp != 0.0) r = std::max(r, a0_width);
  return r;
}

double mollifier_prime(double r, double R) {
  if (!(r < R) || r < 0.0) return 0.0;
  const double d = R * R - r * r;
  return mollifier(r, R) * (-2.0 * r * R * R) / (d * d);
}

int CoefficientField::slot(int i, int j) {
  if (i > j) std::swap(i, j);
  return i * (5 - i) / 2 + j;
}

namespace {

void require_dim3(const GridSpec& g, const char* who) {
  if (g.dim != 3) throw std::invalid_argument(std::string(who) + ": built for dim == 3");
}

}  // namespace

CoefficientField identity_medium(const GridSpec& g) {
  require_dim3(g, "identity_medium");
  CoefficientField c;
  c.grid = g;
  const std::size_t nn = g.node_count();
  for (int s = 0; s < 6; ++s) c.a[static_cast<std::size_t>(s)].assign(nn, 0.0);
  c.a[0].assign(nn, 1.0);
  c.a[3].assign(nn, 1.0);
  c.a[5].assign(nn, 1.0);
  c.a0.assign(nn, 0.0);
  c.perturbation_radius = 0.0;
  return c;
}

CoefficientField render_medium(const GridSpec& g, const RadialMedium& m) {
  require_dim3(g, "render_medium");
  CoefficientField c = identity_medium(g);
  c.perturbation_radius = m.perturbation_radius();
  if (c.perturbation_radius >= 0.25 * g.length)
    throw std::invalid_argument("render_medium: perturbation radius must stay below L/4");
  const std::size_t nn = g.node_count();
  for (std::size_t i = 0; i < nn; ++i) {
    const double r = torus_distance(g, i, m.center.data());
    const double mb = mollifier(r, m.width);
    const double diag = 1.0 + m.beta * mb;
    const double off = m.gamma * mb;
    c.a[0][i] = diag;
    c.a[3][i] = diag;
    c.a[5][i] = diag;
    c.a[1][i] = off;
    c.a[2][i] = off;
    c.a[4][i] = off;
    c.a0[i] = m.a0_amp * mollifier(r, m.a0_width);
  }
  return c;
}

namespace {

// eigenvalues of a symmetric 3x3 by cyclic Jacobi rotations
void sym3_eigs(double a[3][3], double eig[3]) {
  for (int sweep = 0; sweep < 12; ++sweep) {
    double offd = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (offd == 0.0) break;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0), sn = t * cs;
        for (int r = 0; r < 3; ++r) {
          const double arp = a[r][p], arq = a[r][q];
          a[r][p] = cs * arp - sn * arq;
          a[r][q] = sn * arp + cs * arq;
        }
        for (int r = 0; r < 3; ++r) {
          const double apr = a[p][r], aqr = a[q][r];
          a[p][r] = cs * apr - sn * aqr;
          a[q][r] = sn * apr + cs * aqr;
        }
      }
  }
  eig[0] = a[0][0];
  eig[1] = a[1][1];
  eig[2] = a[2][2];
}

}  // namespace

HyperbolicityReport check_hyperbolicity(const CoefficientField& c) {
  require_dim3(c.grid, "check_hyperbolicity");
  HyperbolicityReport rep;
  rep.min_eig = 1e300;
  rep.max_eig = -1e300;
  rep.min_potential = 1e300;
  rep.max_potential = -1e300;
  const std::size_t nn = c.grid.node_count();
  for (std::size_t i = 0; i < nn; ++i) {
    double m[3][3] = {{c.a[0][i], c.a[1][i], c.a[2][i]},
                      {c.a[1][i], c.a[3][i], c.a[4][i]},
                      {c.a[2][i], c.a[4][i], c.a[5][i]}};
    double e[3];
    sym3_eigs(m, e);
    rep.min_eig = std::min(rep.min_eig, std::min({e[0], e[1], e[2]}));
    rep.max_eig = std::max(rep.max_eig, std::max({e[0], e[1], e[2]}));
    rep.min_potential = std::min(rep.min_potential, c.a0[i]);
    rep.max_potential = std::max(rep.max_potential, c.a0[i]);
  }
  rep.alpha = 0.5 * rep.min_eig;
  if (!(rep.alpha > 0.0))
    throw std::domain_error("check_hyperbolicity: coefficient matrix not positive definite");
  if (rep.min_potential < 0.0)
    throw std::domain_error("check_hyperbolicity: a0 must be nonnegative");
  return rep;
}

namespace {

struct Workspace {
  std::vector<double> t1, t2, out;
  void ensure(std::size_t nn) {
    if (t1.size() != nn) {
      t1.assign(nn, 0.0);
      t2.assign(nn, 0.0);
      out.assign(nn, 0.0);
    }
  }
};

void central_diff3(int N, const double* in, double* out, int axis, double inv2h) {
  std::size_t idx = 0;
  for (int i0 = 0; i0 < N; ++i0) {
    const int i0p = i0 + 1 == N ? 0 : i0 + 1, i0m = i0 == 0 ? N - 1 : i0 - 1;
    for (int i1 = 0; i1 < N; ++i1) {
      const int i1p = i1 + 1 == N ? 0 : i1 + 1, i1m = i1 == 0 ? N - 1 : i1 - 1;
      for (int i2 = 0; i2 < N; ++i2, ++idx) {
        std::size_t p, m;
        if (axis == 0) {
          p = (static_cast<std::size_t>(i0p) * N + i1) * N + i2;
          m = (static_cast<std::size_t>(i0m) * N + i1) * N + i2;
        } else if (axis == 1) {
          p = (static_cast<std::size_t>(i0) * N + i1p) * N + i2;
          m = (static_cast<std::size_t>(i0) * N + i1m) * N + i2;
        } else {
          const int i2p = i2 + 1 == N ? 0 : i2 + 1, i2m = i2 == 0 ? N - 1 : i2 - 1;
          p = (static_cast<std::size_t>(i0) * N + i1) * N + i2p;
          m = (static_cast<std::size_t>(i0) * N + i1) * N + i2m;
        }
        out[idx] = (in[p] - in[m]) * inv2h;
      }
    }
  }
}

bool any_nonzero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return true;
  return false;
}

void apply_op(const CoefficientField& c, const double* u, double* out, Workspace& ws) {
  const GridSpec& g = c.grid;
  const int N = g.npts;
  const double h = g.spacing();
  const double inv_h2 = 1.0 / (h * h), inv_2h = 0.5 / h;
  const double* d0 = c.a[0].data();
  const double* d1 = c.a[3].data();
  const double* d2 = c.a[5].data();
  const double* a0 = c.a0.data();

  // diagonal flux terms with arithmetic-mean half-node coefficients, plus a0
  std::size_t idx = 0;
  for (int i0 = 0; i0 < N; ++i0) {
    const int i0p = i0 + 1 == N ? 0 : i0 + 1, i0m = i0 == 0 ? N - 1 : i0 - 1;
    for (int i1 = 0; i1 < N; ++i1) {
      const int i1p = i1 + 1 == N ? 0 : i1 + 1, i1m = i1 == 0 ? N - 1 : i1 - 1;
      for (int i2 = 0; i2 < N; ++i2, ++idx) {
        const int i2p = i2 + 1 == N ? 0 : i2 + 1, i2m = i2 == 0 ? N - 1 : i2 - 1;
        const std::size_t p0 = (static_cast<std::size_t>(i0p) * N + i1) * N + i2;
        const std::size_t m0 = (static_cast<std::size_t>(i0m) * N + i1) * N + i2;
        const std::size_t p1 = (static_cast<std::size_t>(i0) * N + i1p) * N + i2;
        const std::size_t m1 = (static_cast<std::size_t>(i0) * N + i1m) * N + i2;
        const std::size_t p2 = (static_cast<std::size_t>(i0) * N + i1) * N + i2p;
        const std::size_t m2 = (static_cast<std::size_t>(i0) * N + i1) * N + i2m;
        const double uc = u[idx];
        double acc = -a0[idx] * uc;
        acc += inv_h2 * (0.5 * (d0[idx] + d0[p0]) * (u[p0] - uc) -
                         0.5 * (d0[idx] + d0[m0]) * (uc - u[m0]));
        acc += inv_h2 * (0.5 * (d1[idx] + d1[p1]) * (u[p1] - uc) -
                         0.5 * (d1[idx] + d1[m1]) * (uc - u[m1]));
        acc += inv_h2 * (0.5 * (d2[idx] + d2[p2]) * (u[p2] - uc) -
                         0.5 * (d2[idx] + d2[m2]) * (uc - u[m2]));
        out[idx] = acc;
      }
    }
  }

  // cross terms D_i (a_ij D_j u) + D_j (a_ij D_i u), centered differences
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  const std::size_t nn = g.node_count();
  for (const auto& pr : pairs) {
    const int i = pr[0], j = pr[1];
    const auto& aij = c.a[static_cast<std::size_t>(CoefficientField::slot(i, j))];
    if (!any_nonzero(aij)) continue;
    for (int dir = 0; dir < 2; ++dir) {
      const int first = dir == 0 ? j : i, second = dir == 0 ? i : j;
      central_diff3(N, u, ws.t1.data(), first, inv_2h);
      for (std::size_t q = 0; q < nn; ++q) ws.t1[q] *= aij[q];
      central_diff3(N, ws.t1.data(), ws.t2.data(), second, inv_2h);
      for (std::size_t q = 0; q < nn; ++q) out[q] += ws.t2[q];
    }
  }
}

}  // namespace

std::vector<double> apply_operator(const CoefficientField& c, const std::vector<double>& u) {
  require_dim3(c.grid, "apply_operator");
  if (u.size() != c.grid.node_count())
    throw std::invalid_argument("apply_operator: size mismatch");
  Workspace ws;
  ws.ensure(u.size());
  std::vector<double> out(u.size());
  apply_op(c, u.data(), out.data(), ws);
  return out;
}

double operator_quadratic(const CoefficientField& c, const std::vector<double>& u) {
  const std::vector<double> au = apply_operator(c, u);
  long double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * au[i];
  return -static_cast<double>(acc) * c.grid.cell_volume();
}

double stable_dt(const CoefficientField& c, const FdtdOptions& opts) {
  require_dim3(c.grid, "stable_dt");
  if (!(opts.cfl > 0.0) || opts.cfl > 0.5)
    throw std::invalid_argument("stable_dt: cfl must lie in (0, 0.5]");
  const std::size_t nn = c.grid.node_count();
  Workspace ws;
  ws.ensure(nn);
  std::vector<double> b(nn), w(nn);
  Rng rng(1234);
  for (double& x : b) x = rng.normal();
  double lambda = 0.0;
  for (int it = 0; it < opts.power_iters; ++it) {
    apply_op(c, b.data(), w.data(), ws);
    long double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      num += -b[i] * w[i];
      den += b[i] * b[i];
    }
    lambda = static_cast<double>(num / den);
    long double nrm = 0.0;
    for (std::size_t i = 0; i < nn; ++i) nrm += w[i] * w[i];
    const double inv = 1.0 / std::sqrt(static_cast<double>(nrm));
    for (std::size_t i = 0; i < nn; ++i) b[i] = -w[i] * inv;
  }
  if (!(lambda > 0.0)) throw std::runtime_error("stable_dt: spectral estimate failed");
  // Verlet stability limit dt < 2/sqrt(lambda_max), with margin for the
  // power-iteration underestimate
  return opts.cfl * 2.0 / std::sqrt(1.05 * lambda);
}

FdtdRun evolve_fdtd(const CoefficientField& c, const StateVector& y0, double t,
                    const FdtdOptions& opts) {
  return fdtd_walk(c, y0, t, opts, nullptr);
}

FdtdRun fdtd_walk(const CoefficientField& c, const StateVector& y0, double t,
                  const FdtdOptions& opts,
                  const std::function<void(int, double, const StateVector&)>& cb) {
  require_dim3(c.grid, "fdtd_walk");
  if (!(y0.u.grid == c.grid)) throw std::invalid_argument("fdtd_walk: grid mismatch");

  FdtdRun run;
  run.y = y0;
  if (t == 0.0) {
    if (cb) cb(0, 0.0, run.y);
    return run;
  }
  int steps = opts.forced_steps;
  if (steps <= 0) {
    const double dt_target = stable_dt(c, opts);
    steps = static_cast<int>(std::ceil(std::abs(t) / dt_target));
    const int mult = std::max(1, opts.steps_multiple);
    steps = ((steps + mult - 1) / mult) * mult;
  }
  const double dt = t / steps;  // signed: the Verlet map is reversible
  run.dt = dt;
  run.steps = steps;

  std::vector<double>& u = run.y.u.a;
  std::vector<double>& v = run.y.v.a;
  const std::size_t nn = u.size();
  Workspace ws;
  ws.ensure(nn);
  std::vector<double> acc(nn);
  apply_op(c, u.data(), acc.data(), ws);

  const double cw = c.grid.cell_volume();
  {
    long double kin = 0.0, pot = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      kin += v[i] * v[i];
      pot += -u[i] * acc[i];
    }
    run.energy0 = 0.5 * cw * static_cast<double>(kin + pot);
  }
  if (cb) cb(0, 0.0, run.y);

  const double half = 0.5 * dt;
  double e_base = 0.0;
  bool have_base = false;
  for (int k = 1; k <= steps; ++k) {
    for (std::size_t i = 0; i < nn; ++i) v[i] += half * acc[i];
    for (std::size_t i = 0; i < nn; ++i) u[i] += dt * v[i];
    // the staggered form (|v^{n+1/2}|^2 - <u^{n+1}, (Lu)^n>)/2 is the
    // quantity the leapfrog map conserves exactly for symmetric L; the
    // integer-time energy merely oscillates around it at O(dt^2)
    {
      long double kin = 0.0, pot = 0.0;
      for (std::size_t i = 0; i < nn; ++i) {
        kin += v[i] * v[i];
        pot += -u[i] * acc[i];
      }
      const double e = 0.5 * cw * static_cast<double>(kin + pot);
      if (!have_base) {
        e_base = e;
        have_base = true;
      } else if (e_base != 0.0) {
        run.energy_drift =
            std::max(run.energy_drift, std::abs(e - e_base) / std::abs(e_base));
      }
    }
    apply_op(c, u.data(), acc.data(), ws);
    for (std::size_t i = 0; i < nn; ++i) v[i] += half * acc[i];
    if (cb) cb(k, k * dt, run.y);
  }
  return run;
}

FdtdRun adjoint_evolve_fdtd(const CoefficientField& c, const StateVector& psi, double t,
                            const FdtdOptions& opts) {
  // transpose of the step map equals swap-conjugation because the spatial
  // operator is symmetric
  StateVector swapped{psi.v, psi.u};
  FdtdRun run = evolve_fdtd(c, swapped, t, opts);
  std::swap(run.y.u, run.y.v);
  return run;
}

StateVector adjoint_evolve_var(const CoefficientField& c, const TestFunction& psi, double t,
                               const FdtdOptions& opts) {
  return adjoint_evolve_fdtd(c, StateVector{psi.psi0, psi.psi1}, t, opts).y;
}

DecayProfile local_energy_decay(const CoefficientField& c, const StateVector& y0, double R,
                                const std::vector<double>& times, double fit_lo, double fit_hi,
                                const FdtdOptions& opts) {
  DecayProfile prof;
  prof.radius = R;
  prof.fit_lo = fit_lo;
  prof.fit_hi = fit_hi;
  std::vector<double> targets = times;
  std::sort(targets.begin(), targets.end());
  if (targets.empty() || targets.back() <= 0.0)
    throw std::invalid_argument("local_energy_decay: need positive sample times");

  std::size_t next = 0;
  const FdtdRun run = fdtd_walk(
      c, y0, targets.back(), opts, [&](int, double time, const StateVector& y) {
        bool hit = false;
        while (next < targets.size() && time >= targets[next] - 1e-12) {
          ++next;
          hit = true;
        }
        if (hit) {
          prof.times.push_back(time);
          prof.norms.push_back(local_energy_seminorm(y, R));
        }
      });
  prof.energy_drift = run.energy_drift;

  double peak = 0.0;
  for (double nv : prof.norms) peak = std::max(peak, nv);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < prof.times.size(); ++i) {
    const double tt = prof.times[i], nv = prof.norms[i];
    if (tt >= fit_lo && tt <= fit_hi && nv > 1e-14 * peak) {
      xs.push_back(tt);
      ys.push_back(std::log(nv));
    }
  }
  if (xs.size() >= 2) {
    const LineFit f = fit_line(xs, ys);
    prof.alpha_fit = -f.slope;
    prof.fit_r2 = f.r2;
  }
  return prof;
}

}  // namespace wavelab
