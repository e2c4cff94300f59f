#include "wavelab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavelab/fft.hpp"
#include "wavelab/util.hpp"

namespace wavelab {

Mat2 propagator_symbol(double kabs, double t, double zero_tol_scaled) {
  if (kabs <= zero_tol_scaled) return Mat2{1.0, t, 0.0, 1.0};
  const double c = std::cos(kabs * t), s = std::sin(kabs * t);
  return Mat2{c, s / kabs, -kabs * s, c};
}

namespace {

// per-mode 2x2 multiply of (uhat, vhat); transpose = adjoint group
void apply_symbol(const GridSpec& g, std::vector<cplx>& uh, std::vector<cplx>& vh, double t,
                  bool transpose) {
  const double tol = propagator_zero_threshold(g);
  const std::size_t n = g.node_count();
  const int N = g.npts;
  const double kf = g.k_fundamental();
  std::vector<double> kax(N);
  for (int j = 0; j < N; ++j) kax[j] = kf * signed_mode(g, j);
  int ix[8] = {0};
  for (std::size_t i = 0; i < n; ++i) {
    double k2 = 0.0;
    for (int a = 0; a < g.dim; ++a) k2 += kax[ix[a]] * kax[ix[a]];
    Mat2 m = propagator_symbol(std::sqrt(k2), t, tol);
    if (transpose) std::swap(m.a01, m.a10);
    const cplx u = uh[i], v = vh[i];
    uh[i] = m.a00 * u + m.a01 * v;
    vh[i] = m.a10 * u + m.a11 * v;
    for (int a = g.dim - 1; a >= 0; --a) {
      if (++ix[a] < N) break;
      ix[a] = 0;
    }
  }
}

StateVector evolve_impl(const StateVector& y, double t, bool transpose) {
  const GridSpec& g = y.u.grid;
  SpectralField uh = forward_transform(y.u);
  SpectralField vh = forward_transform(y.v);
  apply_symbol(g, uh.c, vh.c, t, transpose);
  StateVector out{inverse_transform(uh), inverse_transform(vh)};
  return out;
}

}  // namespace

StateVector evolve(const StateVector& y, double t) { return evolve_impl(y, t, false); }

StateVector adjoint_evolve(const StateVector& psi, double t) { return evolve_impl(psi, t, true); }

StateVector adjoint_evolve(const TestFunction& psi, double t) {
  return adjoint_evolve(StateVector{psi.psi0, psi.psi1}, t);
}

ConeReport huygens_check(const TestFunction& psi, double t, double r_bar) {
  const GridSpec& g = psi.psi0.grid;
  const StateVector phi = adjoint_evolve(psi, t);
  const std::size_t n = g.node_count();
  std::vector<double> in(n, 0.0), out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = torus_distance(g, i);
    const double m = phi.u.a[i] * phi.u.a[i] + phi.v.a[i] * phi.v.a[i];
    if (r >= t - r_bar && r <= t + r_bar)
      in[i] = m;
    else
      out[i] = m;
  }
  ConeReport rep;
  rep.time = t;
  rep.cone_radius = r_bar;
  rep.mass_inside = g.cell_volume() * pairwise_sum(in);
  rep.mass_outside = g.cell_volume() * pairwise_sum(out);
  const double tot = rep.mass_inside + rep.mass_outside;
  rep.leakage = tot > 0.0 ? rep.mass_outside / tot : 0.0;
  return rep;
}

DecayTable sup_decay_profile(const TestFunction& psi, const std::vector<double>& times) {
  const GridSpec& g = psi.psi0.grid;
  DecayTable table;
  // transform once, sweep times with per-mode multiplies only
  SpectralField uh0 = forward_transform(psi.psi0);
  SpectralField vh0 = forward_transform(psi.psi1);
  for (double t : times) {
    std::vector<cplx> uh = uh0.c, vh = vh0.c;
    apply_symbol(g, uh, vh, t, true);
    SpectralField su{g, std::move(uh)}, sv{g, std::move(vh)};
    const ScalarField phi0 = inverse_transform(su);
    const ScalarField phi1 = inverse_transform(sv);
    DecayPoint p{t, 0.0, 0.0};
    for (std::size_t i = 0; i < phi0.a.size(); ++i) {
      p.sup0 = std::max(p.sup0, std::abs(phi0.a[i]));
      p.sup1 = std::max(p.sup1, std::abs(phi1.a[i]));
    }
    table.points.push_back(p);
  }
  auto slope = [&](auto pick) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& p : table.points) {
      if (!(p.t > 0.0) || !(pick(p) > 0.0)) continue;
      const double x = std::log(p.t), y = std::log(pick(p));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    if (m < 2) return 0.0;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  table.slope0 = slope([](const DecayPoint& p) { return p.sup0; });
  table.slope1 = slope([](const DecayPoint& p) { return p.sup1; });
  return table;
}

}  // namespace wavelab
