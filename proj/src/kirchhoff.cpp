#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavelab/propagator.hpp"

namespace wavelab {

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton from the Chebyshev-like initial guess
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

double kirchhoff_3d(const SmoothFn3& v0, const SmoothFn3* u0, const std::array<double, 3>& x,
                    double t, int quad_order) {
  if (!(t > 0.0)) throw std::invalid_argument("kirchhoff_3d: t must be positive");
  if (quad_order < 2) throw std::invalid_argument("kirchhoff_3d: quad_order must be >= 2");
  if (u0 && !u0->gradient)
    throw std::invalid_argument("kirchhoff_3d: u0 handle needs a gradient for the d/dt term");
  std::vector<double> mu, w;
  gauss_legendre(quad_order, mu, w);
  const int naz = 2 * quad_order;
  double mv = 0.0, mu0 = 0.0, mng = 0.0;
  for (int i = 0; i < quad_order; ++i) {
    const double c = mu[i], s = std::sqrt(std::max(0.0, 1.0 - c * c));
    double rv = 0.0, ru = 0.0, rg = 0.0;
    for (int j = 0; j < naz; ++j) {
      const double ph = 2.0 * kPi * j / naz;
      const std::array<double, 3> nrm{s * std::cos(ph), s * std::sin(ph), c};
      const std::array<double, 3> y{x[0] + t * nrm[0], x[1] + t * nrm[1], x[2] + t * nrm[2]};
      rv += v0.value(y);
      if (u0) {
        ru += u0->value(y);
        const auto gr = u0->gradient(y);
        rg += nrm[0] * gr[0] + nrm[1] * gr[1] + nrm[2] * gr[2];
      }
    }
    mv += w[i] * rv;
    mu0 += w[i] * ru;
    mng += w[i] * rg;
  }
  // spherical means: (1/4pi) sum_i w_i (2pi/naz) sum_j = (1/(2 naz)) sum_i w_i sum_j
  const double norm = 1.0 / (2.0 * naz);
  double u = t * norm * mv;
  if (u0) u += norm * mu0 + t * norm * mng;
  return u;
}

}  // namespace wavelab
