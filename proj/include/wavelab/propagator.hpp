#pragma once

// Free wave group on the torus, evaluated mode by mode.
//
// The spectral symbol of the propagator for udotdot = Lap u is
//
//   G_t(k) = [  cos(|k| t)          sin(|k| t)/|k| ]
//            [ -|k| sin(|k| t)      cos(|k| t)     ]
//
// with the |k| -> 0 limit [[1, t], [0, 1]] (free particle for the mean
// mode). det G_t = 1, and the adjoint group is the transpose per mode,
// equivalently component swap -> evolve -> component swap.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

struct Mat2 {
  double a00, a01, a10, a11;
  double det() const { return a00 * a11 - a01 * a10; }
};

// |k| below zero_tol * k_ref takes the k = 0 branch; k_ref is the caller's
// fundamental wavenumber (2*pi/L on a grid).
Mat2 propagator_symbol(double kabs, double t, double zero_tol_scaled = 0.0);
inline double propagator_zero_threshold(const GridSpec& g) { return 1e-12 * g.k_fundamental(); }

StateVector evolve(const StateVector& y, double t);
StateVector adjoint_evolve(const StateVector& psi, double t);
StateVector adjoint_evolve(const TestFunction& psi, double t);

struct ConeReport {
  double time = 0.0;
  double cone_radius = 0.0;  // inflated support radius r_bar
  double mass_inside = 0.0;  // L2 mass, both components
  double mass_outside = 0.0;
  double leakage = 0.0;  // mass_outside / (mass_inside + mass_outside), in [0,1]
};
ConeReport huygens_check(const TestFunction& psi, double t, double r_bar);

struct DecayPoint {
  double t;
  double sup0, sup1;  // per-component sup over nodes
};
struct DecayTable {
  std::vector<DecayPoint> points;
  // least-squares slope of log sup vs log t (component 0 / component 1)
  double slope0 = 0.0, slope1 = 0.0;
};
DecayTable sup_decay_profile(const TestFunction& psi, const std::vector<double>& times);

// smooth function handle for off-grid evaluation; gradient is needed only
// when the handle feeds the time-derivative term of the spherical mean
struct SmoothFn3 {
  std::function<double(const std::array<double, 3>&)> value;
  std::function<std::array<double, 3>(const std::array<double, 3>&)> gradient;
};

// spherical-mean solution representation at a point, n = 3:
//   u(x,t) = t M_t[v0] + M_t[u0] + t M_t[n . grad u0]
// where M_t[f] is the average of f over the sphere |y-x| = t.
// Quadrature: Gauss-Legendre in the polar cosine (quad_order nodes) times
// uniform trapezoid in azimuth (2*quad_order nodes).
double kirchhoff_3d(const SmoothFn3& v0, const SmoothFn3* u0, const std::array<double, 3>& x,
                    double t, int quad_order);

// Gauss-Legendre nodes/weights on [-1, 1]
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace wavelab
