#pragma once

// Periodic torus discretization of R^n (n odd) and the transform convention
// used throughout the library:
//
//   forward:  fhat(k_m) = h^n * sum_x f(x) exp(+i k_m . x)
//   inverse:  f(x)      = L^-n * sum_m fhat(k_m) exp(-i k_m . x)
//
// with k_m = 2*pi*m/L, m in {-N/2, ..., N/2-1}^n. Under this convention the
// nodal sums approximate continuum Fourier integrals and the continuum
// (2pi)^-n \int dk corresponds to L^-n sum_m. Parseval reads
//   h^n sum_x f g = L^-n sum_m fhat conj(ghat).

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace wavelab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct GridSpec {
  int dim = 3;         // spatial dimension, odd, >= 3
  int npts = 64;       // nodes per axis, even
  double length = 64;  // torus edge L

  double spacing() const { return length / npts; }
  double cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= spacing();
    return v;
  }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= length;
    return v;
  }
  std::size_t node_count() const {
    std::size_t c = 1;
    for (int i = 0; i < dim; ++i) c *= static_cast<std::size_t>(npts);
    return c;
  }
  double k_fundamental() const { return 2.0 * kPi / length; }
  // largest time horizon free of wrap-around for data of support radius
  // r_supp probed by test functions of support radius r_bar
  double horizon(double r_bar, double r_supp) const { return 0.5 * length - r_bar - r_supp; }

  bool operator==(const GridSpec&) const = default;
};

// validates: dim odd >= 3, npts even >= 4, length > 0
GridSpec make_grid(int dim, int npts, double length);

void unflatten(const GridSpec& g, std::size_t idx, int* ix);
std::size_t flatten(const GridSpec& g, const int* ix);

inline int signed_mode(const GridSpec& g, int j) { return j < g.npts / 2 ? j : j - g.npts; }
inline std::size_t mirror_index_1d(const GridSpec& g, int j) {
  return static_cast<std::size_t>((g.npts - j) % g.npts);
}
std::size_t mirror_index(const GridSpec& g, std::size_t idx);  // index of -k

// node coordinate along one axis, in [0, L)
inline double coord(const GridSpec& g, int j) { return g.spacing() * j; }
// wrap a coordinate difference into [-L/2, L/2)
inline double torus_wrap(const GridSpec& g, double c) {
  const double L = g.length;
  double w = c - L * std::floor(c / L + 0.5);
  if (w >= 0.5 * L) w -= L;
  return w;
}
// torus-minimal distance of node idx from point p (p = nullptr: origin)
double torus_distance(const GridSpec& g, std::size_t idx, const double* p = nullptr);

// wavevector of spectral slot idx; returns |k|
double wavevector(const GridSpec& g, std::size_t idx, double* k = nullptr);

struct ScalarField {
  GridSpec grid;
  std::vector<double> a;
};
ScalarField make_field(const GridSpec& g);
ScalarField make_field(const GridSpec& g, const std::function<double(const double*)>& f);

struct SpectralField {
  GridSpec grid;
  std::vector<cplx> c;
};
SpectralField make_spectral(const GridSpec& g);

// state Y = (u, du/dt)
struct StateVector {
  ScalarField u, v;
};
StateVector make_state(const GridSpec& g);

// compactly supported smooth pair Psi = (psi0, psi1), support radius < L/2
struct TestFunction {
  ScalarField psi0, psi1;
  double support_radius = 0.0;
};

// C-infinity bump: exp(1 - R^2/(R^2 - r^2)) for r < R, 0 beyond
double mollifier(double r, double R);
TestFunction make_bump(const GridSpec& g, const double* center, double radius, double w0,
                       double w1);

SpectralField forward_transform(const ScalarField& f);
// inverse of forward_transform; imaginary residue (from Hermitian-symmetric
// input) is discarded, its max modulus is reported if out_imag_residue given
ScalarField inverse_transform(const SpectralField& f, double* out_imag_residue = nullptr);

// max |c(-k) - conj(c(k))| over modes
double hermitian_asymmetry(const SpectralField& f);

double inner_product(const ScalarField& a, const ScalarField& b);  // h^n sum a b
double inner_product(const StateVector& y, const StateVector& p);  // both components
double inner_product(const StateVector& y, const TestFunction& p);

// spectral derivative along axis; Nyquist plane coefficient set to zero
SpectralField spectral_derivative(const SpectralField& f, int axis);
std::vector<ScalarField> spectral_gradient(const ScalarField& f);

// sqrt of h^n sum_{|x-c| < R} (v^2 + |grad u|^2 + u^2), gradient spectral
double local_energy_seminorm(const StateVector& y, double R, const double* center = nullptr);
// sqrt of h^n sum_x exp(-2 delta |x|) (v^2 + |grad u|^2 + u^2)
double weighted_norm(const StateVector& y, double delta);

double parseval_nodal_energy(const ScalarField& f);     // h^n sum f^2
double parseval_spectral_energy(const SpectralField&);  // L^-n sum |fhat|^2

}  // namespace wavelab
