#include "wavelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavelab/fft.hpp"
#include "wavelab/util.hpp"

namespace wavelab {

GridSpec make_grid(int dim, int npts, double length) {
  if (dim < 3 || dim % 2 == 0 || dim > 7)
    throw std::invalid_argument("grid: dim must be odd, >= 3 and <= 7");
  if (npts < 4 || npts % 2 != 0) throw std::invalid_argument("grid: npts must be even and >= 4");
  if (!(length > 0.0)) throw std::invalid_argument("grid: length must be positive");
  return GridSpec{dim, npts, length};
}

void unflatten(const GridSpec& g, std::size_t idx, int* ix) {
  for (int a = g.dim - 1; a >= 0; --a) {
    ix[a] = static_cast<int>(idx % g.npts);
    idx /= g.npts;
  }
}

std::size_t flatten(const GridSpec& g, const int* ix) {
  std::size_t idx = 0;
  for (int a = 0; a < g.dim; ++a) idx = idx * g.npts + static_cast<std::size_t>(ix[a]);
  return idx;
}

std::size_t mirror_index(const GridSpec& g, std::size_t idx) {
  int ix[8];
  unflatten(g, idx, ix);
  std::size_t m = 0;
  for (int a = 0; a < g.dim; ++a) m = m * g.npts + mirror_index_1d(g, ix[a]);
  return m;
}

double torus_distance(const GridSpec& g, std::size_t idx, const double* p) {
  int ix[8];
  unflatten(g, idx, ix);
  double s = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const double d = torus_wrap(g, coord(g, ix[a]) - (p ? p[a] : 0.0));
    s += d * d;
  }
  return std::sqrt(s);
}

double wavevector(const GridSpec& g, std::size_t idx, double* k) {
  int ix[8];
  unflatten(g, idx, ix);
  const double kf = g.k_fundamental();
  double s = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const double ka = kf * signed_mode(g, ix[a]);
    if (k) k[a] = ka;
    s += ka * ka;
  }
  return std::sqrt(s);
}

ScalarField make_field(const GridSpec& g) { return ScalarField{g, std::vector<double>(g.node_count(), 0.0)}; }

ScalarField make_field(const GridSpec& g, const std::function<double(const double*)>& f) {
  ScalarField out = make_field(g);
  const std::size_t n = g.node_count();
  int ix[8] = {0};
  double x[8];
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < g.dim; ++a) x[a] = coord(g, ix[a]);
    out.a[i] = f(x);
    for (int a = g.dim - 1; a >= 0; --a) {
      if (++ix[a] < g.npts) break;
      ix[a] = 0;
    }
  }
  return out;
}

SpectralField make_spectral(const GridSpec& g) {
  return SpectralField{g, std::vector<cplx>(g.node_count(), cplx{0.0, 0.0})};
}

StateVector make_state(const GridSpec& g) { return StateVector{make_field(g), make_field(g)}; }

double mollifier(double r, double R) {
  if (!(r < R)) return 0.0;
  const double q = r / R;
  return std::exp(1.0 - 1.0 / (1.0 - q * q));
}

TestFunction make_bump(const GridSpec& g, const double* center, double radius, double w0,
                       double w1) {
  if (!(radius > 0.0) || !(radius < 0.5 * g.length))
    throw std::invalid_argument("bump: radius must lie in (0, L/2)");
  TestFunction psi{make_field(g), make_field(g), radius};
  const std::size_t n = g.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = torus_distance(g, i, center);
    const double b = mollifier(r, radius);
    psi.psi0.a[i] = w0 * b;
    psi.psi1.a[i] = w1 * b;
  }
  return psi;
}

SpectralField forward_transform(const ScalarField& f) {
  const GridSpec& g = f.grid;
  SpectralField out = make_spectral(g);
  std::vector<cplx> in(g.node_count());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = cplx{f.a[i], 0.0};
  detail::dft(g, in.data(), out.c.data(), +1);
  const double w = g.cell_volume();
  for (auto& c : out.c) c *= w;
  return out;
}

ScalarField inverse_transform(const SpectralField& f, double* out_imag_residue) {
  const GridSpec& g = f.grid;
  std::vector<cplx> out(g.node_count());
  detail::dft(g, f.c.data(), out.data(), -1);
  const double w = 1.0 / g.volume();
  ScalarField r = make_field(g);
  double imax = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const cplx z = out[i] * w;
    r.a[i] = z.real();
    imax = std::max(imax, std::abs(z.imag()));
  }
  if (out_imag_residue) *out_imag_residue = imax;
  return r;
}

double hermitian_asymmetry(const SpectralField& f) {
  const GridSpec& g = f.grid;
  double m = 0.0;
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    const std::size_t j = mirror_index(g, i);
    if (j < i) continue;
    m = std::max(m, std::abs(f.c[j] - std::conj(f.c[i])));
  }
  return m;
}

double inner_product(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner_product: grid mismatch");
  const std::size_t n = a.a.size();
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = a.a[i] * b.a[i];
  return a.grid.cell_volume() * pairwise_sum(prod);
}

double inner_product(const StateVector& y, const StateVector& p) {
  return inner_product(y.u, p.u) + inner_product(y.v, p.v);
}

double inner_product(const StateVector& y, const TestFunction& p) {
  return inner_product(y.u, p.psi0) + inner_product(y.v, p.psi1);
}

SpectralField spectral_derivative(const SpectralField& f, int axis) {
  const GridSpec& g = f.grid;
  if (axis < 0 || axis >= g.dim) throw std::invalid_argument("spectral_derivative: bad axis");
  SpectralField out = make_spectral(g);
  const double kf = g.k_fundamental();
  const int N = g.npts;
  const std::size_t n = g.node_count();
  int ix[8] = {0};
  for (std::size_t i = 0; i < n; ++i) {
    const int j = ix[axis];
    // the Nyquist plane (even N only) is self-conjugate; an odd multiplier
    // there breaks the Hermitian symmetry of real fields, so it is excluded
    if (N % 2 == 0 && j == N / 2) {
      out.c[i] = cplx{0.0, 0.0};
    } else {
      const double k = kf * signed_mode(g, j);
      // the synthesis kernel is e^{-i k x}, so d/dx brings down -i k
      out.c[i] = cplx{0.0, -k} * f.c[i];
    }
    for (int a = g.dim - 1; a >= 0; --a) {
      if (++ix[a] < N) break;
      ix[a] = 0;
    }
  }
  return out;
}

std::vector<ScalarField> spectral_gradient(const ScalarField& f) {
  const SpectralField fh = forward_transform(f);
  std::vector<ScalarField> grad;
  grad.reserve(f.grid.dim);
  for (int a = 0; a < f.grid.dim; ++a) grad.push_back(inverse_transform(spectral_derivative(fh, a)));
  return grad;
}

namespace {

double energy_weighted_sum(const StateVector& y, const std::function<double(std::size_t)>& w) {
  const GridSpec& g = y.u.grid;
  const auto grad = spectral_gradient(y.u);
  const std::size_t n = g.node_count();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w(i);
    if (wi == 0.0) {
      terms[i] = 0.0;
      continue;
    }
    double e = y.v.a[i] * y.v.a[i] + y.u.a[i] * y.u.a[i];
    for (int a = 0; a < g.dim; ++a) e += grad[a].a[i] * grad[a].a[i];
    terms[i] = wi * e;
  }
  return g.cell_volume() * pairwise_sum(terms);
}

}  // namespace

double local_energy_seminorm(const StateVector& y, double R, const double* center) {
  const GridSpec& g = y.u.grid;
  return std::sqrt(energy_weighted_sum(
      y, [&](std::size_t i) { return torus_distance(g, i, center) < R ? 1.0 : 0.0; }));
}

double weighted_norm(const StateVector& y, double delta) {
  const GridSpec& g = y.u.grid;
  return std::sqrt(energy_weighted_sum(
      y, [&](std::size_t i) { return std::exp(-2.0 * delta * torus_distance(g, i)); }));
}

double parseval_nodal_energy(const ScalarField& f) {
  const std::size_t n = f.a.size();
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = f.a[i] * f.a[i];
  return f.grid.cell_volume() * pairwise_sum(sq);
}

double parseval_spectral_energy(const SpectralField& f) {
  const std::size_t n = f.c.size();
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = std::norm(f.c[i]);
  return pairwise_sum(sq) / f.grid.volume();
}

}  // namespace wavelab
