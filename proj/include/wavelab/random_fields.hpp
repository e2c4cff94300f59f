#pragma once

// Random initial data (u0, v0): translation-invariant, finite mean energy
// density, zero mean, and a declared mixing profile.
//
// Two constructions:
//  * Gaussian spectral sampling: hat Y(k) complex Gaussian with per-mode
//    covariance L^n qhat0(k), Hermitian-symmetrized so the nodal field is
//    real. Exact for any admissible real symmetric density.
//  * Moving averages: u0 = h^{n/2} sum_w kernel_u(x - w) xi_w with i.i.d.
//    unit-variance noise per node (gaussian / rademacher / uniform), run as a
//    spectral convolution. Dependence range is exactly twice the kernel
//    radius, so uniform mixing holds by construction, and Rademacher noise
//    with bounded kernels gives a.s. bounded fields.
//
// With the h^{n/2} convolution weight the exact spectral density is
// qhat^ii(k) = |hat kernel_i(k)|^2 (and hat kernel_u hat kernel_v for the
// cross entry when both components share one noise field).

#include <cstdint>
#include <functional>
#include <memory>
#include <variant>

#include "wavelab/covariance.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/util.hpp"

namespace wavelab {

enum class NoiseLaw { gaussian, rademacher, uniform };

enum class KernelShape { delta, ball, bump };
struct Kernel {
  KernelShape shape = KernelShape::ball;
  double radius = 0.0;     // support radius a (ignored for delta)
  double amplitude = 1.0;  // nodal value scale
};
// nodal values: delta -> amplitude at the origin node; ball -> amplitude on
// |x| <= a; bump -> amplitude * mollifier(|x|, a)
ScalarField render_kernel(const GridSpec& g, const Kernel& k);
SpectralField kernel_symbol(const GridSpec& g, const Kernel& k);  // real up to roundoff

struct MovingAverageModel {
  Kernel kernel_u, kernel_v;
  NoiseLaw noise_u = NoiseLaw::rademacher;
  NoiseLaw noise_v = NoiseLaw::rademacher;
  bool shared_noise = false;  // one noise field feeding both components
};

// isotropic spectral density profiles of |k|; f10 = f01
struct IsotropicDensity {
  std::function<double(double)> f00, f01, f11;
};

// Ibragimov-Linnik-type uniform mixing coefficient profile phi(r)
struct MixingProfile {
  std::function<double(double)> phi;
  double range = 0.0;  // phi == 0 beyond (0: unbounded profile)
  // \int_0^rmax r^{n-2} phi^{1/2}(r) dr, finite <=> condition S3
  double phi_bar(int dim, double rmax, int nquad = 4096) const;
};
MixingProfile indicator_mixing(double range);
MixingProfile power_mixing(double r0, double p);  // phi = (1 + r/r0)^{-p}, needs p > 2(n-1)

struct InitialMeasureSpec {
  std::variant<MovingAverageModel, IsotropicDensity> model;
  MixingProfile mixing;
};
InitialMeasureSpec make_ma_spec(const MovingAverageModel& m);
InitialMeasureSpec make_isotropic_spec(const IsotropicDensity& d, const MixingProfile& mix);

SpectralCovariance exact_covariance(const InitialMeasureSpec& spec, const GridSpec& g);
double energy_density(const InitialMeasureSpec& spec, const GridSpec& g);

// one realization per derived stream seed; bitwise deterministic
class FieldSampler {
 public:
  virtual ~FieldSampler() = default;
  virtual StateVector sample(std::uint64_t stream_seed) const = 0;
  virtual const GridSpec& grid() const = 0;
};
std::unique_ptr<FieldSampler> make_sampler(const InitialMeasureSpec& spec, const GridSpec& g);

// direct entry points (the sampler caches their precomputation)
StateVector sample_gaussian(const SpectralCovariance& q0, std::uint64_t stream_seed);
StateVector sample_moving_average(const MovingAverageModel& m, const GridSpec& g,
                                  std::uint64_t stream_seed);

// scan |d^alpha q^ij(z)| <= 2 e0 phi^{1/2}(|z|) + slack over all node offsets,
// |alpha| <= 2 - i - j. Derivatives are lattice centered differences: they
// keep the finite dependence range visible (a band-limited spectral
// derivative rings across the whole torus), at the price of widening the
// support by one cell per order, which the checker credits to the distance.
struct MixingBoundReport {
  double energy_density = 0.0;
  double max_ratio = 0.0;      // of |d^alpha q| to the bound, where bound > slack
  std::size_t violations = 0;  // offsets with |d^alpha q| > bound + slack
  double slack = 0.0;
};
MixingBoundReport verify_mixing_bound(const InitialMeasureSpec& spec, const GridSpec& g,
                                      double rel_slack = 1e-9);

}  // namespace wavelab
