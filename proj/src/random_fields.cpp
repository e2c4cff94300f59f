#include "wavelab/random_fields.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/fft.hpp"

namespace wavelab {

ScalarField render_kernel(const GridSpec& g, const Kernel& k) {
  ScalarField f = make_field(g);
  switch (k.shape) {
    case KernelShape::delta:
      f.a[0] = k.amplitude;
      break;
    case KernelShape::ball:
      for (std::size_t i = 0; i < f.a.size(); ++i)
        if (torus_distance(g, i) <= k.radius) f.a[i] = k.amplitude;
      break;
    case KernelShape::bump:
      for (std::size_t i = 0; i < f.a.size(); ++i)
        f.a[i] = k.amplitude * mollifier(torus_distance(g, i), k.radius);
      break;
  }
  if (k.shape != KernelShape::delta && !(k.radius > 0.0))
    throw std::invalid_argument("kernel: radius must be positive");
  return f;
}

SpectralField kernel_symbol(const GridSpec& g, const Kernel& k) {
  return forward_transform(render_kernel(g, k));
}

double MixingProfile::phi_bar(int dim, double rmax, int nquad) const {
  const double upper = range > 0.0 ? std::min(range, rmax) : rmax;
  const double dr = upper / nquad;
  double acc = 0.0;
  for (int i = 0; i < nquad; ++i) {
    const double r = (i + 0.5) * dr;
    acc += std::pow(r, dim - 2) * std::sqrt(std::max(0.0, phi(r))) * dr;
  }
  return acc;
}

MixingProfile indicator_mixing(double range) {
  return MixingProfile{[range](double r) { return r <= range ? 1.0 : 0.0; }, range};
}

MixingProfile power_mixing(double r0, double p) {
  if (!(r0 > 0.0) || !(p > 0.0)) throw std::invalid_argument("power_mixing: bad parameters");
  return MixingProfile{[r0, p](double r) { return std::pow(1.0 + r / r0, -p); }, 0.0};
}

InitialMeasureSpec make_ma_spec(const MovingAverageModel& m) {
  const double a = std::max(m.kernel_u.shape == KernelShape::delta ? 0.0 : m.kernel_u.radius,
                            m.kernel_v.shape == KernelShape::delta ? 0.0 : m.kernel_v.radius);
  // independence beyond twice the kernel radius: conservative indicator profile
  return InitialMeasureSpec{m, indicator_mixing(2.0 * a)};
}

InitialMeasureSpec make_isotropic_spec(const IsotropicDensity& d, const MixingProfile& mix) {
  return InitialMeasureSpec{d, mix};
}

namespace {

std::vector<double> real_symbol(const GridSpec& g, const Kernel& k) {
  const SpectralField s = kernel_symbol(g, k);
  std::vector<double> r(s.c.size());
  double imax = 0.0;
  for (std::size_t i = 0; i < s.c.size(); ++i) {
    r[i] = s.c[i].real();
    imax = std::max(imax, std::abs(s.c[i].imag()));
  }
  // radial kernels are even, so the symbol is real
  double scale = 0.0;
  for (double v : r) scale = std::max(scale, std::abs(v));
  if (imax > 1e-10 * std::max(scale, 1e-300))
    throw std::invalid_argument("kernel_symbol: kernel is not even, symbol not real");
  return r;
}

}  // namespace

SpectralCovariance exact_covariance(const InitialMeasureSpec& spec, const GridSpec& g) {
  SpectralCovariance q = make_covariance(g);
  if (const auto* ma = std::get_if<MovingAverageModel>(&spec.model)) {
    const std::vector<double> ku = real_symbol(g, ma->kernel_u);
    const std::vector<double> kv = real_symbol(g, ma->kernel_v);
    for (std::size_t i = 0; i < q.q00.size(); ++i) {
      q.q00[i] = ku[i] * ku[i];
      q.q11[i] = kv[i] * kv[i];
      if (ma->shared_noise) {
        q.q01[i] = q.q10[i] = ku[i] * kv[i];
      }
    }
  } else {
    const auto& iso = std::get<IsotropicDensity>(spec.model);
    for (std::size_t i = 0; i < q.q00.size(); ++i) {
      const double kabs = wavevector(g, i);
      q.q00[i] = iso.f00 ? iso.f00(kabs) : 0.0;
      q.q11[i] = iso.f11 ? iso.f11(kabs) : 0.0;
      const double c = iso.f01 ? iso.f01(kabs) : 0.0;
      q.q01[i] = q.q10[i] = c;
    }
  }
  return q;
}

double energy_density(const InitialMeasureSpec& spec, const GridSpec& g) {
  return energy_density(exact_covariance(spec, g));
}

namespace {

double draw(Rng& rng, NoiseLaw law) {
  switch (law) {
    case NoiseLaw::gaussian: return rng.normal();
    case NoiseLaw::rademacher: return rng.rademacher();
    case NoiseLaw::uniform: return rng.uniform_centered();
  }
  return 0.0;
}

struct GaussianFactors {
  // per-mode lower-triangular factor of the symmetric part, prescaled
  std::vector<double> l00, l10, l11;
};

GaussianFactors gaussian_factors(const SpectralCovariance& q0) {
  const GridSpec& g = q0.grid;
  const std::size_t n = q0.q00.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    scale = std::max({scale, std::abs(q0.q00[i]), std::abs(q0.q11[i])});
  const double tol = 1e-10 * std::max(scale, 1e-300);
  GaussianFactors f;
  f.l00.resize(n);
  f.l10.resize(n);
  f.l11.resize(n);
  std::size_t bad = 0;
  if (!is_positive_semidefinite(q0, tol, &bad))
    throw std::invalid_argument("sample_gaussian: indefinite spectral matrix at mode " +
                                std::to_string(bad));
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::max(0.0, q0.q00[i]);
    const double d = std::max(0.0, q0.q11[i]);
    const double b = 0.5 * (q0.q01[i] + q0.q10[i]);
    if (std::abs(q0.q01[i] - q0.q10[i]) > tol)
      throw std::invalid_argument("sample_gaussian: antisymmetric cross density not realizable");
    if (a > tol) {
      f.l00[i] = std::sqrt(a);
      f.l10[i] = b / f.l00[i];
      f.l11[i] = std::sqrt(std::max(0.0, d - f.l10[i] * f.l10[i]));
    } else {
      if (std::abs(b) > tol)
        throw std::invalid_argument("sample_gaussian: indefinite spectral matrix (cross term)");
      f.l00[i] = 0.0;
      f.l10[i] = 0.0;
      f.l11[i] = std::sqrt(d);
    }
  }
  // sampling assumes even diagonal entries (mirror symmetry); verify
  double defect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = mirror_index(g, i);
    defect = std::max(defect, std::abs(q0.q00[j] - q0.q00[i]));
    defect = std::max(defect, std::abs(q0.q11[j] - q0.q11[i]));
  }
  if (defect > tol)
    throw std::invalid_argument("sample_gaussian: spectral density not even in k");
  return f;
}

StateVector sample_gaussian_impl(const GridSpec& g, const GaussianFactors& f,
                                 std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = g.node_count();
  SpectralField uh = make_spectral(g), vh = make_spectral(g);
  const double root_vol = std::sqrt(g.volume());
  const double root_half_vol = root_vol / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = mirror_index(g, i);
    if (j < i) continue;
    if (j == i) {
      // self-conjugate mode: real Gaussian, variance L^n qhat
      const double x0 = rng.normal(), x1 = rng.normal();
      uh.c[i] = cplx{root_vol * f.l00[i] * x0, 0.0};
      vh.c[i] = cplx{root_vol * (f.l10[i] * x0 + f.l11[i] * x1), 0.0};
    } else {
      const double xr = rng.normal(), yr = rng.normal();
      const double xi = rng.normal(), yi = rng.normal();
      const cplx w0{root_half_vol * f.l00[i] * xr, root_half_vol * f.l00[i] * xi};
      const cplx w1{root_half_vol * (f.l10[i] * xr + f.l11[i] * yr),
                    root_half_vol * (f.l10[i] * xi + f.l11[i] * yi)};
      uh.c[i] = w0;
      vh.c[i] = w1;
      uh.c[j] = std::conj(w0);
      vh.c[j] = std::conj(w1);
    }
  }
  return StateVector{inverse_transform(uh), inverse_transform(vh)};
}

struct MaFactors {
  std::vector<double> su, sv;  // h^{-n/2} * kernel symbols
};

MaFactors ma_factors(const GridSpec& g, const MovingAverageModel& m) {
  MaFactors f;
  f.su = real_symbol(g, m.kernel_u);
  f.sv = real_symbol(g, m.kernel_v);
  const double w = 1.0 / std::sqrt(g.cell_volume());
  for (auto& v : f.su) v *= w;
  for (auto& v : f.sv) v *= w;
  return f;
}

StateVector sample_ma_impl(const GridSpec& g, const MovingAverageModel& m, const MaFactors& f,
                           std::uint64_t seed) {
  // substream convention shared with the streaming ensemble path:
  // (seed, 0) feeds the u noise, (seed, 1) the v noise
  const std::size_t n = g.node_count();
  std::vector<cplx> noise(n), spec(n);
  auto fill_noise = [&](NoiseLaw law, std::uint64_t sub) {
    Rng rng(derive_stream(seed, sub));
    for (std::size_t i = 0; i < n; ++i) noise[i] = cplx{draw(rng, law), 0.0};
  };
  auto convolve = [&](const std::vector<double>& sym, SpectralField& out) {
    detail::dft(g, noise.data(), spec.data(), +1);
    const double w = g.cell_volume();
    for (std::size_t i = 0; i < n; ++i) out.c[i] = spec[i] * (w * sym[i]);
  };
  SpectralField uh = make_spectral(g), vh = make_spectral(g);
  fill_noise(m.noise_u, 0);
  convolve(f.su, uh);
  if (!m.shared_noise) fill_noise(m.noise_v, 1);
  convolve(f.sv, vh);
  return StateVector{inverse_transform(uh), inverse_transform(vh)};
}

class GaussianSampler final : public FieldSampler {
 public:
  GaussianSampler(const SpectralCovariance& q0) : grid_(q0.grid), f_(gaussian_factors(q0)) {}
  StateVector sample(std::uint64_t seed) const override {
    return sample_gaussian_impl(grid_, f_, seed);
  }
  const GridSpec& grid() const override { return grid_; }

 private:
  GridSpec grid_;
  GaussianFactors f_;
};

class MaSampler final : public FieldSampler {
 public:
  MaSampler(const MovingAverageModel& m, const GridSpec& g)
      : grid_(g), model_(m), f_(ma_factors(g, m)) {}
  StateVector sample(std::uint64_t seed) const override {
    return sample_ma_impl(grid_, model_, f_, seed);
  }
  const GridSpec& grid() const override { return grid_; }

 private:
  GridSpec grid_;
  MovingAverageModel model_;
  MaFactors f_;
};

}  // namespace

std::unique_ptr<FieldSampler> make_sampler(const InitialMeasureSpec& spec, const GridSpec& g) {
  if (const auto* ma = std::get_if<MovingAverageModel>(&spec.model))
    return std::make_unique<MaSampler>(*ma, g);
  return std::make_unique<GaussianSampler>(exact_covariance(spec, g));
}

StateVector sample_gaussian(const SpectralCovariance& q0, std::uint64_t stream_seed) {
  return sample_gaussian_impl(q0.grid, gaussian_factors(q0), stream_seed);
}

StateVector sample_moving_average(const MovingAverageModel& m, const GridSpec& g,
                                  std::uint64_t stream_seed) {
  return sample_ma_impl(g, m, ma_factors(g, m), stream_seed);
}

MixingBoundReport verify_mixing_bound(const InitialMeasureSpec& spec, const GridSpec& g,
                                      double rel_slack) {
  const SpectralCovariance q = exact_covariance(spec, g);
  const double e0 = energy_density(q);
  MixingBoundReport rep;
  rep.energy_density = e0;
  rep.slack = rel_slack * 2.0 * e0;

  // collect (|d^alpha q^ij|, |alpha|) fields; sign conventions cancel in
  // absolute value. Centered differences keep compact supports compact; each
  // application reaches one cell further, credited to the distance below.
  auto entry_field = [&](const std::vector<double>& src) {
    SpectralField f = make_spectral(g);
    for (std::size_t i = 0; i < src.size(); ++i) f.c[i] = cplx{src[i], 0.0};
    return inverse_transform(f);
  };
  auto diff = [&](const ScalarField& f, int axis) {
    ScalarField out = make_field(g);
    const double inv2h = 0.5 / g.spacing();
    int ix[8] = {0};
    for (std::size_t i = 0; i < f.a.size(); ++i) {
      unflatten(g, i, ix);
      const int j = ix[axis];
      ix[axis] = (j + 1) % g.npts;
      const std::size_t up = flatten(g, ix);
      ix[axis] = (j + g.npts - 1) % g.npts;
      const std::size_t dn = flatten(g, ix);
      ix[axis] = j;
      out.a[i] = (f.a[up] - f.a[dn]) * inv2h;
    }
    return out;
  };
  std::vector<std::pair<ScalarField, int>> derivs;
  auto add_derivs = [&](const std::vector<double>& src, int max_order) {
    const ScalarField f = entry_field(src);
    derivs.emplace_back(f, 0);
    if (max_order >= 1) {
      for (int a = 0; a < g.dim; ++a) {
        const ScalarField da = diff(f, a);
        derivs.emplace_back(da, 1);
        if (max_order >= 2)
          for (int b = a; b < g.dim; ++b) derivs.emplace_back(diff(da, b), 2);
      }
    }
  };
  add_derivs(q.q00, 2);
  add_derivs(q.q01, 1);
  add_derivs(q.q10, 1);
  add_derivs(q.q11, 0);

  const auto& phi = spec.mixing;
  const double h = g.spacing();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double r = torus_distance(g, i);
    for (const auto& [d, order] : derivs) {
      const double reff = std::max(0.0, r - order * h);
      const double bound = 2.0 * e0 * std::sqrt(std::max(0.0, phi.phi(reff)));
      const double v = std::abs(d.a[i]);
      if (v > bound + rep.slack) ++rep.violations;
      if (bound > rep.slack) rep.max_ratio = std::max(rep.max_ratio, v / bound);
    }
  }
  return rep;
}

}  // namespace wavelab
