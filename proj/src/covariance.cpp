#include "wavelab/covariance.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/propagator.hpp"
#include "wavelab/util.hpp"

namespace wavelab {

SpectralCovariance make_covariance(const GridSpec& g) {
  const std::size_t n = g.node_count();
  return SpectralCovariance{g, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                            std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

bool is_positive_semidefinite(const SpectralCovariance& q, double tol, std::size_t* bad_mode) {
  for (std::size_t i = 0; i < q.q00.size(); ++i) {
    const double d = q.q00[i] * q.q11[i] - q.q01[i] * q.q10[i];
    if (q.q00[i] < -tol || q.q11[i] < -tol || d < -tol) {
      if (bad_mode) *bad_mode = i;
      return false;
    }
  }
  return true;
}

double cross_symmetry_defect(const SpectralCovariance& q) {
  double m = 0.0;
  for (std::size_t i = 0; i < q.q00.size(); ++i) {
    const std::size_t j = mirror_index(q.grid, i);
    m = std::max(m, std::abs(q.q00[j] - q.q00[i]));
    m = std::max(m, std::abs(q.q11[j] - q.q11[i]));
    m = std::max(m, std::abs(q.q01[j] - q.q10[i]));
  }
  return m;
}

SpectralCovariance evolve_covariance(const SpectralCovariance& q0, double t) {
  const GridSpec& g = q0.grid;
  SpectralCovariance q = make_covariance(g);
  const double tol = propagator_zero_threshold(g);
  for (std::size_t i = 0; i < q.q00.size(); ++i) {
    const Mat2 m = propagator_symbol(wavevector(g, i), t, tol);
    // G q G^T
    const double a = q0.q00[i], b = q0.q01[i], c = q0.q10[i], d = q0.q11[i];
    const double r0 = m.a00 * a + m.a01 * c, r1 = m.a00 * b + m.a01 * d;  // row 0 of G q
    const double s0 = m.a10 * a + m.a11 * c, s1 = m.a10 * b + m.a11 * d;  // row 1 of G q
    q.q00[i] = r0 * m.a00 + r1 * m.a01;
    q.q01[i] = r0 * m.a10 + r1 * m.a11;
    q.q10[i] = s0 * m.a00 + s1 * m.a01;
    q.q11[i] = s0 * m.a10 + s1 * m.a11;
  }
  return q;
}

LimitCovariance limit_covariance(const SpectralCovariance& q0) {
  const GridSpec& g = q0.grid;
  LimitCovariance lim{make_covariance(g), false};
  const double tol = propagator_zero_threshold(g);
  for (std::size_t i = 0; i < q0.q00.size(); ++i) {
    const double kabs = wavevector(g, i);
    const double anti = 0.5 * (q0.q01[i] - q0.q10[i]);
    if (kabs <= tol) {
      // free-particle block: entries whose time averages exist are kept
      // (q11 is constant; the others only when their growth terms vanish),
      // divergent ones are dropped and flagged
      const bool grows = q0.q11[i] != 0.0 || q0.q01[i] + q0.q10[i] != 0.0;
      if (grows) lim.zero_mode_warning = true;
      lim.q.q11[i] = q0.q11[i];
      lim.q.q00[i] = grows ? 0.0 : q0.q00[i];
      lim.q.q01[i] = lim.q.q10[i] = 0.0;
      if (q0.q11[i] == 0.0) {
        lim.q.q01[i] = q0.q01[i];
        lim.q.q10[i] = q0.q10[i];
      }
      continue;
    } else {
      const double k2 = kabs * kabs;
      lim.q.q00[i] = 0.5 * (q0.q00[i] + q0.q11[i] / k2);
      lim.q.q11[i] = 0.5 * (q0.q11[i] + k2 * q0.q00[i]);
    }
    lim.q.q01[i] = anti;
    lim.q.q10[i] = -anti;
  }
  return lim;
}

SpectralCovariance time_average_covariance(const SpectralCovariance& q0, double t0, double t1,
                                           int nsamples) {
  if (nsamples < 2 || !(t1 > t0)) throw std::invalid_argument("time_average_covariance: bad window");
  const GridSpec& g = q0.grid;
  SpectralCovariance acc = make_covariance(g);
  const double dt = (t1 - t0) / nsamples;
  for (int s = 0; s <= nsamples; ++s) {
    const double w = (s == 0 || s == nsamples) ? 0.5 : 1.0;
    const SpectralCovariance qt = evolve_covariance(q0, t0 + s * dt);
    for (std::size_t i = 0; i < acc.q00.size(); ++i) {
      acc.q00[i] += w * qt.q00[i];
      acc.q01[i] += w * qt.q01[i];
      acc.q10[i] += w * qt.q10[i];
      acc.q11[i] += w * qt.q11[i];
    }
  }
  const double inv = 1.0 / nsamples;
  for (std::size_t i = 0; i < acc.q00.size(); ++i) {
    acc.q00[i] *= inv;
    acc.q01[i] *= inv;
    acc.q10[i] *= inv;
    acc.q11[i] *= inv;
  }
  return acc;
}

double energy_density(const SpectralCovariance& q) {
  const GridSpec& g = q.grid;
  const std::size_t n = q.q00.size();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double kabs = wavevector(g, i);
    terms[i] = q.q11[i] + (kabs * kabs + 1.0) * q.q00[i];
  }
  return pairwise_sum(terms) / g.volume();
}

double energy_density_t(const SpectralCovariance& q0, double t) {
  return energy_density(evolve_covariance(q0, t));
}

double conserved_energy(const SpectralCovariance& q) {
  const GridSpec& g = q.grid;
  const std::size_t n = q.q00.size();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double kabs = wavevector(g, i);
    terms[i] = q.q11[i] + kabs * kabs * q.q00[i];
  }
  return pairwise_sum(terms) / g.volume();
}

ScalarField position_covariance(const SpectralCovariance& q, Entry e, double* out_imag_residue) {
  const std::vector<double>* src = nullptr;
  switch (e) {
    case Entry::e00: src = &q.q00; break;
    case Entry::e01: src = &q.q01; break;
    case Entry::e10: src = &q.q10; break;
    case Entry::e11: src = &q.q11; break;
  }
  SpectralField sf = make_spectral(q.grid);
  for (std::size_t i = 0; i < src->size(); ++i) sf.c[i] = cplx{(*src)[i], 0.0};
  return inverse_transform(sf, out_imag_residue);
}

double radial_position_covariance(const std::function<double(double)>& f, double zabs,
                                  double kmax, int panels, int order) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const double dr = kmax / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double r0 = p * dr;
    for (int i = 0; i < order; ++i) {
      const double r = r0 + 0.5 * dr * (x[i] + 1.0);
      const double wgt = 0.5 * dr * w[i];
      const double integrand =
          zabs > 0.0 ? r * std::sin(r * zabs) / zabs * f(r) : r * r * f(r);
      acc += wgt * integrand;
    }
  }
  return acc / (2.0 * kPi * kPi);
}

double quadratic_form(const SpectralCovariance& q, const SpectralField& ph0,
                      const SpectralField& ph1) {
  const GridSpec& g = q.grid;
  const std::size_t n = q.q00.size();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx p0 = ph0.c[i], p1 = ph1.c[i];
    const cplx s = q.q00[i] * std::conj(p0) * p0 + q.q01[i] * std::conj(p0) * p1 +
                   q.q10[i] * std::conj(p1) * p0 + q.q11[i] * std::conj(p1) * p1;
    terms[i] = s.real();
  }
  return pairwise_sum(terms) / g.volume();
}

double quadratic_form(const SpectralCovariance& q, const StateVector& psi) {
  return quadratic_form(q, forward_transform(psi.u), forward_transform(psi.v));
}

double quadratic_form(const SpectralCovariance& q, const TestFunction& psi) {
  return quadratic_form(q, forward_transform(psi.psi0), forward_transform(psi.psi1));
}

IntegrabilityReport ft_integrability_report(const SpectralCovariance& q) {
  const GridSpec& g = q.grid;
  const double tol = propagator_zero_threshold(g);
  const std::size_t n = q.q00.size();
  std::vector<double> t00(n, 0.0), t01(n, 0.0), t10(n, 0.0), t11(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double kabs = wavevector(g, i);
    if (kabs <= tol) continue;  // zero mode excluded
    const double inv2 = 1.0 / (kabs * kabs);
    t00[i] = (kabs * kabs + inv2) * std::abs(q.q00[i]);
    t01[i] = (kabs + inv2) * std::abs(q.q01[i]);
    t10[i] = (kabs + inv2) * std::abs(q.q10[i]);
    t11[i] = (1.0 + inv2) * std::abs(q.q11[i]);
  }
  const double w = 1.0 / g.volume();
  return IntegrabilityReport{w * pairwise_sum(t00), w * pairwise_sum(t01), w * pairwise_sum(t10),
                             w * pairwise_sum(t11)};
}

std::vector<ConvergenceRow> convergence_profile(const SpectralCovariance& q0,
                                                const std::vector<double>& times,
                                                const std::vector<std::size_t>& offsets) {
  LimitCovariance lim = limit_covariance(q0);
  // compare mean-free (fluctuation) covariances: the zero mode of q_t need
  // not have a time average at all, so it is excluded on both sides
  lim.q.q00[0] = lim.q.q01[0] = lim.q.q10[0] = lim.q.q11[0] = 0.0;
  const ScalarField qinf = position_covariance(lim.q, Entry::e00);
  double scale = 0.0;
  for (std::size_t off : offsets) scale = std::max(scale, std::abs(qinf.a[off]));
  std::vector<ConvergenceRow> rows;
  for (double t : times) {
    SpectralCovariance qev = evolve_covariance(q0, t);
    qev.q00[0] = qev.q01[0] = qev.q10[0] = qev.q11[0] = 0.0;
    const ScalarField qt = position_covariance(qev, Entry::e00);
    double dev = 0.0;
    for (std::size_t off : offsets) dev = std::max(dev, std::abs(qt.a[off] - qinf.a[off]));
    rows.push_back(ConvergenceRow{t, dev, scale});
  }
  return rows;
}

}  // namespace wavelab
