#include "wavelab/clt.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "wavelab/propagator.hpp"
#include "wavelab/util.hpp"

namespace wavelab {

double SlabSamples::member_total(std::size_t m) const {
  const int ns = labels.nslabs;
  std::vector<double> parts(static_cast<std::size_t>(2 * ns));
  for (int s = 0; s < ns; ++s) {
    parts[static_cast<std::size_t>(s)] = room(s, m);
    parts[static_cast<std::size_t>(ns + s)] = corridor(s, m);
  }
  return pairwise_sum(parts);
}

namespace {

SlabSamples make_samples(const SlabLabels& labels, std::size_t members) {
  SlabSamples s;
  s.labels = labels;
  s.members = members;
  const std::size_t total = static_cast<std::size_t>(labels.nslabs) * members;
  s.rooms.assign(total, 0.0);
  s.corridors.assign(total, 0.0);
  return s;
}

void store_member(SlabSamples& s, std::size_t m, const RoomSums& rs) {
  for (int slot = 0; slot < s.labels.nslabs; ++slot) {
    s.rooms[static_cast<std::size_t>(slot) * s.members + m] =
        rs.rooms[static_cast<std::size_t>(slot)];
    s.corridors[static_cast<std::size_t>(slot) * s.members + m] =
        rs.corridors[static_cast<std::size_t>(slot)];
  }
}

double draw_noise(Rng& rng, NoiseLaw law) {
  switch (law) {
    case NoiseLaw::gaussian: return rng.normal();
    case NoiseLaw::rademacher: return rng.rademacher();
    case NoiseLaw::uniform: return rng.uniform_centered();
  }
  return 0.0;
}

// convolution stencil: every node where the rendered kernel is nonzero,
// gathered modulo the grid period
struct Stencil {
  std::vector<int> w0, w1, w2;
  std::vector<double> weight;
  bool delta_only = false;  // single tap at the origin
  double delta_weight = 0.0;
};

Stencil build_stencil(const GridSpec& g, const Kernel& k) {
  Stencil st;
  const ScalarField f = render_kernel(g, k);
  const int n = g.npts;
  std::size_t idx = 0;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2, ++idx) {
        const double w = f.a[idx];
        if (w != 0.0) {
          st.w0.push_back(i0);
          st.w1.push_back(i1);
          st.w2.push_back(i2);
          st.weight.push_back(w);
        }
      }
  if (st.weight.size() == 1 && st.w0[0] == 0 && st.w1[0] == 0 && st.w2[0] == 0) {
    st.delta_only = true;
    st.delta_weight = st.weight[0];
  }
  return st;
}

}  // namespace

SlabSamples run_slab_ensemble(const FieldSampler& sampler, const StateVector& phi,
                              const SlabLabels& labels, std::size_t members,
                              std::uint64_t master_seed, int threads) {
  if (!(sampler.grid() == labels.grid) || !(phi.u.grid == labels.grid))
    throw std::invalid_argument("run_slab_ensemble: grid mismatch");
  SlabSamples s = make_samples(labels, members);
  parallel_for_chunks(members, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const StateVector y = sampler.sample(derive_stream(master_seed, m));
      store_member(s, m, decompose(y, phi, labels));
    }
  });
  return s;
}

SlabSamples run_slab_ensemble_ma(const MovingAverageModel& model, const StateVector& phi,
                                 const SlabLabels& labels, std::size_t members,
                                 std::uint64_t master_seed, int threads) {
  const GridSpec& g = labels.grid;
  if (g.dim != 3) throw std::invalid_argument("run_slab_ensemble_ma: built for dim == 3");
  if (!(phi.u.grid == g)) throw std::invalid_argument("run_slab_ensemble_ma: grid mismatch");

  const Stencil su = build_stencil(g, model.kernel_u);
  const Stencil sv = build_stencil(g, model.kernel_v);
  const int n = g.npts;
  const double amp = std::pow(g.spacing(), 1.5);  // h^{n/2} convolution weight
  const double cellw = g.cell_volume();

  // wrap[i + n] == i mod n for i in [-n, n)
  std::vector<int> wrap(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < 2 * n; ++i) wrap[static_cast<std::size_t>(i)] = i % n;

  SlabSamples s = make_samples(labels, members);
  parallel_for_chunks(members, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> xi_u(g.node_count()), xi_v;
    std::vector<double> racc(static_cast<std::size_t>(labels.nslabs));
    std::vector<double> cacc(static_cast<std::size_t>(labels.nslabs));
    for (std::size_t m = begin; m < end; ++m) {
      const std::uint64_t seed_m = derive_stream(master_seed, m);
      {
        Rng rng_u(derive_stream(seed_m, 0));
        for (double& x : xi_u) x = draw_noise(rng_u, model.noise_u);
      }
      const double* xv = xi_u.data();
      if (!model.shared_noise) {
        xi_v.resize(g.node_count());
        Rng rng_v(derive_stream(seed_m, 1));
        for (double& x : xi_v) x = draw_noise(rng_v, model.noise_v);
        xv = xi_v.data();
      }
      const double* xu = xi_u.data();

      std::fill(racc.begin(), racc.end(), 0.0);
      std::fill(cacc.begin(), cacc.end(), 0.0);
      std::size_t idx = 0;
      for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
          for (int i2 = 0; i2 < n; ++i2, ++idx) {
            double u0, v0;
            if (su.delta_only) {
              u0 = su.delta_weight * xu[idx];
            } else {
              u0 = 0.0;
              for (std::size_t t = 0; t < su.weight.size(); ++t) {
                const int j0 = wrap[static_cast<std::size_t>(i0 - su.w0[t] + n)];
                const int j1 = wrap[static_cast<std::size_t>(i1 - su.w1[t] + n)];
                const int j2 = wrap[static_cast<std::size_t>(i2 - su.w2[t] + n)];
                u0 += su.weight[t] * xu[(static_cast<std::size_t>(j0) * n + j1) * n + j2];
              }
            }
            if (sv.delta_only) {
              v0 = sv.delta_weight * xv[idx];
            } else {
              v0 = 0.0;
              for (std::size_t t = 0; t < sv.weight.size(); ++t) {
                const int j0 = wrap[static_cast<std::size_t>(i0 - sv.w0[t] + n)];
                const int j1 = wrap[static_cast<std::size_t>(i1 - sv.w1[t] + n)];
                const int j2 = wrap[static_cast<std::size_t>(i2 - sv.w2[t] + n)];
                v0 += sv.weight[t] * xv[(static_cast<std::size_t>(j0) * n + j1) * n + j2];
              }
            }
            const double term = amp * (u0 * phi.u.a[idx] + v0 * phi.v.a[idx]);
            const int plane = labels.axis == 0 ? i0 : (labels.axis == 1 ? i1 : i2);
            const auto slot = static_cast<std::size_t>(
                labels.slab_of_plane[static_cast<std::size_t>(plane)]);
            if (labels.room_plane[static_cast<std::size_t>(plane)])
              racc[slot] += term;
            else
              cacc[slot] += term;
          }
      for (int slot = 0; slot < labels.nslabs; ++slot) {
        s.rooms[static_cast<std::size_t>(slot) * members + m] =
            cellw * racc[static_cast<std::size_t>(slot)];
        s.corridors[static_cast<std::size_t>(slot) * members + m] =
            cellw * cacc[static_cast<std::size_t>(slot)];
      }
    }
  });
  return s;
}

std::vector<double> ensemble_functional(const FieldSampler& sampler, const StateVector& phi,
                                        std::size_t members, std::uint64_t master_seed,
                                        int threads) {
  std::vector<double> values(members, 0.0);
  parallel_for_chunks(members, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const StateVector y = sampler.sample(derive_stream(master_seed, m));
      values[m] = inner_product(y, phi);
    }
  });
  return values;
}

MomentScalingRow moment_row(const SlabSamples& s, double t, double r_bar, double room,
                            double corridor) {
  MomentScalingRow row;
  row.t = t;
  row.room = room;
  row.corridor = corridor;
  const double reach = t - r_bar;  // slabs fully inside the light ball
  double r2 = 0, c2 = 0, r4 = 0, sig = 0;
  int used = 0, cused = 0;
  for (int slot = 0; slot < s.labels.nslabs; ++slot) {
    const int j = slot + s.labels.jmin;
    const double lo = s.labels.slab_origin(j);
    double m2 = 0, m4 = 0, mc2 = 0;
    for (std::size_t m = 0; m < s.members; ++m) {
      const double r = s.room(slot, m);
      const double c = s.corridor(slot, m);
      m2 += r * r;
      m4 += r * r * r * r;
      mc2 += c * c;
    }
    m2 /= static_cast<double>(s.members);
    m4 /= static_cast<double>(s.members);
    mc2 /= static_cast<double>(s.members);
    sig += m2;
    if (lo >= -reach && lo + room <= reach) {
      r2 += m2;
      r4 += m4;
      row.max_r2 = std::max(row.max_r2, m2);
      ++used;
    }
    if (corridor > 0 && lo + room >= -reach && lo + room + corridor <= reach) {
      c2 += mc2;
      ++cused;
    }
  }
  row.rooms_used = used;
  row.sigma_t = sig;
  if (used > 0) {
    row.mean_r2 = r2 / used;
    row.mean_r4 = r4 / used;
  }
  if (cused > 0) row.mean_c2 = c2 / cused;
  return row;
}

MomentScalingStudy moment_scalings(const std::vector<MomentScalingRow>& rows) {
  MomentScalingStudy st;
  st.rows = rows;
  std::vector<double> x2, y2, x4, y4;
  for (const auto& r : rows) {
    if (r.mean_r2 > 0 && r.room > 0 && r.t > 0) {
      x2.push_back(std::log(r.room / r.t));
      y2.push_back(std::log(r.mean_r2));
    }
    if (r.mean_r4 > 0 && r.room > 0 && r.t > 0) {
      x4.push_back(std::log((r.room / r.t) * (r.room / r.t)));
      y4.push_back(std::log(r.mean_r4));
    }
    if (r.mean_r2 > 0 && r.mean_c2 > 0 && r.corridor > 0)
      st.corridor_room_ratio.push_back((r.mean_c2 / r.mean_r2) / (r.corridor / r.room));
  }
  if (x2.size() >= 2) st.slope_r2 = fit_line(x2, y2).slope;
  if (x4.size() >= 2) st.slope_r4 = fit_line(x4, y4).slope;
  return st;
}

double lindeberg_statistic(const SlabSamples& s, double eps) {
  std::vector<std::vector<double>> slabs(static_cast<std::size_t>(s.labels.nslabs));
  for (int slot = 0; slot < s.labels.nslabs; ++slot) {
    auto& col = slabs[static_cast<std::size_t>(slot)];
    col.resize(s.members);
    for (std::size_t m = 0; m < s.members; ++m) col[m] = s.room(slot, m);
  }
  return lindeberg_statistic(slabs, eps);
}

double lindeberg_statistic(const std::vector<std::vector<double>>& slab_samples, double eps) {
  double sigma = 0.0;
  for (const auto& col : slab_samples) {
    if (col.empty()) continue;
    double m2 = 0;
    for (double r : col) m2 += r * r;
    sigma += m2 / static_cast<double>(col.size());
  }
  if (sigma <= 0) return 0.0;
  const double cut = eps * eps * sigma;
  double tail = 0.0;
  for (const auto& col : slab_samples) {
    if (col.empty()) continue;
    double t = 0;
    for (double r : col)
      if (r * r > cut) t += r * r;
    tail += t / static_cast<double>(col.size());
  }
  return tail / sigma;
}

NormalityReport normality_report(const std::vector<double>& samples, double ref_var) {
  NormalityReport rep;
  rep.m = moments(samples);
  rep.ref_var = ref_var > 0 ? ref_var : rep.m.var;
  const double sd = std::sqrt(rep.ref_var);
  rep.ks_stat = ks_statistic(samples, [sd](double x) { return normal_cdf(x / sd); });
  rep.ks_p = ks_pvalue(rep.ks_stat, samples.size());
  return rep;
}

CounterexampleReport no_mixing_counterexample(const GridSpec& g, const TestFunction& psi,
                                              double t, std::size_t members,
                                              std::uint64_t master_seed) {
  CounterexampleReport rep;
  StateVector y;
  y.u = make_field(g, [](const double*) { return 0.0; });
  y.v = make_field(g, [](const double*) { return 1.0; });
  const StateVector yt = evolve(y, t);
  double udev = 0.0;
  for (double uu : yt.u.a) udev = std::max(udev, std::abs(uu - t));
  rep.u_deviation = udev;
  const double val = inner_product(yt, psi);
  rep.atom = std::abs(val);

  rep.samples.resize(members);
  for (std::size_t m = 0; m < members; ++m) {
    Rng rng(derive_stream(master_seed, m));
    rep.samples[m] = rng.rademacher() * val;
    rep.max_dev_from_atom =
        std::max(rep.max_dev_from_atom, std::abs(std::abs(rep.samples[m]) - rep.atom));
  }
  const MomentSummary ms = moments(rep.samples);
  const double sd = std::sqrt(std::max(ms.var, 1e-300));
  const double mu = ms.mean;
  const double d =
      ks_statistic(rep.samples, [mu, sd](double x) { return normal_cdf((x - mu) / sd); });
  rep.ks_p_vs_gaussian = ks_pvalue(d, members);
  return rep;
}

}  // namespace wavelab
