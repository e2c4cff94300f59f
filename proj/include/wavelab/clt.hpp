#pragma once

// Ensemble studies for the scalar functionals <Y(t), Psi> = <Y0, Phi_t>:
// room/corridor moment scalings, Lindeberg fractions, characteristic
// functionals, and the no-mixing counterexample. Every member draws from a
// stream derived from (master seed, member index) and lands in a
// preallocated slot, so estimates are bitwise reproducible and independent
// of the worker count.

#include <cstdint>
#include <vector>

#include "wavelab/random_fields.hpp"
#include "wavelab/rooms.hpp"
#include "wavelab/stats.hpp"

namespace wavelab {

// per-slot, per-member slab sums; layout [slot * members + m]
struct SlabSamples {
  SlabLabels labels;
  std::size_t members = 0;
  std::vector<double> rooms, corridors;
  double room(int slot, std::size_t m) const { return rooms[slot * members + m]; }
  double corridor(int slot, std::size_t m) const { return corridors[slot * members + m]; }
  double member_total(std::size_t m) const;  // sum_j (r^j + c^j) for one member
};

// generic path: full-field sample per member
SlabSamples run_slab_ensemble(const FieldSampler& sampler, const StateVector& phi,
                              const SlabLabels& labels, std::size_t members,
                              std::uint64_t master_seed, int threads);

// moving-average fast path (dim == 3): r^j accumulated from the noise field
// through the kernel stencil directly, fields never materialized
SlabSamples run_slab_ensemble_ma(const MovingAverageModel& model, const StateVector& phi,
                                 const SlabLabels& labels, std::size_t members,
                                 std::uint64_t master_seed, int threads);

// <Y_m, phi> for every member
std::vector<double> ensemble_functional(const FieldSampler& sampler, const StateVector& phi,
                                        std::size_t members, std::uint64_t master_seed,
                                        int threads);

struct MomentScalingRow {
  double t = 0, room = 0, corridor = 0;  // schedule at this step
  double mean_r2 = 0, mean_c2 = 0, mean_r4 = 0;  // across interior-active rooms/corridors
  double max_r2 = 0;
  int rooms_used = 0;
  double sigma_t = 0;  // sum over rooms of E|r^j|^2
};
MomentScalingRow moment_row(const SlabSamples& s, double t, double r_bar, double room,
                            double corridor);

struct MomentScalingStudy {
  std::vector<MomentScalingRow> rows;
  double slope_r2 = 0;  // log mean_r2 vs log(d_t/t)
  double slope_r4 = 0;  // log mean_r4 vs log((d_t/t)^2)
  std::vector<double> corridor_room_ratio;  // (mean_c2/mean_r2)/(rho_t/d_t) per row
};
MomentScalingStudy moment_scalings(const std::vector<MomentScalingRow>& rows);

// (1/sigma) sum_j E[ |r^j|^2 ; |r^j|^2 > eps^2 sigma ],  sigma = sum_j E|r^j|^2
double lindeberg_statistic(const SlabSamples& s, double eps);
// same reduction on caller-provided per-slab sample vectors
double lindeberg_statistic(const std::vector<std::vector<double>>& slab_samples, double eps);

struct NormalityReport {
  MomentSummary m;
  double ref_var = 0;   // target variance for the KS reference
  double ks_stat = 0;
  double ks_p = 0;
};
NormalityReport normality_report(const std::vector<double>& samples, double ref_var);

struct CounterexampleReport {
  double atom = 0;            // |<Y(t), Psi>| of the two-point law
  double max_dev_from_atom = 0;  // over members, |(|sample|) - atom|
  double u_deviation = 0;     // max |u(x,t) - t| from the evolved +1 member
  double ks_p_vs_gaussian = 0;
  std::vector<double> samples;
};
// u0 = 0, v0 = +-1 equiprobable: U(t)Y0 has u = +-t, the functional law is
// two-atom and stays non-Gaussian for all t
CounterexampleReport no_mixing_counterexample(const GridSpec& g, const TestFunction& psi,
                                              double t, std::size_t members,
                                              std::uint64_t master_seed);

}  // namespace wavelab
