#include "wavelab/rooms.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/util.hpp"

namespace wavelab {

double Schedule::room_width(double t) const {
  if (!(t > std::exp(1.0))) throw std::invalid_argument("schedule: need t > e for d_t = t/ln t");
  return t / std::log(t);
}

double Schedule::corridor_width(double t) const {
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("schedule: delta in (0,1)");
  return std::pow(t, 1.0 - delta);
}

SlabLabels label_slabs(const GridSpec& g, const RoomCorridorPartition& p) {
  if (!(p.room > 0.0) || p.corridor < 0.0)
    throw std::invalid_argument("partition: need d > 0, rho >= 0");
  SlabLabels lab;
  lab.grid = g;
  lab.axis = p.axis < 0 ? g.dim - 1 : p.axis;
  if (lab.axis >= g.dim) throw std::invalid_argument("partition: axis out of range");
  lab.pitch = p.pitch();
  const int N = g.npts;
  lab.slab_of_plane.resize(N);
  lab.room_plane.resize(N);
  int jlo = 0, jhi = 0;
  std::vector<int> jabs(N);
  for (int i = 0; i < N; ++i) {
    const double s = torus_wrap(g, coord(g, i));  // centered in [-L/2, L/2)
    const int j = static_cast<int>(std::floor(s / lab.pitch));
    jabs[i] = j;
    const double local = s - j * lab.pitch;
    lab.room_plane[i] = local < p.room ? 1 : 0;
    if (i == 0 || j < jlo) jlo = j;
    if (i == 0 || j > jhi) jhi = j;
  }
  lab.jmin = jlo;
  lab.nslabs = jhi - jlo + 1;
  for (int i = 0; i < N; ++i) lab.slab_of_plane[i] = jabs[i] - jlo;
  return lab;
}

double RoomSums::total() const { return pairwise_sum(rooms) + pairwise_sum(corridors); }

RoomSums decompose(const StateVector& y0, const StateVector& phi, const SlabLabels& labels) {
  const GridSpec& g = y0.u.grid;
  if (!(g == labels.grid) || !(g == phi.u.grid))
    throw std::invalid_argument("decompose: grid mismatch");
  RoomSums out;
  out.jmin = labels.jmin;
  out.rooms.assign(labels.nslabs, 0.0);
  out.corridors.assign(labels.nslabs, 0.0);
  const std::size_t n = g.node_count();
  const int N = g.npts;
  int ix[8] = {0};
  for (std::size_t i = 0; i < n; ++i) {
    const int p = ix[labels.axis];
    const double term = y0.u.a[i] * phi.u.a[i] + y0.v.a[i] * phi.v.a[i];
    if (labels.room_plane[p])
      out.rooms[labels.slab_of_plane[p]] += term;
    else
      out.corridors[labels.slab_of_plane[p]] += term;
    for (int a = g.dim - 1; a >= 0; --a) {
      if (++ix[a] < N) break;
      ix[a] = 0;
    }
  }
  const double w = g.cell_volume();
  for (auto& r : out.rooms) r *= w;
  for (auto& c : out.corridors) c *= w;
  return out;
}

bool slab_active(const SlabLabels& labels, int j_abs, double t, double r_bar) {
  const double lo = labels.slab_origin(j_abs);
  const double hi = lo + labels.pitch;
  return hi >= -r_bar - t && lo <= r_bar + t;
}

}  // namespace wavelab
