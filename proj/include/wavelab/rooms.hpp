#pragma once

// Bernstein room-and-corridor partition: slabs orthogonal to one coordinate
// axis, period d + rho, rooms of width d followed by corridors of width rho.
// The half-open intervals [j*(d+rho), j*(d+rho)+d) and [j*(d+rho)+d,
// (j+1)*(d+rho)) tile the centered coordinate range [-L/2, L/2), so every
// node lands in exactly one slot and the slab sums reconstruct the full
// functional exactly:  sum_j (r^j + c^j) = <Y0, Phi>.

#include <cstdint>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

struct RoomCorridorPartition {
  int axis = -1;          // -1: last coordinate axis
  double room = 1.0;      // d > 0
  double corridor = 0.0;  // rho >= 0
  double pitch() const { return room + corridor; }
};

// growth rules for the partition as t grows: d_t = t/ln t, rho_t = t^{1-delta}
struct Schedule {
  double delta = 0.5;  // in (0, 1)
  double room_width(double t) const;
  double corridor_width(double t) const;
};

// per-axis-plane slab assignment (slabs depend only on the axis coordinate)
struct SlabLabels {
  GridSpec grid;
  int axis = 0;
  int jmin = 0;
  int nslabs = 0;
  std::vector<std::int32_t> slab_of_plane;  // size npts, value j - jmin
  std::vector<std::uint8_t> room_plane;     // 1 room, 0 corridor
  double pitch = 0.0;
  // centered coordinate of the lower face of slab j (absolute index)
  double slab_origin(int j_abs) const { return pitch * j_abs; }
};
SlabLabels label_slabs(const GridSpec& g, const RoomCorridorPartition& p);

struct RoomSums {
  int jmin = 0;
  std::vector<double> rooms, corridors;  // indexed j - jmin
  double total() const;
};
RoomSums decompose(const StateVector& y0, const StateVector& phi, const SlabLabels& labels);

// slab activity window from finite propagation speed: slab j can couple to a
// test function of inflated support radius r_bar at time t only if its slab
// interval intersects [-r_bar - t, r_bar + t]
bool slab_active(const SlabLabels& labels, int j_abs, double t, double r_bar);

}  // namespace wavelab
