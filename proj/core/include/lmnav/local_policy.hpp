#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lmnav/goal_estimate.hpp"
#include "lmnav/simulator.hpp"

namespace lmnav {

enum class CellState : std::uint8_t { Unknown, Free, Occupied };

struct GridParams {
  double resolution = 0.1;  // meters per cell
  int extent = 81;          // cells per side, odd, agent on the center cell
  double agent_radius = 0.18;

  void validate() const;
};

// Agent-centered, world-axis-aligned local metric map.
struct OccupancyGrid {
  double resolution = 0.1;
  int extent = 81;
  std::vector<CellState> cells;

  int center() const { return extent / 2; }
  bool in_grid(int ix, int iy) const {
    return ix >= 0 && ix < extent && iy >= 0 && iy < extent;
  }
  CellState at(int ix, int iy) const { return cells[iy * extent + ix]; }
  CellState& at(int ix, int iy) { return cells[iy * extent + ix]; }
  bool is_free(int ix, int iy) const {
    return in_grid(ix, iy) && at(ix, iy) == CellState::Free;
  }
  // Cell containing the given agent-relative (world-aligned) offset.
  std::pair<int, int> cell_of(double dx, double dy) const;
};

// Ray-traces the depth fan into the grid: cells before a hit become Free,
// the hit cell Occupied, no-return rays Free to max range; everything
// outside the swept wedge stays Unknown. Occupied cells then inflate by the
// agent radius, and the agent's own cell is forced Free.
OccupancyGrid build_local_map(const DepthScan& scan, double agent_heading,
                              const GridParams& params);

// Eikonal arrival distances from the waypoint over Free cells; Occupied and
// Unknown cells stay at +infinity.
struct DistanceField {
  double resolution = 0.1;
  int extent = 81;
  std::vector<double> values;
  std::pair<int, int> waypoint{0, 0};

  double at(int ix, int iy) const { return values[iy * extent + ix]; }
  bool reachable(int ix, int iy) const {
    return std::isfinite(at(ix, iy));
  }
};

// First-order upwind fast marching on the 8-neighborhood stencil (axis pairs
// plus the rotated diagonal pairs).
DistanceField fast_marching(const OccupancyGrid& grid,
                            std::pair<int, int> waypoint_cell);

// The local update the solver uses; exposed so tests can verify the field is
// a fixed point of it.
double eikonal_update(const DistanceField& field, const OccupancyGrid& grid,
                      int ix, int iy);

// Nearest Free cell to the given one (the cell itself when already Free);
// {-1,-1} when the grid has no Free cell.
std::pair<int, int> snap_to_free(const OccupancyGrid& grid,
                                 std::pair<int, int> cell);

struct PolicyParams {
  double stop_radius = 0.75;               // meters
  double turn_step = 15.0 * M_PI / 180.0;  // matches the agent's turn action
};

// Waypoint cell for a goal estimate: polar offset (distance, heading) from
// the agent, clamped into the grid and snapped to free space.
std::pair<int, int> waypoint_cell_for(const GoalEstimate& est,
                                      double agent_heading,
                                      const OccupancyGrid& grid);

// Stop inside stop_radius; otherwise steer along the steepest field descent:
// Forward when the descent bearing is within half a turn increment of the
// heading (and the cell ahead is not Occupied), else turn toward it.
DiscreteAction select_action(const GoalEstimate& est, const OccupancyGrid& grid,
                             const DistanceField& field, double agent_heading,
                             const PolicyParams& params);

}  // namespace lmnav
