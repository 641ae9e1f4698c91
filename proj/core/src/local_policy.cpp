#include "lmnav/local_policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace lmnav {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void GridParams::validate() const {
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("GridParams: resolution must be > 0");
  }
  if (extent < 3 || extent % 2 == 0) {
    throw std::invalid_argument("GridParams: extent must be odd and >= 3");
  }
  if (agent_radius < 0.0) {
    throw std::invalid_argument("GridParams: agent_radius must be >= 0");
  }
}

std::pair<int, int> OccupancyGrid::cell_of(double dx, double dy) const {
  const int c = center();
  return {c + static_cast<int>(std::floor(dx / resolution + 0.5)),
          c + static_cast<int>(std::floor(dy / resolution + 0.5))};
}

OccupancyGrid build_local_map(const DepthScan& scan, double agent_heading,
                              const GridParams& params) {
  params.validate();
  OccupancyGrid grid;
  grid.resolution = params.resolution;
  grid.extent = params.extent;
  grid.cells.assign(static_cast<std::size_t>(params.extent) * params.extent,
                    CellState::Unknown);

  const double reach =
      0.5 * params.extent * params.resolution * std::sqrt(2.0);
  const double step = params.resolution / 3.0;

  // Free space first, then hits; a wall cell stays Occupied even if another
  // ray sweeps through it.
  for (std::size_t i = 0; i < scan.bearings.size(); ++i) {
    const double world = agent_heading - scan.bearings[i];
    const double cw = std::cos(world);
    const double sw = std::sin(world);
    const double free_len = scan.ranges[i]
                                ? std::min(*scan.ranges[i], reach)
                                : std::min(scan.max_range, reach);
    for (double s = 0.0; s < free_len; s += step) {
      const auto [ix, iy] = grid.cell_of(s * cw, s * sw);
      if (grid.in_grid(ix, iy)) grid.at(ix, iy) = CellState::Free;
    }
  }
  for (std::size_t i = 0; i < scan.bearings.size(); ++i) {
    if (!scan.ranges[i]) continue;
    const double world = agent_heading - scan.bearings[i];
    const auto [ix, iy] = grid.cell_of(*scan.ranges[i] * std::cos(world),
                                       *scan.ranges[i] * std::sin(world));
    if (grid.in_grid(ix, iy)) grid.at(ix, iy) = CellState::Occupied;
  }

  // Inflate by the agent radius.
  const int r_cells =
      static_cast<int>(std::floor(params.agent_radius / params.resolution));
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -r_cells; dy <= r_cells; ++dy) {
    for (int dx = -r_cells; dx <= r_cells; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const double d = std::hypot(dx * params.resolution, dy * params.resolution);
      if (d <= params.agent_radius) offsets.emplace_back(dx, dy);
    }
  }
  std::vector<std::pair<int, int>> hits;
  for (int iy = 0; iy < grid.extent; ++iy) {
    for (int ix = 0; ix < grid.extent; ++ix) {
      if (grid.at(ix, iy) == CellState::Occupied) hits.emplace_back(ix, iy);
    }
  }
  for (const auto& [hx, hy] : hits) {
    for (const auto& [dx, dy] : offsets) {
      if (grid.in_grid(hx + dx, hy + dy)) {
        grid.at(hx + dx, hy + dy) = CellState::Occupied;
      }
    }
  }

  grid.at(grid.center(), grid.center()) = CellState::Free;
  return grid;
}

namespace {

double upwind_solve(double a, double b, double h) {
  // One-sided when only one neighbor value is usable.
  if (a > b) std::swap(a, b);
  if (!std::isfinite(a)) return kInf;
  if (!std::isfinite(b) || b - a >= h) return a + h;
  const double disc = 2.0 * h * h - (a - b) * (a - b);
  return 0.5 * (a + b + std::sqrt(disc));
}

double field_value(const DistanceField& f, const OccupancyGrid& grid, int ix,
                   int iy) {
  if (!grid.is_free(ix, iy)) return kInf;
  return f.at(ix, iy);
}

}  // namespace

double eikonal_update(const DistanceField& field, const OccupancyGrid& grid,
                      int ix, int iy) {
  const double h = field.resolution;
  const double ax = std::min(field_value(field, grid, ix - 1, iy),
                             field_value(field, grid, ix + 1, iy));
  const double ay = std::min(field_value(field, grid, ix, iy - 1),
                             field_value(field, grid, ix, iy + 1));
  const double axis = upwind_solve(ax, ay, h);

  // The diagonal neighbors form a rotated grid with spacing h*sqrt(2).
  const double d1 = std::min(field_value(field, grid, ix - 1, iy - 1),
                             field_value(field, grid, ix + 1, iy + 1));
  const double d2 = std::min(field_value(field, grid, ix - 1, iy + 1),
                             field_value(field, grid, ix + 1, iy - 1));
  const double diag = upwind_solve(d1, d2, h * std::sqrt(2.0));

  return std::min(axis, diag);
}

DistanceField fast_marching(const OccupancyGrid& grid,
                            std::pair<int, int> waypoint_cell) {
  DistanceField field;
  field.resolution = grid.resolution;
  field.extent = grid.extent;
  field.values.assign(grid.cells.size(), kInf);

  const auto snapped = snap_to_free(grid, waypoint_cell);
  field.waypoint = snapped;
  if (snapped.first < 0) return field;

  struct Entry {
    double value;
    int cell;
    bool operator>(const Entry& o) const {
      if (value != o.value) return value > o.value;
      return cell > o.cell;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> narrow;
  std::vector<std::uint8_t> done(grid.cells.size(), 0);

  const int start = snapped.second * grid.extent + snapped.first;
  field.values[start] = 0.0;
  narrow.push({0.0, start});

  while (!narrow.empty()) {
    const auto [value, cell] = narrow.top();
    narrow.pop();
    if (done[cell]) continue;
    done[cell] = 1;
    const int cx = cell % grid.extent;
    const int cy = cell / grid.extent;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = cx + dx;
        const int ny = cy + dy;
        if (!grid.is_free(nx, ny)) continue;
        const int ni = ny * grid.extent + nx;
        if (done[ni]) continue;
        const double updated = eikonal_update(field, grid, nx, ny);
        if (updated < field.values[ni]) {
          field.values[ni] = updated;
          narrow.push({updated, ni});
        }
      }
    }
  }
  return field;
}

std::pair<int, int> snap_to_free(const OccupancyGrid& grid,
                                 std::pair<int, int> cell) {
  int ix = std::clamp(cell.first, 0, grid.extent - 1);
  int iy = std::clamp(cell.second, 0, grid.extent - 1);
  if (grid.is_free(ix, iy)) return {ix, iy};
  // Breadth-first ring search keeps the snap deterministic.
  for (int ring = 1; ring < grid.extent; ++ring) {
    std::pair<int, int> best{-1, -1};
    double best_d = kInf;
    for (int dy = -ring; dy <= ring; ++dy) {
      for (int dx = -ring; dx <= ring; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        if (!grid.is_free(ix + dx, iy + dy)) continue;
        const double d = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
        if (d < best_d) {
          best_d = d;
          best = {ix + dx, iy + dy};
        }
      }
    }
    if (best.first >= 0) return best;
  }
  return {-1, -1};
}

std::pair<int, int> waypoint_cell_for(const GoalEstimate& est,
                                      double agent_heading,
                                      const OccupancyGrid& grid) {
  const double world = agent_heading - est.heading;
  const double half_span = (grid.center() - 1) * grid.resolution;
  const double d = std::min(est.distance, half_span);
  const auto cell =
      grid.cell_of(d * std::cos(world), d * std::sin(world));
  return snap_to_free(grid, cell);
}

DiscreteAction select_action(const GoalEstimate& est, const OccupancyGrid& grid,
                             const DistanceField& field, double agent_heading,
                             const PolicyParams& params) {
  if (est.at_goal || est.distance < params.stop_radius) {
    return DiscreteAction::Stop;
  }

  const int c = grid.center();
  const auto front = grid.cell_of(grid.resolution * std::cos(agent_heading),
                                  grid.resolution * std::sin(agent_heading));
  const bool front_occupied =
      grid.in_grid(front.first, front.second) &&
      grid.at(front.first, front.second) == CellState::Occupied;

  if (!field.reachable(c, c)) {
    if (!front_occupied) return DiscreteAction::Forward;
    return DiscreteAction::TurnRight;
  }

  // Steepest descent over the 8 neighbors, rate normalized by step length.
  const double here = field.at(c, c);
  double best_rate = 0.0;
  int best_dx = 0, best_dy = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      if (!grid.is_free(c + dx, c + dy)) continue;
      const double v = field.at(c + dx, c + dy);
      if (!std::isfinite(v)) continue;
      const double rate = (v - here) / std::hypot(dx, dy);
      if (rate < best_rate) {
        best_rate = rate;
        best_dx = dx;
        best_dy = dy;
      }
    }
  }
  if (best_dx == 0 && best_dy == 0) {
    if (!front_occupied) return DiscreteAction::Forward;
    return DiscreteAction::TurnRight;
  }

  const double desired = std::atan2(best_dy, best_dx);
  const double err = wrap_angle(agent_heading - desired);
  if (std::abs(err) <= 0.5 * params.turn_step) {
    if (!front_occupied) return DiscreteAction::Forward;
    return err >= 0.0 ? DiscreteAction::TurnRight : DiscreteAction::TurnLeft;
  }
  return err > 0.0 ? DiscreteAction::TurnRight : DiscreteAction::TurnLeft;
}

}  // namespace lmnav
