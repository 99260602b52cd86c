#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcbha/domain.hpp"

namespace gcbha {

enum class Orientation { XAxis, YAxis };

/// Regular warehouse lattice: congruent 1-cell-tall shelf rectangles of
/// length `shelf_length` along the x axis, separated by `gap_w` aisle
/// columns and `gap_h` aisle rows. For Orientation::YAxis the roles of x
/// and y are swapped. Boundary cells are always aisle cells.
struct WarehouseLayout {
  int width = 0;
  int height = 0;
  int shelf_length = 0;
  int gap_w = 1;
  int gap_h = 1;
  GridPoint origin{1, 1};
  Orientation orientation = Orientation::XAxis;

  bool in_bounds(GridPoint p) const {
    return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
  }

  bool is_shelf(GridPoint p) const {
    if (!in_bounds(p)) return false;
    auto [cx, cy] = canonical(p);
    return shelf_col_span(cx) && shelf_row(cy);
  }

  bool is_aisle(GridPoint p) const { return in_bounds(p) && !is_shelf(p); }

  std::vector<GridPoint> aisle_cells() const {
    std::vector<GridPoint> out;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        if (!is_shelf({x, y})) out.push_back({x, y});
    return out;
  }

  /// Aisle cells 4-adjacent to at least one shelf cell (pickup candidates).
  std::vector<GridPoint> shelf_adjacent_cells() const {
    std::vector<GridPoint> out;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        GridPoint p{x, y};
        if (is_shelf(p)) continue;
        const GridPoint nb[4] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
        for (const auto& q : nb)
          if (is_shelf(q)) {
            out.push_back(p);
            break;
          }
      }
    return out;
  }

  /// Aisle cells on the two side columns (delivery candidates).
  std::vector<GridPoint> side_cells() const {
    std::vector<GridPoint> out;
    for (int y = 0; y < height; ++y) {
      out.push_back({0, y});
      if (width > 1) out.push_back({width - 1, y});
    }
    return out;
  }

  bool has_shelves() const { return num_cols() > 0 && num_rows() > 0; }

  // Canonical frame: shelves always extend along the local x axis.
  std::pair<int, int> canonical(GridPoint p) const {
    if (orientation == Orientation::XAxis) return {p.x, p.y};
    return {p.y, p.x};
  }
  int canon_width() const { return orientation == Orientation::XAxis ? width : height; }
  int canon_height() const { return orientation == Orientation::XAxis ? height : width; }
  int canon_ox() const { return orientation == Orientation::XAxis ? origin.x : origin.y; }
  int canon_oy() const { return orientation == Orientation::XAxis ? origin.y : origin.x; }

  int col_period() const { return shelf_length + gap_w; }
  int row_period() const { return 1 + gap_h; }

  int num_cols() const {
    if (shelf_length <= 0 || canon_ox() < 1) return 0;
    int k = 0;
    while (canon_ox() + k * col_period() + shelf_length - 1 <= canon_width() - 2) ++k;
    return k;
  }
  int num_rows() const {
    if (shelf_length <= 0 || canon_oy() < 1) return 0;
    int j = 0;
    while (canon_oy() + j * row_period() <= canon_height() - 2) ++j;
    return j;
  }

  /// True when x (canonical) lies inside some shelf rectangle's x span.
  bool shelf_col_span(int x) const {
    int cols = num_cols();
    if (cols == 0) return false;
    int rel = x - canon_ox();
    if (rel < 0 || rel >= (cols - 1) * col_period() + shelf_length) return false;
    return rel % col_period() < shelf_length;
  }

  /// True when y (canonical) is a shelf row level.
  bool shelf_row(int y) const {
    int rows = num_rows();
    if (rows == 0) return false;
    int rel = y - canon_oy();
    if (rel < 0 || rel >= (rows - 1) * row_period() + 1) return false;
    return rel % row_period() == 0;
  }
};

inline double euclidean_cost(GridPoint a, GridPoint b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline double manhattan_cost(GridPoint a, GridPoint b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

namespace detail {

// Nearest aisle column at or left of x (canonical frame). Column 0 is
// always aisle, so this never fails for x >= 0.
inline int gap_col_left(const WarehouseLayout& l, int x) {
  while (x > 0 && l.shelf_col_span(x)) --x;
  return x;
}

inline int gap_col_right(const WarehouseLayout& l, int x) {
  const int limit = l.canon_width() - 1;
  while (x < limit && l.shelf_col_span(x)) ++x;
  return x;
}

inline bool gap_col_in_range(const WarehouseLayout& l, int lo, int hi) {
  // Shelf spans have length shelf_length; any interval longer than that
  // contains a gap column. Otherwise scan.
  if (hi - lo >= l.shelf_length) return true;
  for (int x = lo; x <= hi; ++x)
    if (!l.shelf_col_span(x)) return true;
  return false;
}

inline bool shelf_row_between(const WarehouseLayout& l, int y0, int y1) {
  if (y0 > y1) std::swap(y0, y1);
  for (int y = y0 + 1; y < y1; ++y)
    if (l.shelf_row(y)) return true;
  return false;
}

inline double warehouse_cost_canonical(const WarehouseLayout& l, int ax, int ay, int bx,
                                       int by) {
  if (ax == bx && ay == by) return 0.0;
  if (ay == by) {
    if (!l.shelf_row(ay)) return std::abs(ax - bx);
    // Both points sit in aisle columns of a shelf row. A straight run is
    // possible only if no shelf span separates them; otherwise detour one
    // row and back.
    const int lo = std::min(ax, bx), hi = std::max(ax, bx);
    bool blocked = false;
    for (int x = lo + 1; x < hi; ++x)
      if (l.shelf_col_span(x)) {
        blocked = true;
        break;
      }
    return std::abs(ax - bx) + (blocked ? 2 : 0);
  }
  // Peel endpoints out of shelf rows: one vertical step toward the other
  // point is always available (the endpoint's column is an aisle column)
  // and never suboptimal.
  if (l.shelf_row(ay)) {
    const int step = by > ay ? 1 : -1;
    return 1.0 + warehouse_cost_canonical(l, ax, ay + step, bx, by);
  }
  if (l.shelf_row(by)) {
    const int step = ay > by ? 1 : -1;
    return 1.0 + warehouse_cost_canonical(l, ax, ay, bx, by + step);
  }
  // Both in corridor rows.
  if (!shelf_row_between(l, ay, by)) return manhattan_cost({ax, ay}, {bx, by});
  const int lo = std::min(ax, bx), hi = std::max(ax, bx);
  if (gap_col_in_range(l, lo, hi)) return manhattan_cost({ax, ay}, {bx, by});
  // Same shelf column span: detour through the nearest aisle column on
  // either side, whichever combined detour is shorter.
  const int gl = gap_col_left(l, lo);
  const int gr = gap_col_right(l, hi);
  const int detour = std::min((lo - gl) + (hi - gl), (gr - lo) + (gr - hi));
  return std::abs(ay - by) + detour;
}

}  // namespace detail

/// Scenario-specific path cost on a regular warehouse lattice. Exact on
/// layouts satisfying the regularity assumptions; equals Manhattan when a
/// translatable rectangular path exists, and otherwise adds the minimum
/// detour to a shared aisle column.
inline double warehouse_cost(GridPoint a, GridPoint b, const WarehouseLayout& layout) {
  if (!layout.is_aisle(a) || !layout.is_aisle(b))
    throw std::invalid_argument("warehouse_cost: point inside a shelf or out of bounds: (" +
                                std::to_string(a.x) + "," + std::to_string(a.y) + ")-(" +
                                std::to_string(b.x) + "," + std::to_string(b.y) + ")");
  auto [ax, ay] = layout.canonical(a);
  auto [bx, by] = layout.canonical(b);
  return detail::warehouse_cost_canonical(layout, ax, ay, bx, by);
}

inline constexpr int kUnreachable = -1;

/// Single-source BFS distance field over aisle cells. dist[y*width+x],
/// kUnreachable where no path exists.
inline std::vector<int> bfs_field(GridPoint from, const WarehouseLayout& layout) {
  std::vector<int> dist(std::size_t(layout.width) * layout.height, kUnreachable);
  if (!layout.is_aisle(from)) return dist;
  auto idx = [&](GridPoint p) { return std::size_t(p.y) * layout.width + p.x; };
  std::deque<GridPoint> queue{from};
  dist[idx(from)] = 0;
  while (!queue.empty()) {
    GridPoint p = queue.front();
    queue.pop_front();
    const int d = dist[idx(p)];
    const GridPoint nb[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
    for (const auto& q : nb) {
      if (!layout.is_aisle(q)) continue;
      if (dist[idx(q)] != kUnreachable) continue;
      dist[idx(q)] = d + 1;
      queue.push_back(q);
    }
  }
  return dist;
}

/// Exact 4-connected shortest aisle path length; ground truth for the
/// estimator. Returns nullopt for unreachable pairs.
inline std::optional<int> bfs_oracle(GridPoint a, GridPoint b, const WarehouseLayout& layout) {
  if (!layout.is_aisle(a) || !layout.is_aisle(b)) return std::nullopt;
  auto field = bfs_field(a, layout);
  const int d = field[std::size_t(b.y) * layout.width + b.x];
  if (d == kUnreachable) return std::nullopt;
  return d;
}

/// Snap a fractional position to the nearest aisle cell: round to the
/// nearest cell, then expand by grid distance, ties broken by lowest (x,y).
inline GridPoint snap_to_aisle(double fx, double fy, const WarehouseLayout& layout) {
  int cx = std::clamp(int(std::llround(fx)), 0, layout.width - 1);
  int cy = std::clamp(int(std::llround(fy)), 0, layout.height - 1);
  if (layout.is_aisle({cx, cy})) return {cx, cy};
  for (int r = 1; r < layout.width + layout.height; ++r) {
    GridPoint best{-1, -1};
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        if (std::abs(dx) + std::abs(dy) != r) continue;
        GridPoint q{cx + dx, cy + dy};
        if (!layout.is_aisle(q)) continue;
        if (best.x < 0 || q < best) best = q;
      }
    if (best.x >= 0) return best;
  }
  throw std::runtime_error("snap_to_aisle: no aisle cell in layout");
}

}  // namespace gcbha
