#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coex {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }

double distance(Vec2 a, Vec2 b);

// Normalize an angle to (-pi, pi].
double normalize_angle(double theta);

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // normalized to (-pi, pi]

  Vec2 position() const { return {x, y}; }
};

// 2-D rigid transform: p_out = R(rotation) * p_in + translation.
struct Transform2D {
  double rotation = 0.0;
  Vec2 translation;

  static Transform2D identity() { return {}; }
  Transform2D inverse() const;
};

Vec2 transform_point(const Transform2D& t, Vec2 p);

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

struct CellIndex {
  int row = 0;
  int col = 0;
  bool operator==(const CellIndex&) const = default;
};

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Vec2 origin,
                CellState fill = CellState::Unknown);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }

  bool in_bounds(CellIndex c) const {
    return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
  }
  CellState at(CellIndex c) const { return cells_[idx(c)]; }
  void set(CellIndex c, CellState s) { cells_[idx(c)] = s; }

  // Cell containing the world point; no bounds check.
  CellIndex world_to_cell(Vec2 p) const;
  bool contains(Vec2 p) const;
  Vec2 cell_center(CellIndex c) const;

  const std::vector<CellState>& cells() const { return cells_; }
  std::size_t known_count() const;

 private:
  std::size_t idx(CellIndex c) const {
    return static_cast<std::size_t>(c.row) * width_ + c.col;
  }

  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  Vec2 origin_;
  std::vector<CellState> cells_;
};

struct SensorParams {
  double max_range = 4.0;
  int num_rays = 180;
  double field_of_view = 6.283185307179586;
};

struct Observation {
  CellIndex cell;
  CellState state;
};

struct PoseInObstacle : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simulated lidar sweep against the ground-truth map. Rays are spread
// uniformly across the field of view centered on pose.theta; each ray walks
// grid cells outward (Amanatides-Woo traversal) and reports Free cells up to
// the first Occupied cell or max_range.
std::vector<Observation> raycast_scan(const OccupancyGrid& truth,
                                      const Pose2D& pose,
                                      const SensorParams& sp);

// Write observations into a local map. Occupied wins over Free; a cell once
// Occupied never reverts (static world, no noise).
void integrate_scan(OccupancyGrid& local,
                    const std::vector<Observation>& observations);

// Union of local maps in a common frame. Cell precedence:
// Occupied > Free > Unknown. Extent is the union bounding box.
OccupancyGrid merge_maps(const std::vector<OccupancyGrid>& maps,
                         const std::vector<Transform2D>& transforms);

// Percentage of truth's reachable known cells that `map` has discovered.
// Reachability is a flood fill over truth's Free cells from the spawn points
// plus the adjacent Occupied boundary.
double coverage_percent(const OccupancyGrid& map, const OccupancyGrid& truth,
                        const std::vector<Vec2>& spawns);

struct MapQuality {
  double rmse = 0.0;
  double ssim = 0.0;
};

// Grayscale comparison (Unknown=0.5, Free=1.0, Occupied=0.0): RMSE over all
// pixels and SSIM with the standard 11-pixel Gaussian window.
MapQuality map_quality(const OccupancyGrid& map, const OccupancyGrid& truth);

// ASCII PGM (P2) I/O. Load thresholds: <100 Occupied, >200 Free, else
// Unknown. Save values: Unknown=128, Free=255, Occupied=0. The sidecar
// metadata file carries resolution and origin.
OccupancyGrid load_pgm(const std::string& pgm_path,
                       const std::string& meta_path);
void save_pgm(const OccupancyGrid& grid, const std::string& pgm_path);
void save_pgm_meta(const OccupancyGrid& grid, const std::string& meta_path);

}  // namespace coex
