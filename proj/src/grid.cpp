#include "coexplore/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

namespace coex {

namespace {
constexpr double kPi = 3.141592653589793;
}

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double normalize_angle(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t <= -kPi) t += 2.0 * kPi;
  if (t > kPi) t -= 2.0 * kPi;
  return t;
}

Transform2D Transform2D::inverse() const {
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  // R^T * (-t)
  return {-rotation, {-(c * translation.x + s * translation.y),
                      -(-s * translation.x + c * translation.y)}};
}

Vec2 transform_point(const Transform2D& t, Vec2 p) {
  const double c = std::cos(t.rotation);
  const double s = std::sin(t.rotation);
  return {c * p.x - s * p.y + t.translation.x,
          s * p.x + c * p.y + t.translation.y};
}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution,
                             Vec2 origin, CellState fill)
    : width_(width), height_(height), resolution_(resolution), origin_(origin),
      cells_(static_cast<std::size_t>(width) * height, fill) {
  if (width <= 0 || height <= 0 || resolution <= 0.0)
    throw std::invalid_argument("OccupancyGrid: dimensions must be positive");
}

CellIndex OccupancyGrid::world_to_cell(Vec2 p) const {
  return {static_cast<int>(std::floor((p.y - origin_.y) / resolution_)),
          static_cast<int>(std::floor((p.x - origin_.x) / resolution_))};
}

bool OccupancyGrid::contains(Vec2 p) const {
  return in_bounds(world_to_cell(p));
}

Vec2 OccupancyGrid::cell_center(CellIndex c) const {
  return {origin_.x + (c.col + 0.5) * resolution_,
          origin_.y + (c.row + 0.5) * resolution_};
}

std::size_t OccupancyGrid::known_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(),
                    [](CellState s) { return s != CellState::Unknown; }));
}

std::vector<Observation> raycast_scan(const OccupancyGrid& truth,
                                      const Pose2D& pose,
                                      const SensorParams& sp) {
  const CellIndex start = truth.world_to_cell(pose.position());
  if (!truth.in_bounds(start) || truth.at(start) != CellState::Free)
    throw PoseInObstacle("raycast_scan: pose not in a Free cell");

  std::vector<Observation> out;
  out.push_back({start, CellState::Free});

  const double res = truth.resolution();
  for (int r = 0; r < sp.num_rays; ++r) {
    double bearing = pose.theta;
    if (sp.num_rays > 1) {
      bearing += sp.field_of_view *
                 (static_cast<double>(r) / (sp.num_rays - 1) - 0.5);
    }
    const double dx = std::cos(bearing);
    const double dy = std::sin(bearing);

    // Amanatides-Woo grid traversal from the pose outward.
    CellIndex cur = start;
    const int step_col = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_row = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();
    const Vec2 org = truth.origin();
    double t_max_x = inf, t_max_y = inf, t_delta_x = inf, t_delta_y = inf;
    if (step_col != 0) {
      const double next_edge =
          org.x + (cur.col + (step_col > 0 ? 1 : 0)) * res;
      t_max_x = (next_edge - pose.x) / dx;
      t_delta_x = res / std::abs(dx);
    }
    if (step_row != 0) {
      const double next_edge =
          org.y + (cur.row + (step_row > 0 ? 1 : 0)) * res;
      t_max_y = (next_edge - pose.y) / dy;
      t_delta_y = res / std::abs(dy);
    }

    double t = 0.0;
    while (true) {
      if (t_max_x < t_max_y) {
        t = t_max_x;
        t_max_x += t_delta_x;
        cur.col += step_col;
      } else {
        t = t_max_y;
        t_max_y += t_delta_y;
        cur.row += step_row;
      }
      if (t > sp.max_range || !truth.in_bounds(cur)) break;
      if (truth.at(cur) == CellState::Occupied) {
        out.push_back({cur, CellState::Occupied});
        break;
      }
      out.push_back({cur, CellState::Free});
    }
  }
  return out;
}

void integrate_scan(OccupancyGrid& local,
                    const std::vector<Observation>& observations) {
  for (const Observation& ob : observations) {
    if (!local.in_bounds(ob.cell))
      throw std::out_of_range("integrate_scan: observation out of bounds");
    const CellState cur = local.at(ob.cell);
    if (cur == CellState::Occupied) continue;  // Occupied is sticky
    if (cur == CellState::Free && ob.state == CellState::Unknown) continue;
    if (ob.state != CellState::Unknown) local.set(ob.cell, ob.state);
  }
}

OccupancyGrid merge_maps(const std::vector<OccupancyGrid>& maps,
                         const std::vector<Transform2D>& transforms) {
  if (maps.empty()) throw std::invalid_argument("merge_maps: no maps");
  if (maps.size() != transforms.size())
    throw DimensionMismatch("merge_maps: maps/transforms size mismatch");

  const double res = maps.front().resolution();
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_y;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const OccupancyGrid& m = maps[i];
    const Vec2 corners[4] = {
        m.origin(),
        {m.origin().x + m.width() * m.resolution(), m.origin().y},
        {m.origin().x, m.origin().y + m.height() * m.resolution()},
        {m.origin().x + m.width() * m.resolution(),
         m.origin().y + m.height() * m.resolution()}};
    for (Vec2 c : corners) {
      const Vec2 w = transform_point(transforms[i], c);
      min_x = std::min(min_x, w.x);
      min_y = std::min(min_y, w.y);
      max_x = std::max(max_x, w.x);
      max_y = std::max(max_y, w.y);
    }
  }
  // Snap the merged origin to the resolution lattice so identity transforms
  // reproduce cell boundaries exactly.
  min_x = std::floor(min_x / res + 1e-9) * res;
  min_y = std::floor(min_y / res + 1e-9) * res;
  const int width = std::max(1, static_cast<int>(std::ceil((max_x - min_x) / res - 1e-9)));
  const int height = std::max(1, static_cast<int>(std::ceil((max_y - min_y) / res - 1e-9)));

  OccupancyGrid merged(width, height, res, {min_x, min_y});
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const OccupancyGrid& m = maps[i];
    for (int row = 0; row < m.height(); ++row) {
      for (int col = 0; col < m.width(); ++col) {
        const CellState s = m.at({row, col});
        if (s == CellState::Unknown) continue;
        const Vec2 w = transform_point(transforms[i], m.cell_center({row, col}));
        const CellIndex c = merged.world_to_cell(w);
        if (!merged.in_bounds(c)) continue;
        const CellState cur = merged.at(c);
        if (cur == CellState::Occupied) continue;
        if (s == CellState::Occupied || cur == CellState::Unknown)
          merged.set(c, s);
      }
    }
  }
  return merged;
}

namespace {

// Free cells reachable from the spawns (8-connected) plus the Occupied
// boundary around them.
std::vector<bool> reachable_known(const OccupancyGrid& truth,
                                  const std::vector<Vec2>& spawns) {
  const std::size_t n =
      static_cast<std::size_t>(truth.width()) * truth.height();
  std::vector<bool> free_reach(n, false);
  std::deque<CellIndex> queue;
  for (Vec2 s : spawns) {
    const CellIndex c = truth.world_to_cell(s);
    if (truth.in_bounds(c) && truth.at(c) == CellState::Free) {
      const std::size_t k = static_cast<std::size_t>(c.row) * truth.width() + c.col;
      if (!free_reach[k]) {
        free_reach[k] = true;
        queue.push_back(c);
      }
    }
  }
  while (!queue.empty()) {
    const CellIndex c = queue.front();
    queue.pop_front();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const CellIndex nb{c.row + dr, c.col + dc};
        if (!truth.in_bounds(nb) || truth.at(nb) != CellState::Free) continue;
        const std::size_t k =
            static_cast<std::size_t>(nb.row) * truth.width() + nb.col;
        if (!free_reach[k]) {
          free_reach[k] = true;
          queue.push_back(nb);
        }
      }
    }
  }
  std::vector<bool> known(n, false);
  for (int row = 0; row < truth.height(); ++row) {
    for (int col = 0; col < truth.width(); ++col) {
      const std::size_t k = static_cast<std::size_t>(row) * truth.width() + col;
      if (free_reach[k]) {
        known[k] = true;
        continue;
      }
      if (truth.at({row, col}) != CellState::Occupied) continue;
      // Only faces shared with a reachable Free cell are observable: a ray
      // cannot enter a wall cell through a corner-only contact.
      constexpr int kOrtho[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
      for (const auto& d : kOrtho) {
        const CellIndex nb{row + d[0], col + d[1]};
        if (!truth.in_bounds(nb)) continue;
        const std::size_t kn =
            static_cast<std::size_t>(nb.row) * truth.width() + nb.col;
        if (free_reach[kn] && truth.at(nb) == CellState::Free) {
          known[k] = true;
          break;
        }
      }
    }
  }
  return known;
}

}  // namespace

double coverage_percent(const OccupancyGrid& map, const OccupancyGrid& truth,
                        const std::vector<Vec2>& spawns) {
  if (map.width() != truth.width() || map.height() != truth.height())
    throw DimensionMismatch("coverage_percent: grid size mismatch");
  const std::vector<bool> known = reachable_known(truth, spawns);
  std::size_t denom = 0, num = 0;
  for (int row = 0; row < truth.height(); ++row) {
    for (int col = 0; col < truth.width(); ++col) {
      const std::size_t k = static_cast<std::size_t>(row) * truth.width() + col;
      if (!known[k]) continue;
      ++denom;
      if (map.at({row, col}) != CellState::Unknown) ++num;
    }
  }
  if (denom == 0) return 0.0;
  return 100.0 * static_cast<double>(num) / static_cast<double>(denom);
}

namespace {

double intensity(CellState s) {
  switch (s) {
    case CellState::Free: return 1.0;
    case CellState::Occupied: return 0.0;
    default: return 0.5;
  }
}

std::vector<double> render(const OccupancyGrid& g) {
  std::vector<double> img;
  img.reserve(g.cells().size());
  for (CellState s : g.cells()) img.push_back(intensity(s));
  return img;
}

}  // namespace

MapQuality map_quality(const OccupancyGrid& map, const OccupancyGrid& truth) {
  if (map.width() != truth.width() || map.height() != truth.height())
    throw DimensionMismatch("map_quality: grid size mismatch");
  const int w = map.width(), h = map.height();
  const std::vector<double> a = render(map);
  const std::vector<double> b = render(truth);

  double se = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    se += d * d;
  }
  MapQuality q;
  q.rmse = std::sqrt(se / static_cast<double>(a.size()));

  const double c1 = 0.01 * 0.01;  // (K1 L)^2, L = 1
  const double c2 = 0.03 * 0.03;

  if (w < 11 || h < 11) {
    // Image smaller than the standard window: single uniform window.
    double mu_a = 0, mu_b = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      mu_a += a[i];
      mu_b += b[i];
    }
    mu_a /= a.size();
    mu_b /= b.size();
    double va = 0, vb = 0, cov = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      va += (a[i] - mu_a) * (a[i] - mu_a);
      vb += (b[i] - mu_b) * (b[i] - mu_b);
      cov += (a[i] - mu_a) * (b[i] - mu_b);
    }
    va /= a.size();
    vb /= b.size();
    cov /= a.size();
    q.ssim = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
             ((mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2));
    return q;
  }

  // 11x11 Gaussian window, sigma 1.5, evaluated where it fits entirely.
  double kernel[11][11];
  double ksum = 0.0;
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) {
      const double dr = i - 5, dc = j - 5;
      kernel[i][j] = std::exp(-(dr * dr + dc * dc) / (2.0 * 1.5 * 1.5));
      ksum += kernel[i][j];
    }
  }
  for (auto& row : kernel)
    for (double& v : row) v /= ksum;

  double total = 0.0;
  std::size_t count = 0;
  for (int row = 0; row + 11 <= h; ++row) {
    for (int col = 0; col + 11 <= w; ++col) {
      double mu_a = 0, mu_b = 0, saa = 0, sbb = 0, sab = 0;
      for (int i = 0; i < 11; ++i) {
        for (int j = 0; j < 11; ++j) {
          const double wij = kernel[i][j];
          const double av = a[static_cast<std::size_t>(row + i) * w + col + j];
          const double bv = b[static_cast<std::size_t>(row + i) * w + col + j];
          mu_a += wij * av;
          mu_b += wij * bv;
          saa += wij * av * av;
          sbb += wij * bv * bv;
          sab += wij * av * bv;
        }
      }
      const double va = saa - mu_a * mu_a;
      const double vb = sbb - mu_b * mu_b;
      const double cov = sab - mu_a * mu_b;
      total += ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
               ((mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2));
      ++count;
    }
  }
  q.ssim = total / static_cast<double>(count);
  return q;
}

OccupancyGrid load_pgm(const std::string& pgm_path,
                       const std::string& meta_path) {
  std::ifstream meta(meta_path);
  if (!meta) throw std::runtime_error("cannot open map metadata: " + meta_path);
  double resolution = 1.0;
  Vec2 origin;
  std::string key;
  while (meta >> key) {
    if (key == "resolution") meta >> resolution;
    else if (key == "origin_x") meta >> origin.x;
    else if (key == "origin_y") meta >> origin.y;
    else {
      std::string skip;
      meta >> skip;
    }
  }

  std::ifstream in(pgm_path);
  if (!in) throw std::runtime_error("cannot open map: " + pgm_path);
  auto next_token = [&in]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      return tok;
    }
    throw std::runtime_error("truncated PGM file");
  };
  if (next_token() != "P2") throw std::runtime_error("expected ASCII PGM (P2)");
  const int width = std::stoi(next_token());
  const int height = std::stoi(next_token());
  (void)next_token();  // maxval

  OccupancyGrid grid(width, height, resolution, origin);
  // PGM rows run top-to-bottom; grid rows run bottom-to-top (y up).
  for (int prow = 0; prow < height; ++prow) {
    for (int col = 0; col < width; ++col) {
      const int v = std::stoi(next_token());
      CellState s = CellState::Unknown;
      if (v < 100) s = CellState::Occupied;
      else if (v > 200) s = CellState::Free;
      grid.set({height - 1 - prow, col}, s);
    }
  }
  return grid;
}

void save_pgm(const OccupancyGrid& grid, const std::string& pgm_path) {
  std::ofstream out(pgm_path);
  if (!out) throw std::runtime_error("cannot write map: " + pgm_path);
  out << "P2\n" << grid.width() << " " << grid.height() << "\n255\n";
  for (int prow = 0; prow < grid.height(); ++prow) {
    for (int col = 0; col < grid.width(); ++col) {
      const CellState s = grid.at({grid.height() - 1 - prow, col});
      const int v = s == CellState::Free ? 255
                    : s == CellState::Occupied ? 0
                                               : 128;
      out << v << (col + 1 == grid.width() ? '\n' : ' ');
    }
  }
}

void save_pgm_meta(const OccupancyGrid& grid, const std::string& meta_path) {
  std::ofstream out(meta_path);
  if (!out) throw std::runtime_error("cannot write metadata: " + meta_path);
  out << "resolution " << grid.resolution() << "\n"
      << "origin_x " << grid.origin().x << "\n"
      << "origin_y " << grid.origin().y << "\n";
}

}  // namespace coex
