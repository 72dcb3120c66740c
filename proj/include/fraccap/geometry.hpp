#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fraccap {

// Axis-aligned box in dimension n <= 3. Unused trailing coordinates stay zero.
struct Box {
  int n = 2;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};

  static Box cube(int n, double half_extent);

  double side(int axis) const { return hi[axis] - lo[axis]; }
  double volume() const;
  double diameter() const;
  std::array<double, 3> center() const;
  bool is_cube(double rel_tol = 1e-9) const;
  bool contains(const std::array<double, 3>& x) const;
  void validate() const;
};

bool same_box(const Box& a, const Box& b);

// Analytic set built from half-space {x_n > 0}, balls, planar angular
// sectors, and boolean combinations. Membership is exact and deterministic.
class Region {
 public:
  enum class Kind { Halfspace, Ball, Sector, Complement, Intersect, Union };

  static Region halfspace();
  static Region ball(double radius, std::array<double, 3> center = {});
  // Planar sector with apex at `apex`, polar angles in the half-open
  // interval [alpha, beta) measured counterclockwise from the +x axis.
  // alpha == beta is the empty set. Valid in n = 2 only.
  static Region sector(double alpha, double beta,
                       std::array<double, 2> apex = {});
  static Region complement(Region a);
  static Region intersect(Region a, Region b);
  static Region unite(Region a, Region b);

  bool contains(const std::array<double, 3>& x, int n) const;

  // Radius of a ball around the origin provably containing the region,
  // when one can be derived from the shape tree.
  std::optional<double> bounded_radius() const;

  Kind kind() const;
  double ball_radius() const;
  std::array<double, 3> ball_center() const;
  double sector_alpha() const;
  double sector_beta() const;
  std::array<double, 2> sector_apex() const;
  const Region& arg(int i) const;
  int arg_count() const;

 private:
  struct Node;
  explicit Region(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
  mutable std::vector<Region> args_cache_;
};

enum class BoolOp { Intersect, Union, Difference, SymmetricDifference };

// Bitmap of occupied cells on a uniform grid over a cubic window.
// Cells are indexed in C order: axis 0 varies slowest. Cell (i_0,..,i_{n-1})
// along axis a spans [lo_a + i_a h, lo_a + (i_a+1) h], h = cell_size.
class GridSet {
 public:
  GridSet(const Box& window, int resolution);

  static GridSet rasterize(const Region& region, const Box& window,
                           int resolution);

  int dim() const { return window_.n; }
  int resolution() const { return res_; }
  const Box& window() const { return window_; }
  double cell_size() const { return h_; }
  std::int64_t cell_count() const { return cells_; }

  bool occupied(std::int64_t flat) const;
  void set(std::int64_t flat, bool value);
  std::int64_t occupied_count() const;
  double measure() const;
  bool empty() const { return occupied_count() == 0; }

  std::array<std::int64_t, 3> cell_coords(std::int64_t flat) const;
  std::int64_t flat_index(const std::array<std::int64_t, 3>& coords) const;
  std::array<double, 3> cell_center(std::int64_t flat) const;
  Box cell_box(std::int64_t flat) const;
  std::vector<std::int64_t> occupied_cells() const;

  // True iff x lands in an occupied cell; false outside the window.
  bool contains_point(const std::array<double, 3>& x) const;

  bool same_grid(const GridSet& other) const;
  bool subset_of(const GridSet& other) const;
  // No occupied cell center with x_n <= 0.
  bool subset_of_upper_halfspace() const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& mutable_words() { return words_; }

  friend bool operator==(const GridSet& a, const GridSet& b);

 private:
  Box window_;
  int res_ = 0;
  std::int64_t cells_ = 0;
  double h_ = 0.0;
  std::vector<std::uint64_t> words_;
};

GridSet boolean_op(const GridSet& a, const GridSet& b, BoolOp op);
GridSet complement_within(const GridSet& a, const GridSet& universe);

// E_r = E / r: same bits relabeled onto the window scaled by 1/r.
GridSet rescale(const GridSet& set, double r);

// Point-lookup resampling of `src` onto a new grid (center test).
GridSet resample(const GridSet& src, const Box& window, int resolution);

}  // namespace fraccap
