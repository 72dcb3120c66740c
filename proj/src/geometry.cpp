#include "fraccap/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fraccap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

Box Box::cube(int n, double half_extent) {
  Box b;
  b.n = n;
  for (int a = 0; a < n; ++a) {
    b.lo[a] = -half_extent;
    b.hi[a] = half_extent;
  }
  b.validate();
  return b;
}

double Box::volume() const {
  double v = 1.0;
  for (int a = 0; a < n; ++a) v *= side(a);
  return v;
}

double Box::diameter() const {
  double d2 = 0.0;
  for (int a = 0; a < n; ++a) d2 += side(a) * side(a);
  return std::sqrt(d2);
}

std::array<double, 3> Box::center() const {
  std::array<double, 3> c{};
  for (int a = 0; a < n; ++a) c[a] = 0.5 * (lo[a] + hi[a]);
  return c;
}

bool Box::is_cube(double rel_tol) const {
  double s0 = side(0);
  for (int a = 1; a < n; ++a) {
    if (std::abs(side(a) - s0) > rel_tol * std::abs(s0)) return false;
  }
  return true;
}

bool Box::contains(const std::array<double, 3>& x) const {
  for (int a = 0; a < n; ++a) {
    if (x[a] < lo[a] || x[a] >= hi[a]) return false;
  }
  return true;
}

void Box::validate() const {
  if (n < 1 || n > 3) throw std::invalid_argument("box dimension must be 1..3");
  for (int a = 0; a < n; ++a) {
    if (!(hi[a] > lo[a])) throw std::invalid_argument("degenerate box");
  }
}

bool same_box(const Box& a, const Box& b) {
  if (a.n != b.n) return false;
  for (int i = 0; i < a.n; ++i) {
    if (a.lo[i] != b.lo[i] || a.hi[i] != b.hi[i]) return false;
  }
  return true;
}

struct Region::Node {
  Kind kind;
  double radius = 0.0;
  std::array<double, 3> center{};
  double alpha = 0.0;
  double beta = 0.0;
  std::array<double, 2> apex{};
  std::vector<std::shared_ptr<const Node>> args;

  bool contains(const std::array<double, 3>& x, int n) const {
    switch (kind) {
      case Kind::Halfspace:
        return x[n - 1] > 0.0;
      case Kind::Ball: {
        double d2 = 0.0;
        for (int a = 0; a < n; ++a) {
          double d = x[a] - center[a];
          d2 += d * d;
        }
        return d2 < radius * radius;
      }
      case Kind::Sector: {
        if (n != 2) throw std::invalid_argument("sector regions are planar");
        if (beta <= alpha) return false;
        if (beta - alpha >= kTwoPi) return true;
        double phi = std::atan2(x[1] - apex[1], x[0] - apex[0]);
        double rel = std::fmod(phi - alpha, kTwoPi);
        if (rel < 0.0) rel += kTwoPi;
        return rel < beta - alpha;
      }
      case Kind::Complement:
        return !args[0]->contains(x, n);
      case Kind::Intersect:
        return args[0]->contains(x, n) && args[1]->contains(x, n);
      case Kind::Union:
        return args[0]->contains(x, n) || args[1]->contains(x, n);
    }
    return false;
  }

  std::optional<double> bounded_radius() const {
    switch (kind) {
      case Kind::Ball: {
        double c = 0.0;
        for (double v : center) c += v * v;
        return std::sqrt(c) + radius;
      }
      case Kind::Intersect: {
        std::optional<double> best;
        for (const auto& a : args) {
          auto r = a->bounded_radius();
          if (r && (!best || *r < *best)) best = r;
        }
        return best;
      }
      case Kind::Union: {
        double worst = 0.0;
        for (const auto& a : args) {
          auto r = a->bounded_radius();
          if (!r) return std::nullopt;
          worst = std::max(worst, *r);
        }
        return worst;
      }
      default:
        return std::nullopt;
    }
  }
};

Region::Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Region Region::halfspace() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Halfspace;
  return Region(n);
}

Region Region::ball(double radius, std::array<double, 3> center) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ball;
  n->radius = radius;
  n->center = center;
  return Region(n);
}

Region Region::sector(double alpha, double beta, std::array<double, 2> apex) {
  if (beta < alpha) throw std::invalid_argument("sector needs beta >= alpha");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sector;
  n->alpha = alpha;
  n->beta = beta;
  n->apex = apex;
  return Region(n);
}

Region Region::complement(Region a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Complement;
  n->args.push_back(a.node_);
  return Region(n);
}

Region Region::intersect(Region a, Region b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Intersect;
  n->args.push_back(a.node_);
  n->args.push_back(b.node_);
  return Region(n);
}

Region Region::unite(Region a, Region b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Union;
  n->args.push_back(a.node_);
  n->args.push_back(b.node_);
  return Region(n);
}

bool Region::contains(const std::array<double, 3>& x, int n) const {
  return node_->contains(x, n);
}

std::optional<double> Region::bounded_radius() const {
  return node_->bounded_radius();
}

Region::Kind Region::kind() const { return node_->kind; }
double Region::ball_radius() const { return node_->radius; }
std::array<double, 3> Region::ball_center() const { return node_->center; }
double Region::sector_alpha() const { return node_->alpha; }
double Region::sector_beta() const { return node_->beta; }
std::array<double, 2> Region::sector_apex() const { return node_->apex; }

const Region& Region::arg(int i) const {
  if (args_cache_.empty()) {
    for (const auto& a : node_->args) args_cache_.push_back(Region(a));
  }
  return args_cache_.at(static_cast<std::size_t>(i));
}

int Region::arg_count() const { return static_cast<int>(node_->args.size()); }

GridSet::GridSet(const Box& window, int resolution) : window_(window), res_(resolution) {
  window_.validate();
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  if (!window_.is_cube()) throw std::invalid_argument("grid window must be a cube");
  cells_ = checked_pow(resolution, window_.n);
  h_ = window_.side(0) / resolution;
  words_.assign(static_cast<std::size_t>((cells_ + 63) / 64), 0);
}

GridSet GridSet::rasterize(const Region& region, const Box& window, int resolution) {
  GridSet out(window, resolution);
  for (std::int64_t flat = 0; flat < out.cells_; ++flat) {
    if (region.contains(out.cell_center(flat), window.n)) out.set(flat, true);
  }
  return out;
}

bool GridSet::occupied(std::int64_t flat) const {
  return (words_[static_cast<std::size_t>(flat >> 6)] >> (flat & 63)) & 1u;
}

void GridSet::set(std::int64_t flat, bool value) {
  std::uint64_t mask = std::uint64_t{1} << (flat & 63);
  auto& w = words_[static_cast<std::size_t>(flat >> 6)];
  if (value) {
    w |= mask;
  } else {
    w &= ~mask;
  }
}

std::int64_t GridSet::occupied_count() const {
  std::int64_t c = 0;
  for (std::uint64_t w : words_) c += std::popcount(w);
  return c;
}

double GridSet::measure() const {
  return static_cast<double>(occupied_count()) * std::pow(h_, window_.n);
}

std::array<std::int64_t, 3> GridSet::cell_coords(std::int64_t flat) const {
  std::array<std::int64_t, 3> c{};
  for (int a = window_.n - 1; a >= 0; --a) {
    c[a] = flat % res_;
    flat /= res_;
  }
  return c;
}

std::int64_t GridSet::flat_index(const std::array<std::int64_t, 3>& coords) const {
  std::int64_t flat = 0;
  for (int a = 0; a < window_.n; ++a) flat = flat * res_ + coords[a];
  return flat;
}

std::array<double, 3> GridSet::cell_center(std::int64_t flat) const {
  auto c = cell_coords(flat);
  std::array<double, 3> x{};
  for (int a = 0; a < window_.n; ++a) {
    x[a] = window_.lo[a] + (static_cast<double>(c[a]) + 0.5) * h_;
  }
  return x;
}

Box GridSet::cell_box(std::int64_t flat) const {
  auto c = cell_coords(flat);
  Box b;
  b.n = window_.n;
  for (int a = 0; a < window_.n; ++a) {
    b.lo[a] = window_.lo[a] + static_cast<double>(c[a]) * h_;
    b.hi[a] = window_.lo[a] + static_cast<double>(c[a] + 1) * h_;
  }
  return b;
}

std::vector<std::int64_t> GridSet::occupied_cells() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(occupied_count()));
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    std::uint64_t w = words_[wi];
    while (w) {
      int bit = std::countr_zero(w);
      out.push_back(static_cast<std::int64_t>(wi * 64 + static_cast<std::size_t>(bit)));
      w &= w - 1;
    }
  }
  return out;
}

bool GridSet::contains_point(const std::array<double, 3>& x) const {
  std::array<std::int64_t, 3> c{};
  for (int a = 0; a < window_.n; ++a) {
    double rel = (x[a] - window_.lo[a]) / h_;
    if (rel < 0.0 || rel >= static_cast<double>(res_)) return false;
    c[a] = static_cast<std::int64_t>(rel);
    if (c[a] >= res_) return false;
  }
  return occupied(flat_index(c));
}

bool GridSet::same_grid(const GridSet& other) const {
  return res_ == other.res_ && same_box(window_, other.window_);
}

bool GridSet::subset_of(const GridSet& other) const {
  if (!same_grid(other)) throw std::invalid_argument("grids differ");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

bool GridSet::subset_of_upper_halfspace() const {
  int axis = window_.n - 1;
  for (std::int64_t flat : occupied_cells()) {
    if (cell_center(flat)[axis] <= 0.0) return false;
  }
  return true;
}

bool operator==(const GridSet& a, const GridSet& b) {
  return a.same_grid(b) && a.words_ == b.words_;
}

GridSet boolean_op(const GridSet& a, const GridSet& b, BoolOp op) {
  if (!a.same_grid(b)) throw std::invalid_argument("grids differ");
  GridSet out(a.window(), a.resolution());
  auto& ow = out.mutable_words();
  const auto& aw = a.words();
  const auto& bw = b.words();
  for (std::size_t i = 0; i < aw.size(); ++i) {
    switch (op) {
      case BoolOp::Intersect: ow[i] = aw[i] & bw[i]; break;
      case BoolOp::Union: ow[i] = aw[i] | bw[i]; break;
      case BoolOp::Difference: ow[i] = aw[i] & ~bw[i]; break;
      case BoolOp::SymmetricDifference: ow[i] = aw[i] ^ bw[i]; break;
    }
  }
  return out;
}

GridSet complement_within(const GridSet& a, const GridSet& universe) {
  return boolean_op(universe, a, BoolOp::Difference);
}

GridSet rescale(const GridSet& set, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("rescale factor must be > 0");
  Box w = set.window();
  for (int a = 0; a < w.n; ++a) {
    w.lo[a] /= r;
    w.hi[a] /= r;
  }
  GridSet out(w, set.resolution());
  out.mutable_words() = set.words();
  return out;
}

GridSet resample(const GridSet& src, const Box& window, int resolution) {
  GridSet out(window, resolution);
  for (std::int64_t flat = 0; flat < out.cell_count(); ++flat) {
    if (src.contains_point(out.cell_center(flat))) out.set(flat, true);
  }
  return out;
}

}  // namespace fraccap
