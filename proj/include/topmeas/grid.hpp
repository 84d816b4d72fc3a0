#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace topmeas {

struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Square grid over [0,1]^2 with n cells per side, n >= 2.
/// Cell (row, col) is the closed square [col/n,(col+1)/n] x [row/n,(row+1)/n];
/// indices are row-major (cell = row*n + col). All distinguished points live
/// at cell centers ((col+0.5)/n, (row+0.5)/n), never on cell edges.
struct GridSpace {
  int n = 0;

  GridSpace() = default;
  explicit GridSpace(int cells_per_side) : n(cells_per_side) {
    if (n < 2) throw ContractViolation("GridSpace: n must be >= 2");
  }

  double cell_width() const { return 1.0 / static_cast<double>(n); }
  double cell_area() const { return cell_width() * cell_width(); }
  int cell_count() const { return n * n; }
  int row_of(int cell) const { return cell / n; }
  int col_of(int cell) const { return cell % n; }
  int cell_at(int row, int col) const { return row * n + col; }
  bool in_bounds(int row, int col) const {
    return row >= 0 && row < n && col >= 0 && col < n;
  }
  std::pair<double, double> center(int cell) const {
    return {(col_of(cell) + 0.5) / n, (row_of(cell) + 0.5) / n};
  }
  /// Euclidean distance between cell centers.
  double center_distance(int a, int b) const {
    const double dr = static_cast<double>(row_of(a) - row_of(b));
    const double dc = static_cast<double>(col_of(a) - col_of(b));
    return std::sqrt(dr * dr + dc * dc) / static_cast<double>(n);
  }
  bool operator==(const GridSpace&) const = default;
};

/// Fixed-capacity bitset over grid cells.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(int bit_count)
      : nbits_(bit_count), w_((bit_count + 63) / 64, 0) {}

  static CellSet from_indices(int bit_count, const std::vector<int>& idx) {
    CellSet s(bit_count);
    for (int i : idx) s.set(i);
    return s;
  }
  static CellSet full(int bit_count) {
    CellSet s(bit_count);
    for (auto& w : s.w_) w = ~uint64_t{0};
    s.trim();
    return s;
  }

  int bit_count() const { return nbits_; }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { w_[i >> 6] |= uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }

  int count() const {
    int c = 0;
    for (uint64_t w : w_) c += __builtin_popcountll(w);
    return c;
  }
  bool any() const {
    for (uint64_t w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  CellSet& operator|=(const CellSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  CellSet& operator&=(const CellSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  friend CellSet operator|(CellSet a, const CellSet& b) { return a |= b; }
  friend CellSet operator&(CellSet a, const CellSet& b) { return a &= b; }

  /// Set difference: cells in *this and not in o.
  CellSet minus(const CellSet& o) const {
    CellSet r(*this);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] &= ~o.w_[i];
    return r;
  }
  CellSet complement() const {
    CellSet r(nbits_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
    r.trim();
    return r;
  }

  bool is_subset_of(const CellSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const CellSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool operator==(const CellSet&) const = default;

  std::vector<int> to_indices() const {
    std::vector<int> out;
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (size_t k = 0; k < w_.size(); ++k) {
      uint64_t w = w_[k];
      while (w) {
        int b = __builtin_ctzll(w);
        f(static_cast<int>(k * 64 + b));
        w &= w - 1;
      }
    }
  }

  int lowest() const {  // -1 if empty
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return static_cast<int>(k * 64 + __builtin_ctzll(w_[k]));
    return -1;
  }

  uint64_t fnv_hash() const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t w : w_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return h;
  }

  /// Low 64 bits as a mask; only meaningful when bit_count() <= 64.
  uint64_t low_word() const { return w_.empty() ? 0 : w_[0]; }
  static CellSet from_low_word(int bit_count, uint64_t mask) {
    CellSet s(bit_count);
    s.w_[0] = mask;
    s.trim();
    return s;
  }

 private:
  void trim() {
    const int rem = nbits_ & 63;
    if (rem && !w_.empty()) w_.back() &= (uint64_t{1} << rem) - 1;
  }
  int nbits_ = 0;
  std::vector<uint64_t> w_;
};

/// OPEN regions denote the topological interior of the union of their closed
/// cells; COMPACT regions denote the closed union itself. The empty cell set
/// is valid for both kinds and denotes the empty set.
enum class Kind { Open, Compact };

inline const char* kind_name(Kind k) {
  return k == Kind::Open ? "open" : "compact";
}

struct Region {
  GridSpace grid;
  Kind kind = Kind::Compact;
  CellSet cells;

  Region() = default;
  Region(GridSpace g, Kind k, CellSet c)
      : grid(g), kind(k), cells(std::move(c)) {}

  static Region open(GridSpace g, CellSet c) {
    return Region(g, Kind::Open, std::move(c));
  }
  static Region compact(GridSpace g, CellSet c) {
    return Region(g, Kind::Compact, std::move(c));
  }
  static Region empty(GridSpace g, Kind k) {
    return Region(g, k, CellSet(g.cell_count()));
  }
  static Region whole(GridSpace g, Kind k) {
    return Region(g, k, CellSet::full(g.cell_count()));
  }

  bool is_open() const { return kind == Kind::Open; }
  bool is_compact() const { return kind == Kind::Compact; }
  bool is_empty() const { return cells.none(); }
  int cell_count() const { return cells.count(); }
  double area() const { return cells.count() * grid.cell_area(); }
  bool operator==(const Region&) const = default;
};

/// A distinguished point, pinned to a cell center.
struct PointRef {
  int cell = 0;
  bool operator==(const PointRef&) const = default;
};

// --- cell-set topology -------------------------------------------------

/// Cells of s plus all their 8-neighbors (clipped at the grid edge).
CellSet closure8(const GridSpace& g, const CellSet& s);
/// Cells whose full clipped 8-neighborhood lies inside s.
CellSet erode8(const GridSpace& g, const CellSet& s);
/// Connected components of s under 4- or 8-adjacency, ordered by smallest
/// cell index.
std::vector<CellSet> connected_components(const GridSpace& g, const CellSet& s,
                                          bool eight);
/// Squared center distance (in cell units) from every cell to the nearest
/// cell of src; empty src gives a huge sentinel everywhere.
std::vector<double> squared_cell_distances(const GridSpace& g,
                                           const CellSet& src);

// --- region operations --------------------------------------------------

Region interior(const Region& r);
Region closure(const Region& r);
/// Exact continuum complement: opposite kind on the complementary cell set.
Region complement(const Region& r);

/// Components under the kind's adjacency (8 for COMPACT, 4 for OPEN),
/// deterministic order by smallest cell index.
std::vector<Region> components(const Region& r);

bool contains_point(const Region& r, PointRef p);

/// True iff the closed union of inner's cells lies inside the open interior
/// denoted by outer: every cell of inner keeps its full clipped
/// 8-neighborhood inside outer's cell set.
bool contains_region(const Region& outer, const Region& inner);

/// Containment with the kind-correct continuum semantics.
bool region_subset(const Region& inner, const Region& outer);

/// Disjointness of the denoted continuum sets. Two compact regions touch
/// whenever their cell sets are 8-adjacent; every other kind pair is disjoint
/// iff the cell sets are disjoint.
bool continuum_disjoint(const Region& a, const Region& b);

bool is_solid(const Region& r);

/// Open region of all cells whose center lies at distance < t from some cell
/// center of r. dilate(empty, t) = empty.
Region dilate(const Region& r, double t);

struct SandwichResult {
  Region v;  // open
  Region c;  // compact, c = closure(v)
  bool degenerate = false;
};

/// Interpolating pair K <= V <= C <= U for a compact K inside an open U.
SandwichResult sandwich(const Region& k, const Region& u);

}  // namespace topmeas
