#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "obseq/dynamics.hpp"

namespace obseq {

/// Axis-aligned half-open box [lo, hi) in 1 or 2 dimensions.
struct Box {
  std::array<double, 2> lo{};
  std::array<double, 2> hi{};
  int dim = 2;

  static Box square(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y1}, 2}; }
  static Box interval(double a, double b) { return {{a, 0.0}, {b, 0.0}, 1}; }

  bool contains(const PhasePoint& p) const noexcept;
  bool contains(const std::array<double, 2>& p) const noexcept;
  double measure() const noexcept;
  bool overlaps(const Box& other) const noexcept;

  friend bool operator==(const Box&, const Box&) = default;
};

/// A finite-valued observation function: cells alpha_i with distinct
/// representative outputs o_i, one per cell.
///
/// Construction validates that cells are disjoint, have positive measure,
/// fill [0,1)^d up to measure zero, and that every representative lies in
/// its own cell. Throws InvalidPartition otherwise. Immutable afterwards.
class Partition {
 public:
  using Point = std::array<double, 2>;

  Partition(int dim, std::vector<Box> cells, std::vector<Point> reps, std::vector<std::string> labels);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const Box& cell(std::size_t i) const { return cells_.at(i); }
  const Point& representative(std::size_t i) const { return reps_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Index of the unique cell containing p. Throws NoCell if none does.
  std::size_t observe(const PhasePoint& p) const;
  /// Same as observe() but always by linear search over the cells.
  std::size_t observe_by_scan(const PhasePoint& p) const;

  /// Lebesgue measure of cell i.
  double cell_measure(std::size_t i) const { return cells_.at(i).measure(); }

  /// Supremum over the closed cell of the distance to its representative
  /// (Euclidean; attained at a corner).
  double max_representative_distance(std::size_t i) const;

  /// Cells per axis if the cells form a row-major grid of power-of-two side,
  /// else 0. Grid partitions observe by direct index arithmetic.
  std::size_t grid_side() const noexcept { return grid_side_; }

  nlohmann::json to_json() const;
  static Partition from_json(const nlohmann::json& j);

 private:
  void detect_grid();

  int dim_;
  std::vector<Box> cells_;
  std::vector<Point> reps_;
  std::vector<std::string> labels_;
  std::size_t grid_side_ = 0;  // cells per axis when the layout is a dyadic grid
};

/// Default cap on n for dyadic_partition (2^{2n} cells).
inline constexpr int kDyadicLevelCap = 8;

/// The 2^{2n}-cell grid of side 2^-n over the unit square.
///
/// Cell (i, j) covers [i/2^n, (i+1)/2^n) x [j/2^n, (j+1)/2^n) and has index
/// i * 2^n + j, so y varies fastest. Its representative sits at offset
/// (sqrt(2)/2^{n+1}, sqrt(2)/2^{n+1}) from the lower-left corner.
/// Throws InvalidArgument for n < 1 and ResourceLimit for n > cap.
Partition dyadic_partition(int n, int cap = kDyadicLevelCap);

/// Two cells split at x = 1/2, labelled s1 and s2.
Partition left_right_partition();

/// The circle split into [0, 1/2) and [1/2, 1), labelled L and R.
Partition halves_partition();

}  // namespace obseq
