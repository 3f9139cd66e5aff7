#include "obseq/partitions.hpp"

#include <cmath>
#include <set>

#include "obseq/error.hpp"

namespace obseq {

bool Box::contains(const std::array<double, 2>& p) const noexcept {
  for (int i = 0; i < dim; ++i) {
    if (!(p[i] >= lo[i] && p[i] < hi[i])) return false;
  }
  return true;
}

bool Box::contains(const PhasePoint& p) const noexcept { return p.dim == dim && contains(p.coords); }

double Box::measure() const noexcept {
  double m = 1.0;
  for (int i = 0; i < dim; ++i) m *= hi[i] - lo[i];
  return m;
}

bool Box::overlaps(const Box& other) const noexcept {
  for (int i = 0; i < dim; ++i) {
    if (hi[i] <= other.lo[i] || other.hi[i] <= lo[i]) return false;
  }
  return true;
}

Partition::Partition(int dim, std::vector<Box> cells, std::vector<Point> reps, std::vector<std::string> labels)
    : dim_(dim), cells_(std::move(cells)), reps_(std::move(reps)), labels_(std::move(labels)) {
  if (dim_ != 1 && dim_ != 2) throw InvalidPartition("dimension must be 1 or 2");
  if (cells_.empty()) throw InvalidPartition("partition has no cells");
  if (reps_.size() != cells_.size()) throw InvalidPartition("one representative per cell required");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < cells_.size(); ++i) labels_.push_back("s" + std::to_string(i + 1));
  }
  if (labels_.size() != cells_.size()) throw InvalidPartition("one label per cell required");

  double total = 0.0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Box& b = cells_[i];
    if (b.dim != dim_) throw InvalidPartition("cell dimension mismatch");
    for (int k = 0; k < dim_; ++k) {
      if (!(b.lo[k] >= 0.0 && b.hi[k] <= 1.0 && b.lo[k] < b.hi[k])) {
        throw InvalidPartition("cell " + std::to_string(i) + " is empty or leaves the unit cube");
      }
    }
    if (!b.contains(reps_[i])) {
      throw InvalidPartition("representative " + std::to_string(i) + " lies outside its cell");
    }
    total += b.measure();
  }
  if (std::fabs(total - 1.0) > 1e-12) throw InvalidPartition("cells do not have total measure 1");

  std::set<Point> distinct(reps_.begin(), reps_.end());
  if (distinct.size() != reps_.size()) throw InvalidPartition("representatives must be pairwise distinct");

  detect_grid();
  if (grid_side_ == 0) {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      for (std::size_t j = i + 1; j < cells_.size(); ++j) {
        if (cells_[i].overlaps(cells_[j])) {
          throw InvalidPartition("cells " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
        }
      }
    }
  }
}

void Partition::detect_grid() {
  // Side k must be a power of two so that floor(x * k) is exact.
  std::size_t k = 1;
  if (dim_ == 2) {
    while (k * k < cells_.size()) k *= 2;
    if (k * k != cells_.size()) return;
  } else {
    k = cells_.size();
    if ((k & (k - 1)) != 0) return;
  }
  const double side = 1.0 / static_cast<double>(k);
  for (std::size_t idx = 0; idx < cells_.size(); ++idx) {
    const std::size_t i = dim_ == 2 ? idx / k : idx;
    const std::size_t j = dim_ == 2 ? idx % k : 0;
    const Box expected = dim_ == 2 ? Box::square(i * side, j * side, (i + 1) * side, (j + 1) * side)
                                   : Box::interval(i * side, (i + 1) * side);
    if (!(cells_[idx] == expected)) return;
  }
  grid_side_ = k;
}

std::size_t Partition::observe(const PhasePoint& p) const {
  if (grid_side_ == 0 || p.dim != dim_ || !p.in_unit_cube()) return observe_by_scan(p);
  const auto k = static_cast<double>(grid_side_);
  const auto i = static_cast<std::size_t>(p.x() * k);
  if (dim_ == 1) return i;
  return i * grid_side_ + static_cast<std::size_t>(p.y() * k);
}

std::size_t Partition::observe_by_scan(const PhasePoint& p) const {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].contains(p)) return i;
  }
  throw NoCell("point lies outside every cell");
}

double Partition::max_representative_distance(std::size_t i) const {
  const Box& b = cells_.at(i);
  const Point& o = reps_.at(i);
  if (dim_ == 1) return std::max(o[0] - b.lo[0], b.hi[0] - o[0]);
  double best = 0.0;
  for (double cx : {b.lo[0], b.hi[0]}) {
    for (double cy : {b.lo[1], b.hi[1]}) best = std::max(best, std::hypot(cx - o[0], cy - o[1]));
  }
  return best;
}

nlohmann::json Partition::to_json() const {
  nlohmann::json cells = nlohmann::json::array();
  nlohmann::json reps = nlohmann::json::array();
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Box& b = cells_[i];
    nlohmann::json lo = nlohmann::json::array();
    nlohmann::json hi = nlohmann::json::array();
    nlohmann::json rep = nlohmann::json::array();
    for (int k = 0; k < dim_; ++k) {
      lo.push_back(b.lo[k]);
      hi.push_back(b.hi[k]);
      rep.push_back(reps_[i][k]);
    }
    cells.push_back({{"lo", lo}, {"hi", hi}});
    reps.push_back(rep);
  }
  return {{"cells", cells}, {"reps", reps}, {"labels", labels_}};
}

Partition Partition::from_json(const nlohmann::json& j) {
  try {
    const auto& cells_j = j.at("cells");
    if (!cells_j.is_array() || cells_j.empty()) throw ParseError("'cells' must be a nonempty array");
    const int dim = static_cast<int>(cells_j.at(0).at("lo").size());
    if (dim != 1 && dim != 2) throw ParseError("cells must be 1- or 2-dimensional");
    std::vector<Box> cells;
    std::vector<Point> reps;
    for (const auto& c : cells_j) {
      Box b;
      b.dim = dim;
      const auto& lo = c.at("lo");
      const auto& hi = c.at("hi");
      if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim) {
        throw InvalidPartition("inconsistent cell dimension");
      }
      for (int k = 0; k < dim; ++k) {
        b.lo[k] = lo.at(k).get<double>();
        b.hi[k] = hi.at(k).get<double>();
      }
      cells.push_back(b);
    }
    for (const auto& r : j.at("reps")) {
      if (static_cast<int>(r.size()) != dim) throw InvalidPartition("inconsistent representative dimension");
      Point p{};
      for (int k = 0; k < dim; ++k) p[k] = r.at(k).get<double>();
      reps.push_back(p);
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return Partition(dim, std::move(cells), std::move(reps), std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("partition JSON: ") + e.what());
  }
}

Partition dyadic_partition(int n, int cap) {
  if (n < 1) throw InvalidArgument("dyadic_partition: n must be >= 1");
  if (n > cap) {
    throw ResourceLimit("dyadic_partition: n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
  const std::size_t k = std::size_t{1} << n;
  const double side = std::ldexp(1.0, -n);
  const double offset = std::sqrt(2.0) * std::ldexp(1.0, -(n + 1));
  std::vector<Box> cells;
  std::vector<Partition::Point> reps;
  std::vector<std::string> labels;
  cells.reserve(k * k);
  reps.reserve(k * k);
  labels.reserve(k * k);
  auto bits = [n](std::size_t v) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int b = 0; b < n; ++b) {
      if ((v >> (n - 1 - b)) & 1U) s[static_cast<std::size_t>(b)] = '1';
    }
    return s;
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double x0 = static_cast<double>(i) * side;
      const double y0 = static_cast<double>(j) * side;
      cells.push_back(Box::square(x0, y0, x0 + side, y0 + side));
      reps.push_back({x0 + offset, y0 + offset});
      labels.push_back("x" + bits(i) + "y" + bits(j));
    }
  }
  return Partition(2, std::move(cells), std::move(reps), std::move(labels));
}

Partition left_right_partition() {
  return Partition(2, {Box::square(0.0, 0.0, 0.5, 1.0), Box::square(0.5, 0.0, 1.0, 1.0)},
                   {{0.25, 0.5}, {0.75, 0.5}}, {"s1", "s2"});
}

Partition halves_partition() {
  return Partition(1, {Box::interval(0.0, 0.5), Box::interval(0.5, 1.0)}, {{0.25, 0.0}, {0.75, 0.0}}, {"L", "R"});
}

}  // namespace obseq
