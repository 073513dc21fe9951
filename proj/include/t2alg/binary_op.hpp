#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "t2alg/error.hpp"
#include "t2alg/grid.hpp"

namespace t2alg {

/// A real-valued binary operation on [0,1].
using RealFn = std::function<double(double, double)>;

/// Provenance of a tabulated operator.
struct OpMeta {
  std::string family;
  std::map<std::string, std::string> params;

  friend bool operator==(const OpMeta&, const OpMeta&) = default;
};

namespace detail {

/// Replaces values lying within kClosureTolerance of a grid point by that point.
inline double canonicalize(const Grid& grid, double v) {
  if (v < 0.0 && v >= -kClosureTolerance) v = 0.0;
  if (v > 1.0 && v <= 1.0 + kClosureTolerance) v = 1.0;
  if (auto i = grid.exact_index(v)) return grid.point(*i);
  return v;
}

inline double clamp_unit(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace detail

/// An operator tabulated on a grid: entry (i, j) holds G(x_i, x_j).
///
/// Built operators keep their real-valued formula next to the table so that
/// off-grid evaluation (block rescaling, underlying operators, conditional
/// distributivity with a non-closed inner operator) stays exact. Tables read
/// from disk have no formula and fall back to bilinear interpolation.
class BinaryOp {
 public:
  static BinaryOp tabulate(const Grid& grid, RealFn fn, OpMeta meta) {
    const std::size_t m = grid.size();
    std::vector<double> values(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        values[i * m + j] = fn(grid.point(i), grid.point(j));
      }
    }
    BinaryOp op(grid, std::move(values), std::move(meta));
    op.fn_ = std::move(fn);
    return op;
  }

  static BinaryOp from_table(const Grid& grid, std::vector<double> values, OpMeta meta) {
    return BinaryOp(grid, std::move(values), std::move(meta));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double at(std::size_t i, std::size_t j) const noexcept { return values_[i * grid_.size() + j]; }
  std::span<const double> values() const noexcept { return values_; }
  const OpMeta& meta() const noexcept { return meta_; }
  bool closed() const noexcept { return closed_; }
  bool has_formula() const noexcept { return static_cast<bool>(fn_); }

  /// Real-valued evaluation: the formula when known, bilinear interpolation otherwise.
  double eval(double x, double y) const {
    if (fn_) return detail::canonicalize(grid_, fn_(x, y));
    return interpolate(x, y);
  }

  /// Bilinear interpolation of the table; exact at grid points.
  double interpolate(double x, double y) const {
    const auto [i, tx] = cell(x);
    const auto [j, ty] = cell(y);
    if (tx == 0.0 && ty == 0.0) return at(i, j);
    const std::size_t i1 = tx == 0.0 ? i : i + 1;
    const std::size_t j1 = ty == 0.0 ? j : j + 1;
    const double v = (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i1, j) +
                     (1 - tx) * ty * at(i, j1) + tx * ty * at(i1, j1);
    return detail::canonicalize(grid_, v);
  }

  /// The operator with its arguments swapped.
  BinaryOp transposed() const {
    const std::size_t m = grid_.size();
    std::vector<double> values(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) values[i * m + j] = at(j, i);
    OpMeta meta = meta_;
    meta.params["orientation"] = meta_.params.count("orientation") &&
                                         meta_.params.at("orientation") == "right"
                                     ? "left"
                                     : "right";
    BinaryOp op(grid_, std::move(values), std::move(meta));
    if (fn_) {
      op.fn_ = [fn = fn_](double x, double y) { return fn(y, x); };
    }
    return op;
  }

  RealFn formula() const {
    if (fn_) return fn_;
    return [op = *this](double x, double y) { return op.interpolate(x, y); };
  }

 private:
  BinaryOp(const Grid& grid, std::vector<double> values, OpMeta meta)
      : grid_(grid), values_(std::move(values)), meta_(std::move(meta)) {
    if (values_.size() != grid_.size() * grid_.size()) {
      throw Error(ErrorKind::grid_mismatch, "table has " + std::to_string(values_.size()) +
                                                " entries, grid needs " +
                                                std::to_string(grid_.size() * grid_.size()));
    }
    closed_ = true;
    for (double& v : values_) {
      v = detail::canonicalize(grid_, v);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorKind::out_of_range,
                    "operator value " + std::to_string(v) + " outside [0,1]");
      }
      if (!grid_.is_point(v)) closed_ = false;
    }
  }

  std::pair<std::size_t, double> cell(double x) const {
    if (!(x >= -kClosureTolerance && x <= 1.0 + kClosureTolerance)) {
      throw Error(ErrorKind::out_of_range, "argument " + std::to_string(x) + " outside [0,1]");
    }
    const double n = static_cast<double>(grid_.resolution());
    const double pos = detail::clamp_unit(x) * n;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) <= 1e-9) return {static_cast<std::size_t>(nearest), 0.0};
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= grid_.resolution()) i = grid_.resolution() - 1;
    return {i, pos - static_cast<double>(i)};
  }

  Grid grid_;
  std::vector<double> values_;
  OpMeta meta_;
  bool closed_ = false;
  RealFn fn_;
};

/// True iff every tabulated value is a grid point (absolute tolerance 1e-12).
inline bool is_grid_closed(const Grid& grid, const BinaryOp& op) {
  require_same_grid(grid, op.grid(), "is_grid_closed");
  for (double v : op.values()) {
    if (!grid.is_point(v)) return false;
  }
  return true;
}

}  // namespace t2alg
