#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "t2alg/error.hpp"

namespace t2alg {

/// Absolute tolerance separating a genuine grid value from floating-point noise.
inline constexpr double kClosureTolerance = 1e-12;

/// The quantized unit interval {0, 1/n, ..., 1}.
///
/// A grid is a value type: two grids compare equal iff they have the same
/// resolution, and every table or fuzzy truth value carries the grid it was
/// tabulated on so mismatches are caught at the call site.
class Grid {
 public:
  explicit Grid(std::size_t resolution) : n_(resolution) {
    if (resolution < 2) {
      throw Error(ErrorKind::invalid_resolution,
                  "grid resolution must be at least 2, got " + std::to_string(resolution));
    }
  }

  std::size_t resolution() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_ + 1; }

  double point(std::size_t i) const noexcept {
    return i == n_ ? 1.0 : static_cast<double>(i) / static_cast<double>(n_);
  }

  std::vector<double> points() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = point(i);
    return out;
  }

  /// Nearest grid index, ties rounded upward.
  std::size_t snap(double v) const {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::out_of_range, "value " + std::to_string(v) + " outside [0,1]");
    }
    return snap_unchecked(v);
  }

  std::size_t snap_unchecked(double v) const noexcept {
    const double scaled = v * static_cast<double>(n_);
    auto i = static_cast<std::ptrdiff_t>(std::floor(scaled + 0.5));
    if (i < 0) i = 0;
    if (i > static_cast<std::ptrdiff_t>(n_)) i = static_cast<std::ptrdiff_t>(n_);
    return static_cast<std::size_t>(i);
  }

  /// Index of v if v is a grid point within kClosureTolerance.
  std::optional<std::size_t> exact_index(double v) const noexcept {
    if (!(v >= -kClosureTolerance && v <= 1.0 + kClosureTolerance)) return std::nullopt;
    const std::size_t i = snap_unchecked(std::clamp(v, 0.0, 1.0));
    if (std::abs(point(i) - v) <= kClosureTolerance) return i;
    return std::nullopt;
  }

  bool is_point(double v) const noexcept { return exact_index(v).has_value(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
};

inline Grid make_grid(std::size_t n) { return Grid(n); }

inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::grid_mismatch, std::string(what) + ": grids of resolution " +
                                              std::to_string(a.resolution()) + " and " +
                                              std::to_string(b.resolution()));
  }
}

}  // namespace t2alg
