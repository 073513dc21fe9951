#pragma once

#include <cstddef>
#include <vector>

#include "t2alg/binary_op.hpp"

namespace t2alg {

/// The linear embedding low + (high-low)·G((x-low)/(high-low), (y-low)/(high-low)).
/// The result is meaningful on [low,high]² only.
inline RealFn rescaled(RealFn inner, double low, double high) {
  const double width = high - low;
  return [inner = std::move(inner), low, width](double x, double y) {
    const double u = detail::clamp_unit((x - low) / width);
    const double v = detail::clamp_unit((y - low) / width);
    return low + width * inner(u, v);
  };
}

/// Grid points of [low, high] together with the embedded operator's values there.
struct BlockTable {
  std::size_t first = 0;  ///< grid index of the first point >= low
  std::size_t last = 0;   ///< grid index of the last point <= high
  std::vector<double> values;  ///< row-major, (last-first+1)² entries

  std::size_t extent() const noexcept { return last - first + 1; }
  double at(std::size_t i, std::size_t j) const { return values[(i - first) * extent() + (j - first)]; }
};

/// Tabulates op embedded into [low,high]² on the grid points of that square.
/// Off-grid inner arguments go through op.eval (formula or bilinear interpolation).
inline BlockTable rescale_block(const BinaryOp& op, double low, double high) {
  if (!(low < high) || low < 0.0 || high > 1.0) {
    throw Error(ErrorKind::invalid_interval,
                "rescale interval [" + std::to_string(low) + "," + std::to_string(high) + "]");
  }
  const Grid& grid = op.grid();
  BlockTable block;
  const double n = static_cast<double>(grid.resolution());
  block.first = static_cast<std::size_t>(std::ceil(low * n - 1e-9));
  block.last = static_cast<std::size_t>(std::floor(high * n + 1e-9));
  if (block.last < block.first) return block;
  const std::size_t m = block.extent();
  block.values.resize(m * m);
  const double width = high - low;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double u = detail::clamp_unit((grid.point(block.first + i) - low) / width);
      const double v = detail::clamp_unit((grid.point(block.first + j) - low) / width);
      block.values[i * m + j] = detail::canonicalize(grid, low + width * op.eval(u, v));
    }
  }
  return block;
}

}  // namespace t2alg
