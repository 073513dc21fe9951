#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "t2alg/basic.hpp"
#include "t2alg/binary_op.hpp"
#include "t2alg/ftv.hpp"

namespace t2alg {

/// How an operator output is mapped back onto a grid index.
enum class ConvMode {
  exact,  ///< exact lookup; the operator must be grid-closed
  snap,   ///< nearest grid point, ties upward
};

inline std::string_view to_string(ConvMode mode) { return mode == ConvMode::exact ? "exact" : "snap"; }

/// An operator together with the grid index of each tabulated output.
/// Built once and reused across convolutions of the same operator.
class IndexedOp {
 public:
  IndexedOp(const BinaryOp& op, ConvMode mode) : grid_(op.grid()), mode_(mode) {
    if (mode == ConvMode::exact && !op.closed()) {
      throw Error(ErrorKind::closure, "exact convolution requires a grid-closed operator (" +
                                          op.meta().family + ")");
    }
    const std::size_t m = grid_.size();
    index_.resize(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double v = op.at(i, j);
        index_[i * m + j] = static_cast<std::uint32_t>(
            mode == ConvMode::exact ? *grid_.exact_index(v) : grid_.snap(v));
      }
    }
  }

  const Grid& grid() const noexcept { return grid_; }
  ConvMode mode() const noexcept { return mode_; }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return index_[i * grid_.size() + j]; }

 private:
  Grid grid_;
  ConvMode mode_;
  std::vector<std::uint32_t> index_;
};

/// Sup-min convolution: result[z] = max over pairs (i,j) landing on z of
/// min(f[i], g[j]); indices with an empty preimage get 0.
inline FTV convolve(const IndexedOp& op, const FTV& f, const FTV& g) {
  require_same_grid(op.grid(), f.grid(), "convolve");
  require_same_grid(op.grid(), g.grid(), "convolve");
  const std::size_t m = op.grid().size();
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double fi = f[i];
    if (fi == 0.0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      const double w = std::min(fi, g[j]);
      double& slot = out[op.index(i, j)];
      if (w > slot) slot = w;
    }
  }
  return FTV(op.grid(), std::move(out));
}

inline FTV convolve(const BinaryOp& op, const FTV& f, const FTV& g, ConvMode mode) {
  require_same_grid(op.grid(), f.grid(), "convolve");
  require_same_grid(op.grid(), g.grid(), "convolve");
  return convolve(IndexedOp(op, mode), f, g);
}

/// Extended minimum.
inline FTV meet(const FTV& f, const FTV& g) {
  require_same_grid(f.grid(), g.grid(), "meet");
  return convolve(basic_op(f.grid(), BasicKind::TM), f, g, ConvMode::exact);
}

/// Extended maximum.
inline FTV join(const FTV& f, const FTV& g) {
  require_same_grid(f.grid(), g.grid(), "join");
  return convolve(basic_op(f.grid(), BasicKind::SM), f, g, ConvMode::exact);
}

}  // namespace t2alg
