#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "t2alg/binary_op.hpp"

namespace t2alg {

enum class Monotonicity { increasing, decreasing };

/// A strictly monotone unary function sampled on the grid points.
///
/// Off-grid values are linear interpolations of the samples; the inverse is a
/// binary search over the samples followed by linear interpolation inside the
/// bracketing cell, so inversion error is of the same order as snapping.
class Generator {
 public:
  Generator(const Grid& grid, std::vector<double> samples) : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
      throw Error(ErrorKind::invalid_generator, "generator has " + std::to_string(samples_.size()) +
                                                    " samples, grid needs " +
                                                    std::to_string(grid_.size()));
    }
    const bool up = samples_.back() > samples_.front();
    for (std::size_t i = 1; i < samples_.size(); ++i) {
      const bool ok = up ? samples_[i] > samples_[i - 1] : samples_[i] < samples_[i - 1];
      if (!ok) {
        throw Error(ErrorKind::invalid_generator,
                    "generator is not strictly monotone at grid index " + std::to_string(i));
      }
    }
    direction_ = up ? Monotonicity::increasing : Monotonicity::decreasing;
  }

  static Generator sample(const Grid& grid, const std::function<double(double)>& fn) {
    std::vector<double> s(grid.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = fn(grid.point(i));
    return Generator(grid, std::move(s));
  }

  static Generator identity(const Grid& grid) {
    return sample(grid, [](double x) { return x; });
  }

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  Monotonicity direction() const noexcept { return direction_; }
  double at_zero() const noexcept { return samples_.front(); }
  double at_one() const noexcept { return samples_.back(); }

  double operator()(double x) const {
    const double n = static_cast<double>(grid_.resolution());
    const double pos = detail::clamp_unit(x) * n;
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= grid_.resolution()) return samples_.back();
    const double t = pos - static_cast<double>(i);
    return samples_[i] + t * (samples_[i + 1] - samples_[i]);
  }

  /// Inverse on [min sample, max sample]; arguments outside are clamped.
  double inverse(double v) const {
    const bool up = direction_ == Monotonicity::increasing;
    const double lo = up ? samples_.front() : samples_.back();
    const double hi = up ? samples_.back() : samples_.front();
    v = std::clamp(v, lo, hi);
    // Index of the first sample not "before" v in the direction of monotonicity.
    std::size_t a = 0;
    std::size_t b = samples_.size() - 1;
    while (b - a > 1) {
      const std::size_t mid = (a + b) / 2;
      const bool before = up ? samples_[mid] <= v : samples_[mid] >= v;
      (before ? a : b) = mid;
    }
    const double sa = samples_[a];
    const double sb = samples_[b];
    const double t = sb == sa ? 0.0 : (v - sa) / (sb - sa);
    return detail::clamp_unit(grid_.point(a) + t * (grid_.point(b) - grid_.point(a)));
  }

 private:
  Grid grid_;
  std::vector<double> samples_;
  Monotonicity direction_ = Monotonicity::increasing;
};

namespace detail {

inline void require_increasing_unit(const Generator& s, const char* what) {
  if (s.direction() != Monotonicity::increasing) {
    throw Error(ErrorKind::invalid_generator, std::string(what) + " requires an increasing generator");
  }
  if (std::abs(s.at_one() - 1.0) > kClosureTolerance) {
    throw Error(ErrorKind::invalid_generator, std::string(what) + " requires s(1)=1");
  }
}

}  // namespace detail

/// S(x,y) = s⁻¹(min(s(x)+s(y), 1)) for an increasing s with s(0)=0, s(1)=1.
inline RealFn additive_tconorm_fn(const Generator& s) {
  detail::require_increasing_unit(s, "additive generator");
  if (std::abs(s.at_zero()) > kClosureTolerance) {
    throw Error(ErrorKind::invalid_generator, "additive generator requires s(0)=0");
  }
  return [s](double x, double y) { return s.inverse(std::min(s(x) + s(y), 1.0)); };
}

/// T(x,y) = s⁻¹(s(x)·s(y)), and 0 whenever an argument is 0.
inline RealFn multiplicative_tnorm_fn(const Generator& s) {
  detail::require_increasing_unit(s, "multiplicative generator");
  if (s.samples().size() > 1 && !(s.samples()[1] > 0.0)) {
    throw Error(ErrorKind::invalid_generator, "multiplicative generator requires s(x)>0 for x>0");
  }
  return [s](double x, double y) {
    if (x == 0.0 || y == 0.0) return 0.0;
    return s.inverse(s(x) * s(y));
  };
}

inline BinaryOp tconorm_from_additive_generator(const Grid& grid, const Generator& s) {
  require_same_grid(grid, s.grid(), "tconorm_from_additive_generator");
  return BinaryOp::tabulate(grid, additive_tconorm_fn(s), OpMeta{"additive-generator", {}});
}

inline BinaryOp tnorm_from_multiplicative_generator(const Grid& grid, const Generator& s) {
  require_same_grid(grid, s.grid(), "tnorm_from_multiplicative_generator");
  return BinaryOp::tabulate(grid, multiplicative_tnorm_fn(s), OpMeta{"multiplicative-generator", {}});
}

}  // namespace t2alg
