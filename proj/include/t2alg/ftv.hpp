#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "t2alg/grid.hpp"

namespace t2alg {

/// A fuzzy truth value: one membership grade per grid point.
class FTV {
 public:
  FTV(const Grid& grid, std::vector<double> grades) : grid_(grid), grades_(std::move(grades)) {
    if (grades_.size() != grid_.size()) {
      throw Error(ErrorKind::grid_mismatch, "fuzzy truth value has " +
                                                std::to_string(grades_.size()) +
                                                " grades, grid needs " + std::to_string(grid_.size()));
    }
    for (double g : grades_) {
      if (!(g >= 0.0 && g <= 1.0)) {
        throw Error(ErrorKind::out_of_range, "membership grade " + std::to_string(g) + " outside [0,1]");
      }
    }
  }

  static FTV zeros(const Grid& grid) { return FTV(grid, std::vector<double>(grid.size(), 0.0)); }

  static FTV constant(const Grid& grid, double grade) {
    return FTV(grid, std::vector<double>(grid.size(), grade));
  }

  static FTV indicator(const Grid& grid, std::size_t index) {
    std::vector<double> g(grid.size(), 0.0);
    g.at(index) = 1.0;
    return FTV(grid, std::move(g));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grades_.size(); }
  double operator[](std::size_t i) const noexcept { return grades_[i]; }
  const std::vector<double>& grades() const noexcept { return grades_; }

  double height() const noexcept { return *std::max_element(grades_.begin(), grades_.end()); }

  /// Copy with one grade replaced.
  FTV with(std::size_t i, double grade) const {
    auto g = grades_;
    g.at(i) = grade;
    return FTV(grid_, std::move(g));
  }

  friend bool operator==(const FTV&, const FTV&) = default;

 private:
  Grid grid_;
  std::vector<double> grades_;
};

/// Convexity in the sense f(y) >= min(f(x), f(z)) for x <= y <= z.
/// O(n): f is convex iff it dominates the pointwise minimum of its running
/// prefix and suffix maxima.
inline bool is_convex(const FTV& f) {
  const std::size_t m = f.size();
  std::vector<double> suffix(m);
  double run = 0.0;
  for (std::size_t i = m; i-- > 0;) {
    run = std::max(run, f[i]);
    suffix[i] = run;
  }
  double prefix = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    prefix = std::max(prefix, f[i]);
    if (f[i] < std::min(prefix, suffix[i])) return false;
  }
  return true;
}

// Random subjects. Both generators are deterministic in (grid, seed) and
// independent of the standard library's distribution implementations.

/// Mixes a seed with a stream index so each trial owns an independent stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline std::size_t index_draw(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng() % bound);
}

}  // namespace detail

/// Unimodal grades: non-decreasing up to a random peak, non-increasing after.
inline FTV random_convex(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t m = grid.size();
  std::vector<double> g(m);
  for (double& v : g) v = detail::unit_draw(rng);
  const std::size_t peak = detail::index_draw(rng, m);
  std::sort(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(peak + 1));
  std::sort(g.begin() + static_cast<std::ptrdiff_t>(peak + 1), g.end(), std::greater<>());
  return FTV(grid, std::move(g));
}

/// Independent uniform grades.
inline FTV random_ftv(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> g(grid.size());
  for (double& v : g) v = detail::unit_draw(rng);
  return FTV(grid, std::move(g));
}

/// Grades that are zero with probability one half and uniform otherwise.
/// Sparse supports make distributivity failures visible that dense
/// subjects mask behind large suprema.
inline FTV random_sparse_ftv(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> g(grid.size());
  for (double& v : g) {
    const bool keep = (rng() & 1U) != 0;
    const double u = detail::unit_draw(rng);
    v = keep ? u : 0.0;
  }
  return FTV(grid, std::move(g));
}

}  // namespace t2alg
