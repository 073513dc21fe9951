#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "t2alg/binary_op.hpp"

namespace t2alg {

enum class BoundaryClass { conjunctive, disjunctive, neither };

inline std::string_view to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::conjunctive: return "conjunctive";
    case BoundaryClass::disjunctive: return "disjunctive";
    case BoundaryClass::neither: return "neither";
  }
  return "?";
}

/// Exhaustive grid-level check of the algebraic axioms of an operator.
struct AxiomReport {
  bool commutative = false;
  bool associative = false;
  double associativity_residual = 0.0;
  bool monotone = false;
  std::vector<double> neutral_elements;
  std::vector<double> absorbing_elements;
  BoundaryClass boundary_class = BoundaryClass::neither;
  double max_jump = 0.0;  ///< largest difference between adjacent table entries
  bool idempotent = false;
};

/// Equality tolerance for tabulated values (closed tables are exact after canonicalization).
inline constexpr double kTableTolerance = 1e-12;
/// Tolerance under which an associativity residual counts as zero.
inline constexpr double kAssociativityTolerance = 1e-9;

inline AxiomReport axiom_report(const BinaryOp& op) {
  const Grid& grid = op.grid();
  const std::size_t m = grid.size();
  AxiomReport r;

  r.commutative = true;
  r.monotone = true;
  r.idempotent = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(op.at(i, i) - grid.point(i)) > kTableTolerance) r.idempotent = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(op.at(i, j) - op.at(j, i)) > kTableTolerance) r.commutative = false;
      if (i + 1 < m) {
        const double d = op.at(i + 1, j) - op.at(i, j);
        if (d < -kTableTolerance) r.monotone = false;
        r.max_jump = std::max(r.max_jump, std::abs(d));
      }
      if (j + 1 < m) {
        const double d = op.at(i, j + 1) - op.at(i, j);
        if (d < -kTableTolerance) r.monotone = false;
        r.max_jump = std::max(r.max_jump, std::abs(d));
      }
    }
  }

  // G(G(x,y),z) against G(x,G(y,z)); inner values may leave the grid.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double xy = op.at(i, j);
      for (std::size_t k = 0; k < m; ++k) {
        const double left = op.eval(xy, grid.point(k));
        const double right = op.eval(grid.point(i), op.at(j, k));
        r.associativity_residual = std::max(r.associativity_residual, std::abs(left - right));
      }
    }
  }
  r.associative = r.associativity_residual <= kAssociativityTolerance;

  for (std::size_t c = 0; c < m; ++c) {
    bool neutral = true;
    bool absorbing = true;
    const double v = grid.point(c);
    for (std::size_t i = 0; i < m && (neutral || absorbing); ++i) {
      const double x = grid.point(i);
      if (std::abs(op.at(i, c) - x) > kTableTolerance || std::abs(op.at(c, i) - x) > kTableTolerance) {
        neutral = false;
      }
      if (std::abs(op.at(i, c) - v) > kTableTolerance || std::abs(op.at(c, i) - v) > kTableTolerance) {
        absorbing = false;
      }
    }
    if (neutral) r.neutral_elements.push_back(v);
    if (absorbing) r.absorbing_elements.push_back(v);
  }

  const double corner = op.at(m - 1, 0);
  if (corner == 0.0) r.boundary_class = BoundaryClass::conjunctive;
  else if (corner == 1.0) r.boundary_class = BoundaryClass::disjunctive;
  return r;
}

/// Points of E = [0,1]² \ ([0,e]² ∪ [e,1]²) where min(x,y) <= U(x,y) <= max(x,y) fails.
inline std::size_t region_bound_violations(const BinaryOp& op, double e) {
  const Grid& grid = op.grid();
  std::size_t bad = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid.point(i);
      const double y = grid.point(j);
      const bool lower = x <= e && y <= e;
      const bool upper = x >= e && y >= e;
      if (lower || upper) continue;
      const double u = op.at(i, j);
      if (u < std::min(x, y) - kTableTolerance || u > std::max(x, y) + kTableTolerance) ++bad;
    }
  }
  return bad;
}

/// Violations of F(0,x)=x on [0,k], F(1,x)=x on [k,1] and F(k,x)=k.
inline std::size_t nullnorm_boundary_violations(const BinaryOp& op, double k) {
  const Grid& grid = op.grid();
  const std::size_t last = grid.resolution();
  std::size_t bad = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i);
    if (x <= k + kTableTolerance && std::abs(op.at(0, i) - x) > kTableTolerance) ++bad;
    if (x >= k - kTableTolerance && std::abs(op.at(last, i) - x) > kTableTolerance) ++bad;
    if (std::abs(op.eval(k, x) - k) > kTableTolerance || std::abs(op.eval(x, k) - k) > kTableTolerance) ++bad;
  }
  return bad;
}

/// The underlying t-norm T_U and t-conorm S_U of a uninorm with neutral element e.
inline std::pair<BinaryOp, BinaryOp> underlying_ops(const BinaryOp& U, double e) {
  if (!(e > 0.0 && e < 1.0)) {
    throw Error(ErrorKind::invalid_neutral, "underlying operators need e in (0,1), got " + std::to_string(e));
  }
  const Grid& grid = U.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i);
    if (std::abs(U.eval(x, e) - x) > 1e-9 || std::abs(U.eval(e, x) - x) > 1e-9) {
      throw Error(ErrorKind::invalid_neutral, std::to_string(e) + " is not a neutral element of the operator");
    }
  }
  OpMeta tmeta{"underlying-tnorm", {{"of", U.meta().family}}};
  OpMeta smeta{"underlying-tconorm", {{"of", U.meta().family}}};
  BinaryOp t = BinaryOp::tabulate(
      grid, [U, e](double x, double y) { return detail::clamp_unit(U.eval(e * x, e * y) / e); }, tmeta);
  BinaryOp s = BinaryOp::tabulate(
      grid,
      [U, e](double x, double y) {
        return detail::clamp_unit((U.eval(e + (1 - e) * x, e + (1 - e) * y) - e) / (1 - e));
      },
      smeta);
  return {std::move(t), std::move(s)};
}

enum class CdMode { CD, CDl, CDr };

inline std::string_view to_string(CdMode m) {
  switch (m) {
    case CdMode::CD: return "CD";
    case CdMode::CDl: return "CDl";
    case CdMode::CDr: return "CDr";
  }
  return "?";
}

/// How inner values are fed to the outer operator.
enum class Composition {
  real,  ///< real-valued evaluation (formula or bilinear interpolation)
  snap,  ///< inner values snapped to the grid, as the snap-mode convolution sees them
};

struct CdVerdict {
  bool pass = false;
  double max_residual = 0.0;
  std::array<std::size_t, 3> witness{};  ///< grid indices (x, y, z) of the max residual
  CdMode side = CdMode::CDl;             ///< the law attaining the max residual
  std::size_t guarded_triples = 0;       ///< triples where the guard U(.,.) < 1 held
};

/// Conditional distributivity of F over U, scanning all grid triples.
/// The guard U(y,z) < 1 (U(x,y) < 1 for CDr) is strict on tabulated values.
inline CdVerdict check_conditional_distributivity(const BinaryOp& F, const BinaryOp& U, CdMode mode,
                                                  double tol, Composition comp = Composition::real) {
  require_same_grid(F.grid(), U.grid(), "check_conditional_distributivity");
  const Grid& grid = F.grid();
  const std::size_t m = grid.size();
  CdVerdict v;
  auto record = [&](double residual, std::size_t x, std::size_t y, std::size_t z, CdMode side) {
    if (residual > v.max_residual) {
      v.max_residual = residual;
      v.witness = {x, y, z};
      v.side = side;
    }
  };
  auto outer = [&](const BinaryOp& op, double p, double q) {
    if (comp == Composition::snap) return op.at(grid.snap_unchecked(p), grid.snap_unchecked(q));
    return op.eval(p, q);
  };
  const bool left = mode != CdMode::CDr;
  const bool right = mode != CdMode::CDl;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t c = 0; c < m; ++c) {
        // CDl: F(x, U(y,z)) = U(F(x,y), F(x,z)) with (x,y,z) = (a,b,c).
        if (left && U.at(b, c) < 1.0) {
          ++v.guarded_triples;
          const double lhs = outer(F, grid.point(a), U.at(b, c));
          const double rhs = outer(U, F.at(a, b), F.at(a, c));
          record(std::abs(lhs - rhs), a, b, c, CdMode::CDl);
        }
        // CDr: F(U(x,y), z) = U(F(x,z), F(y,z)).
        if (right && U.at(a, b) < 1.0) {
          ++v.guarded_triples;
          const double lhs = outer(F, U.at(a, b), grid.point(c));
          const double rhs = outer(U, F.at(a, c), F.at(b, c));
          record(std::abs(lhs - rhs), a, b, c, CdMode::CDr);
        }
      }
    }
  }
  v.pass = v.max_residual <= tol;
  return v;
}

}  // namespace t2alg
