#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "t2alg/axioms.hpp"
#include "t2alg/convolution.hpp"
#include "t2alg/families.hpp"
#include "t2alg/io.hpp"

namespace t2alg {

// ---------------------------------------------------------------------------
// Both sides of the distributive laws

/// Left law: f ⊙F (g ⊙V h) against (f ⊙F g) ⊙V (f ⊙F h).
inline std::pair<FTV, FTV> lhs_rhs_left(const IndexedOp& F, const IndexedOp& V, const FTV& f, const FTV& g,
                                        const FTV& h) {
  FTV left = convolve(F, f, convolve(V, g, h));
  FTV right = convolve(V, convolve(F, f, g), convolve(F, f, h));
  return {std::move(left), std::move(right)};
}

/// Right law: (f ⊙V g) ⊙F h against (f ⊙F h) ⊙V (g ⊙F h).
inline std::pair<FTV, FTV> lhs_rhs_right(const IndexedOp& F, const IndexedOp& V, const FTV& f, const FTV& g,
                                         const FTV& h) {
  FTV left = convolve(F, convolve(V, f, g), h);
  FTV right = convolve(V, convolve(F, f, h), convolve(F, g, h));
  return {std::move(left), std::move(right)};
}

inline std::pair<FTV, FTV> lhs_rhs_left(const BinaryOp& F, const BinaryOp& V, const FTV& f, const FTV& g,
                                        const FTV& h, ConvMode mode) {
  require_same_grid(F.grid(), V.grid(), "lhs_rhs_left");
  return lhs_rhs_left(IndexedOp(F, mode), IndexedOp(V, mode), f, g, h);
}

inline std::pair<FTV, FTV> lhs_rhs_right(const BinaryOp& F, const BinaryOp& V, const FTV& f, const FTV& g,
                                         const FTV& h, ConvMode mode) {
  require_same_grid(F.grid(), V.grid(), "lhs_rhs_right");
  return lhs_rhs_right(IndexedOp(F, mode), IndexedOp(V, mode), f, g, h);
}

// ---------------------------------------------------------------------------
// Comparison

enum class Comparison {
  strict,   ///< max_z |a[z] - b[z]| <= tol
  dilated,  ///< a[z] <= max(b[z-1..z+1]) + tol and symmetrically
};

inline std::string_view to_string(Comparison c) { return c == Comparison::strict ? "strict" : "dilated"; }

struct Deviation {
  bool pass = true;
  double max_deviation = 0.0;  ///< strict: max |a-b|; dilated: max excess over the window
  std::size_t violations = 0;  ///< indices exceeding tol
  std::size_t worst_index = 0;
};

inline Deviation compare(const FTV& a, const FTV& b, Comparison comparison, double tol) {
  require_same_grid(a.grid(), b.grid(), "compare");
  const std::size_t m = a.size();
  Deviation d;
  auto window_max = [m](const FTV& v, std::size_t z) {
    double best = v[z];
    if (z > 0) best = std::max(best, v[z - 1]);
    if (z + 1 < m) best = std::max(best, v[z + 1]);
    return best;
  };
  for (std::size_t z = 0; z < m; ++z) {
    double dev = 0.0;
    if (comparison == Comparison::strict) {
      dev = std::abs(a[z] - b[z]);
    } else {
      dev = std::max({0.0, a[z] - window_max(b, z), b[z] - window_max(a, z)});
    }
    if (dev > tol) ++d.violations;
    if (dev > d.max_deviation) {
      d.max_deviation = dev;
      d.worst_index = z;
    }
  }
  d.pass = d.violations == 0;
  return d;
}

// ---------------------------------------------------------------------------
// Theorem suites

enum class TheoremId {
  min_max_i,
  min_max_ii,
  idem,
  cd_disj,
  cd_conj,
  zk_s_l,
  zk_umax_l,
  zk_umin_l,
  zk_s_r,
  zk_umax_r,
  zk_umin_r,
};

inline constexpr std::array<std::pair<TheoremId, std::string_view>, 11> kTheoremNames{{
    {TheoremId::min_max_i, "T-MIN-MAX-i"},
    {TheoremId::min_max_ii, "T-MIN-MAX-ii"},
    {TheoremId::idem, "T-IDEM"},
    {TheoremId::cd_disj, "T-CD-DISJ"},
    {TheoremId::cd_conj, "T-CD-CONJ"},
    {TheoremId::zk_s_l, "T-ZK-S-L"},
    {TheoremId::zk_umax_l, "T-ZK-UMAX-L"},
    {TheoremId::zk_umin_l, "T-ZK-UMIN-L"},
    {TheoremId::zk_s_r, "T-ZK-S-R"},
    {TheoremId::zk_umax_r, "T-ZK-UMAX-R"},
    {TheoremId::zk_umin_r, "T-ZK-UMIN-R"},
}};

inline std::string_view to_string(TheoremId id) {
  for (const auto& [t, name] : kTheoremNames)
    if (t == id) return name;
  return "?";
}

inline std::optional<TheoremId> parse_theorem(std::string_view s) {
  for (const auto& [t, name] : kTheoremNames)
    if (name == s) return t;
  return std::nullopt;
}

enum class Side { left, right };

/// Right-distributivity theorems demand convexity of h, all others of f.
inline Side theorem_side(TheoremId id) {
  return id == TheoremId::zk_s_r || id == TheoremId::zk_umax_r || id == TheoremId::zk_umin_r ? Side::right
                                                                                             : Side::left;
}

struct SuiteConfig {
  TheoremId theorem = TheoremId::min_max_i;
  std::size_t n = 64;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  ConvMode mode = ConvMode::snap;
  Comparison comparison = Comparison::dilated;
  double tolerance = 0.0;
  OperatorSpec F;
  /// The inner operator (uninorm or t-conorm); fixed to TM/SM for T-MIN-MAX.
  std::optional<OperatorSpec> V;
  std::size_t jobs = 1;
};

/// A triple of subjects and the output index where the two sides differ most.
struct Witness {
  FTV f;
  FTV g;
  FTV h;
  std::size_t z = 0;
  double deviation = 0.0;
  std::size_t trial = 0;
};

struct SuiteReport {
  TheoremId theorem = TheoremId::min_max_i;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t passes = 0;
  std::size_t failures = 0;
  ConvMode mode = ConvMode::snap;
  Comparison comparison = Comparison::dilated;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  std::size_t violating_indices = 0;  ///< summed over trials
  std::optional<Witness> worst;
  double wall_seconds = 0.0;
};

namespace fixtures {

inline OperatorSpec basic(BasicKind kind) {
  OperatorSpec s;
  s.family = is_tnorm(kind) ? Family::basic_tnorm : Family::basic_tconorm;
  s.block(is_tnorm(kind) ? "T" : "S", Block::basic(kind));
  return s;
}

inline OperatorSpec with_params(Family fam, std::initializer_list<std::pair<const char*, double>> params) {
  OperatorSpec s;
  s.family = fam;
  for (const auto& [key, value] : params) s.set(key, value, spell_parameter(value));
  return s;
}

/// Nullnorm of the first disjunctive case with Łukasiewicz blocks.
inline OperatorSpec nullnorm_disj_i(double e = 0.25, double k = 0.5) {
  return with_params(Family::nullnorm_disj_i, {{"e", e}, {"k", k}})
      .block("S1", Block::basic(BasicKind::SL))
      .block("S2", Block::basic(BasicKind::SL))
      .block("T", Block::basic(BasicKind::TL));
}

inline OperatorSpec uninorm_disj_i(double e = 0.25) { return with_params(Family::uninorm_disj_i, {{"e", e}}); }

inline OperatorSpec overline(double e) { return with_params(Family::overline_uninorm, {{"e", e}}); }
inline OperatorSpec underline(double e) { return with_params(Family::underline_uninorm, {{"e", e}}); }

inline OperatorSpec identity_generator(OperatorSpec s) {
  s.generator = GeneratorSource{};
  return s;
}

inline OperatorSpec nullnorm_disj_ii(double e = 0.25, double k = 0.5, double a = 0.75) {
  return identity_generator(with_params(Family::nullnorm_disj_ii, {{"e", e}, {"k", k}, {"a", a}}))
      .block("S1", Block::basic(BasicKind::SL))
      .block("S2", Block::basic(BasicKind::SL))
      .block("T1", Block::basic(BasicKind::TL));
}

inline OperatorSpec uninorm_disj_ii(double e = 0.25, double a = 0.75) {
  return identity_generator(with_params(Family::uninorm_disj_ii, {{"e", e}, {"a", a}}));
}

inline OperatorSpec nullnorm_disj_iii(double e = 0.5, double k = 0.25) {
  return with_params(Family::nullnorm_disj_iii, {{"e", e}, {"k", k}})
      .block("S1", Block::basic(BasicKind::SL))
      .block("T1", Block::basic(BasicKind::TL))
      .block("T2", Block::basic(BasicKind::TL));
}

inline OperatorSpec uninorm_disj_iii(double e = 0.5) { return with_params(Family::uninorm_disj_iii, {{"e", e}}); }

inline OperatorSpec nullnorm_conj_i(double e = 0.5, double k = 0.25) {
  return with_params(Family::nullnorm_conj_i, {{"e", e}, {"k", k}})
      .block("S1", Block::basic(BasicKind::SL))
      .block("T1", Block::basic(BasicKind::TL))
      .block("T2", Block::basic(BasicKind::TL));
}

inline OperatorSpec uninorm_conj_i(double e = 0.5) { return with_params(Family::uninorm_conj_i, {{"e", e}}); }

inline OperatorSpec nullnorm_conj_ii(double e = 0.5, double k = 0.25, double a = 0.75) {
  return identity_generator(with_params(Family::nullnorm_conj_ii, {{"e", e}, {"k", k}, {"a", a}}))
      .block("S1", Block::basic(BasicKind::SL))
      .block("T1", Block::basic(BasicKind::TL))
      .block("T2", Block::basic(BasicKind::TL));
}

inline OperatorSpec uninorm_conj_ii(double e = 0.5, double a = 0.75) {
  return identity_generator(with_params(Family::uninorm_conj_ii, {{"e", e}, {"a", a}}));
}

inline OperatorSpec nullnorm_conj_iii(double e = 0.25, double k = 0.5) {
  return with_params(Family::nullnorm_conj_iii, {{"e", e}, {"k", k}})
      .block("S1", Block::basic(BasicKind::SL))
      .block("S2", Block::basic(BasicKind::SL))
      .block("T", Block::basic(BasicKind::TL));
}

inline OperatorSpec uninorm_conj_iii(double e = 0.25) { return with_params(Family::uninorm_conj_iii, {{"e", e}}); }

inline OperatorSpec zk_tconorm_ii(double a = 0.75) { return with_params(Family::zk_tconorm_ii, {{"a", a}}); }

inline OperatorSpec zk_F_tconorm(double k = 0.5, double a = 0.75) {
  return with_params(Family::zk_F_tconorm, {{"k", k}, {"a", a}});
}

inline OperatorSpec zk_F_umax(double e = 0.25, double k = 0.5, double a = 0.75) {
  return with_params(Family::zk_F_umax, {{"e", e}, {"k", k}, {"a", a}});
}

inline OperatorSpec zk_F_umin(double e = 0.5, double k = 0.25, double a = 0.75) {
  return with_params(Family::zk_F_umin, {{"e", e}, {"k", k}, {"a", a}});
}

/// Six (F, U) pairs, one per case of the two conditional-distributivity characterizations.
struct CdPair {
  std::string name;
  OperatorSpec F;
  OperatorSpec U;
  bool strict_block = false;  ///< carries a strict (product) block
};

inline std::vector<CdPair> cd_pairs() {
  return {
      {"disj-i", nullnorm_disj_i(), uninorm_disj_i(), false},
      {"disj-ii", nullnorm_disj_ii(), uninorm_disj_ii(), true},
      {"disj-iii", nullnorm_disj_iii(), uninorm_disj_iii(), false},
      {"conj-i", nullnorm_conj_i(), uninorm_conj_i(), false},
      {"conj-ii", nullnorm_conj_ii(), uninorm_conj_ii(), true},
      {"conj-iii", nullnorm_conj_iii(), uninorm_conj_iii(), false},
  };
}

/// Default (F, V) specs of each theorem suite.
inline std::pair<OperatorSpec, OperatorSpec> suite_defaults(TheoremId id) {
  switch (id) {
    case TheoremId::min_max_i: return {nullnorm_disj_i(), basic(BasicKind::TM)};
    case TheoremId::min_max_ii: return {nullnorm_disj_i(), basic(BasicKind::SM)};
    case TheoremId::idem: return {nullnorm_disj_i(), overline(0.5)};
    case TheoremId::cd_disj: return {nullnorm_disj_ii(), uninorm_disj_ii()};
    case TheoremId::cd_conj: return {nullnorm_conj_ii(), uninorm_conj_ii()};
    case TheoremId::zk_s_l:
    case TheoremId::zk_s_r: return {zk_F_tconorm(), zk_tconorm_ii()};
    case TheoremId::zk_umax_l:
    case TheoremId::zk_umax_r: return {zk_F_umax(), uninorm_disj_ii()};
    case TheoremId::zk_umin_l:
    case TheoremId::zk_umin_r: return {zk_F_umin(), uninorm_conj_ii()};
  }
  return {};
}

}  // namespace fixtures

/// Largest adjacent-entry jump accepted as grid-level continuity.
inline double continuity_bound(const Grid& grid) { return 2.0 / static_cast<double>(grid.resolution()); }

namespace detail {

[[noreturn]] inline void reject(TheoremId id, const std::string& hypothesis) {
  throw Error(ErrorKind::suite_rejected, std::string(to_string(id)) + ": hypothesis failed: " + hypothesis);
}

inline void require_continuous_monotone(TheoremId id, const char* who, const AxiomReport& r, const Grid& grid) {
  if (!r.monotone) reject(id, std::string(who) + " is non-decreasing");
  if (r.max_jump > continuity_bound(grid)) reject(id, std::string(who) + " is continuous (grid jump bound)");
}

inline double single_interior(TheoremId id, const char* what, const std::vector<double>& elems) {
  for (double v : elems)
    if (v > 0.0 && v < 1.0) return v;
  reject(id, std::string("operator has an ") + what + " in (0,1)");
}

inline void require_nullnorm(TheoremId id, const BinaryOp& F, const AxiomReport& r) {
  if (!r.commutative) reject(id, "F is commutative");
  if (!r.associative) reject(id, "F is associative");
  const double k = single_interior(id, "absorbing element k", r.absorbing_elements);
  if (nullnorm_boundary_violations(F, k) != 0) reject(id, "F(0,x)=x on [0,k] and F(1,x)=x on [k,1]");
}

inline double require_uninorm(TheoremId id, const BinaryOp& U, const AxiomReport& r) {
  if (!r.commutative) reject(id, "U is commutative");
  if (!r.associative) reject(id, "U is associative");
  if (!r.monotone) reject(id, "U is non-decreasing");
  const double e = single_interior(id, "neutral element e", r.neutral_elements);
  if (region_bound_violations(U, e) != 0) reject(id, "U lies between min and max on E");
  return e;
}

inline void require_wcu(TheoremId id, const BinaryOp& U, double e) {
  auto [t, s] = underlying_ops(U, e);
  const double bound = continuity_bound(U.grid());
  if (axiom_report(t).max_jump > bound) reject(id, "underlying t-norm of U is continuous");
  if (axiom_report(s).max_jump > bound) reject(id, "underlying t-conorm of U is continuous");
}

/// max on E (class U_max) or min on E (class U_min).
inline bool lattice_on_e(const BinaryOp& U, double e, bool use_max) {
  const Grid& grid = U.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid.point(i);
      const double y = grid.point(j);
      if ((x <= e && y <= e) || (x >= e && y >= e)) continue;
      const double want = use_max ? std::max(x, y) : std::min(x, y);
      if (std::abs(U.at(i, j) - want) > kTableTolerance) return false;
    }
  }
  return true;
}

inline void require_cd(TheoremId id, const BinaryOp& F, const BinaryOp& V, CdMode mode) {
  const bool closed = F.closed() && V.closed();
  const CdVerdict v = closed ? check_conditional_distributivity(F, V, mode, 1e-9, Composition::real)
                             : check_conditional_distributivity(F, V, mode, continuity_bound(F.grid()),
                                                                Composition::snap);
  if (!v.pass) {
    reject(id, "F and V satisfy (" + std::string(to_string(mode)) + "); max residual " +
                   io::format_real(v.max_residual, 6) + " at grid indices (" + std::to_string(v.witness[0]) +
                   "," + std::to_string(v.witness[1]) + "," + std::to_string(v.witness[2]) + ")");
  }
}

}  // namespace detail

/// Checks the hypotheses of a theorem on the tabulated operators; throws
/// suite-rejected naming the first one that fails.
inline void validate_hypotheses(TheoremId id, const BinaryOp& F, const BinaryOp& V) {
  require_same_grid(F.grid(), V.grid(), "validate_hypotheses");
  const Grid& grid = F.grid();
  const AxiomReport fr = axiom_report(F);
  detail::require_continuous_monotone(id, "F", fr, grid);
  switch (id) {
    case TheoremId::min_max_i:
    case TheoremId::min_max_ii: {
      const BinaryOp want = basic_op(grid, id == TheoremId::min_max_i ? BasicKind::TM : BasicKind::SM);
      for (std::size_t i = 0; i < V.values().size(); ++i) {
        if (V.values()[i] != want.values()[i]) {
          detail::reject(id, std::string("V is ") + (id == TheoremId::min_max_i ? "minimum" : "maximum"));
        }
      }
      return;
    }
    case TheoremId::idem: {
      detail::require_nullnorm(id, F, fr);
      const AxiomReport vr = axiom_report(V);
      detail::require_uninorm(id, V, vr);
      if (!vr.idempotent) detail::reject(id, "U is idempotent");
      return;
    }
    case TheoremId::cd_disj:
    case TheoremId::cd_conj: {
      detail::require_nullnorm(id, F, fr);
      const AxiomReport vr = axiom_report(V);
      const double e = detail::require_uninorm(id, V, vr);
      const BoundaryClass want =
          id == TheoremId::cd_disj ? BoundaryClass::disjunctive : BoundaryClass::conjunctive;
      if (vr.boundary_class != want) detail::reject(id, "U is " + std::string(to_string(want)));
      detail::require_wcu(id, V, e);
      detail::require_cd(id, F, V, CdMode::CD);
      return;
    }
    case TheoremId::zk_s_l:
    case TheoremId::zk_s_r:
    case TheoremId::zk_umax_l:
    case TheoremId::zk_umax_r:
    case TheoremId::zk_umin_l:
    case TheoremId::zk_umin_r: {
      const double k = detail::single_interior(id, "absorbing element k", fr.absorbing_elements);
      if (nullnorm_boundary_violations(F, k) != 0) detail::reject(id, "F in Z_k boundary conditions");
      const AxiomReport vr = axiom_report(V);
      if (id == TheoremId::zk_s_l || id == TheoremId::zk_s_r) {
        if (!vr.commutative || !vr.associative) detail::reject(id, "S is a t-conorm");
        if (vr.neutral_elements.empty() || vr.neutral_elements.front() != 0.0) {
          detail::reject(id, "S has neutral element 0");
        }
        detail::require_continuous_monotone(id, "S", vr, grid);
      } else {
        const double e = detail::require_uninorm(id, V, vr);
        const bool use_max = id == TheoremId::zk_umax_l || id == TheoremId::zk_umax_r;
        if (!detail::lattice_on_e(V, e, use_max)) detail::reject(id, use_max ? "U in U_max" : "U in U_min");
        detail::require_wcu(id, V, e);
      }
      detail::require_cd(id, F, V, theorem_side(id) == Side::left ? CdMode::CDl : CdMode::CDr);
      return;
    }
  }
}

namespace detail {

struct TrialOutcome {
  Deviation deviation;
  std::size_t trial = 0;
};

/// Subjects of one trial: the convexity-constrained one from random_convex,
/// the others from random_ftv, all seeded by (seed, trial).
inline std::array<FTV, 3> draw_subjects(const Grid& grid, std::uint64_t seed, std::size_t trial, Side side) {
  const std::uint64_t s = derive_seed(seed, trial);
  const std::size_t convex_slot = side == Side::left ? 0 : 2;
  std::vector<FTV> out;
  for (std::size_t slot = 0; slot < 3; ++slot) {
    const std::uint64_t sub = derive_seed(s, slot);
    out.push_back(slot == convex_slot ? random_convex(grid, sub) : random_ftv(grid, sub));
  }
  return {out[0], out[1], out[2]};
}

inline std::pair<FTV, FTV> both_sides(Side side, const IndexedOp& F, const IndexedOp& V, const std::array<FTV, 3>& s) {
  return side == Side::left ? lhs_rhs_left(F, V, s[0], s[1], s[2]) : lhs_rhs_right(F, V, s[0], s[1], s[2]);
}

/// Runs body(i) for i in [0,count) on up to jobs threads; each index is
/// independent, so the result does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, std::size_t jobs, Body body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([=, &body] {
      for (std::size_t i = w; i < count; i += jobs) body(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace detail

inline void validate_config(const SuiteConfig& config) {
  if (config.trials == 0) throw Error(ErrorKind::invalid_config, "trials must be positive");
  if (config.n < 2) throw Error(ErrorKind::invalid_config, "grid resolution must be at least 2");
  if (!(config.tolerance >= 0.0)) throw Error(ErrorKind::invalid_config, "tolerance must be non-negative");
  if (config.jobs == 0) throw Error(ErrorKind::invalid_config, "jobs must be positive");
}

/// The operators of a suite: F from the config, V from the config or the theorem's default.
inline std::pair<BinaryOp, BinaryOp> suite_operators(const SuiteConfig& config) {
  const Grid grid(config.n);
  const auto defaults = fixtures::suite_defaults(config.theorem);
  const bool fixed_inner = config.theorem == TheoremId::min_max_i || config.theorem == TheoremId::min_max_ii;
  const OperatorSpec& vspec = fixed_inner || !config.V ? defaults.second : *config.V;
  return {build_operator(grid, config.F), build_operator(grid, vspec)};
}

/// Draws config.trials subject triples, evaluates both sides of the theorem's
/// law and aggregates the comparison.
inline SuiteReport run_suite(const SuiteConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  const Grid grid(config.n);
  const auto [F, V] = suite_operators(config);
  if (config.mode == ConvMode::exact && !(F.closed() && V.closed())) {
    throw Error(ErrorKind::suite_rejected, std::string(to_string(config.theorem)) +
                                               ": exact mode requires grid-closed operators");
  }
  validate_hypotheses(config.theorem, F, V);
  const IndexedOp Fi(F, config.mode);
  const IndexedOp Vi(V, config.mode);
  const Side side = theorem_side(config.theorem);

  std::vector<detail::TrialOutcome> outcomes(config.trials);
  detail::parallel_for(config.trials, config.jobs, [&](std::size_t t) {
    const auto subjects = detail::draw_subjects(grid, config.seed, t, side);
    const auto [left, right] = detail::both_sides(side, Fi, Vi, subjects);
    outcomes[t] = {compare(left, right, config.comparison, config.tolerance), t};
  });

  SuiteReport report;
  report.theorem = config.theorem;
  report.n = config.n;
  report.trials = config.trials;
  report.mode = config.mode;
  report.comparison = config.comparison;
  report.tolerance = config.tolerance;
  std::optional<std::size_t> worst_trial;
  for (const auto& o : outcomes) {
    if (o.deviation.pass) ++report.passes;
    else ++report.failures;
    report.violating_indices += o.deviation.violations;
    if (o.deviation.max_deviation > report.max_deviation) {
      report.max_deviation = o.deviation.max_deviation;
      worst_trial = o.trial;
    }
  }
  if (worst_trial) {
    const auto s = detail::draw_subjects(grid, config.seed, *worst_trial, side);
    report.worst = Witness{s[0], s[1], s[2], outcomes[*worst_trial].deviation.worst_index, report.max_deviation,
                           *worst_trial};
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// All subject triples with grades in {0, 1/2, 1} (the convexity-constrained
/// subject restricted to convex ones), for n <= 4.
inline SuiteReport run_exhaustive(const SuiteConfig& config) {
  if (config.n > 4) throw Error(ErrorKind::invalid_config, "exhaustive mode is limited to n <= 4");
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  const Grid grid(config.n);
  const auto [F, V] = suite_operators(config);
  validate_hypotheses(config.theorem, F, V);
  const IndexedOp Fi(F, config.mode);
  const IndexedOp Vi(V, config.mode);
  const Side side = theorem_side(config.theorem);

  std::vector<FTV> all;
  const std::size_t m = grid.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<double> g(m);
    std::size_t c = code;
    for (std::size_t i = 0; i < m; ++i, c /= 3) g[i] = 0.5 * static_cast<double>(c % 3);
    all.emplace_back(grid, std::move(g));
  }
  std::vector<FTV> convex;
  for (const auto& f : all)
    if (is_convex(f)) convex.push_back(f);

  const auto& first = side == Side::left ? convex : all;
  const auto& third = side == Side::left ? all : convex;
  SuiteReport report;
  report.theorem = config.theorem;
  report.n = config.n;
  report.mode = config.mode;
  report.comparison = config.comparison;
  report.tolerance = config.tolerance;
  std::size_t t = 0;
  for (const auto& f : first) {
    for (const auto& g : all) {
      for (const auto& h : third) {
        const auto [left, right] = detail::both_sides(side, Fi, Vi, {f, g, h});
        const Deviation d = compare(left, right, config.comparison, config.tolerance);
        if (d.pass) ++report.passes;
        else ++report.failures;
        report.violating_indices += d.violations;
        if (d.max_deviation > report.max_deviation) {
          report.max_deviation = d.max_deviation;
          report.worst = Witness{f, g, h, d.worst_index, d.max_deviation, t};
        }
        ++t;
      }
    }
  }
  report.trials = t;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Counterexample search

enum class Subject { f, g, h };

inline std::string_view to_string(Subject s) {
  switch (s) {
    case Subject::f: return "f";
    case Subject::g: return "g";
    case Subject::h: return "h";
  }
  return "?";
}

struct SearchConfig {
  Side side = Side::left;
  Subject perturb = Subject::f;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  ConvMode mode = ConvMode::exact;
  double tolerance = 0.0;
  /// Control run: draw the perturbed subject convex instead of non-convex.
  bool convex_only = false;
  /// Rejection-sampling budget per trial for a non-convex subject.
  std::size_t max_draws = 1000;
};

namespace detail {

inline std::size_t slot_of(Subject s) { return static_cast<std::size_t>(s); }

inline std::optional<FTV> draw_non_convex(const Grid& grid, std::uint64_t seed, std::size_t max_draws) {
  for (std::size_t d = 0; d < max_draws; ++d) {
    FTV f = random_sparse_ftv(grid, derive_seed(seed, d));
    if (!is_convex(f)) return f;
  }
  return std::nullopt;
}

inline Deviation evaluate(Side side, const IndexedOp& F, const IndexedOp& V, const std::array<FTV, 3>& s,
                          double tol) {
  const auto [left, right] = both_sides(side, F, V, s);
  return compare(left, right, Comparison::strict, tol);
}

}  // namespace detail

/// Samples triples whose perturbed subject violates convexity and returns the
/// first one breaking strict equality beyond tol, with its support shrunk by
/// greedy grade-zeroing that keeps the violation (and keeps the perturbed
/// subject non-convex, the theorem's convex subject convex).
inline std::optional<Witness> search_counterexample(const BinaryOp& F, const BinaryOp& V, const SearchConfig& cfg) {
  require_same_grid(F.grid(), V.grid(), "search_counterexample");
  if (cfg.trials == 0) throw Error(ErrorKind::invalid_config, "trials must be positive");
  const Grid& grid = F.grid();
  const IndexedOp Fi(F, cfg.mode);
  const IndexedOp Vi(V, cfg.mode);
  const std::size_t convex_slot = cfg.side == Side::left ? 0 : 2;
  const std::size_t perturbed = detail::slot_of(cfg.perturb);

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = derive_seed(cfg.seed, t);
    std::vector<FTV> subjects;
    bool drawn = true;
    for (std::size_t slot = 0; slot < 3; ++slot) {
      const std::uint64_t sub = derive_seed(s, slot);
      if (slot == perturbed) {
        if (cfg.convex_only) {
          subjects.push_back(random_convex(grid, sub));
        } else if (auto f = detail::draw_non_convex(grid, sub, cfg.max_draws)) {
          subjects.push_back(*f);
        } else {
          drawn = false;
          break;
        }
      } else if (slot == convex_slot) {
        subjects.push_back(random_convex(grid, sub));
      } else {
        subjects.push_back(random_sparse_ftv(grid, sub));
      }
    }
    if (!drawn) continue;
    std::array<FTV, 3> triple{subjects[0], subjects[1], subjects[2]};
    Deviation d = detail::evaluate(cfg.side, Fi, Vi, triple, cfg.tolerance);
    if (d.pass) continue;

    // Greedy support minimization.
    auto admissible = [&](const std::array<FTV, 3>& cand) {
      for (std::size_t slot = 0; slot < 3; ++slot) {
        if (slot == perturbed && !cfg.convex_only && is_convex(cand[slot])) return false;
        if (slot == convex_slot && slot != perturbed && !is_convex(cand[slot])) return false;
        if (slot == convex_slot && cfg.convex_only && !is_convex(cand[slot])) return false;
      }
      return true;
    };
    for (std::size_t slot = 0; slot < 3; ++slot) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (triple[slot][i] == 0.0) continue;
        auto cand = triple;
        cand[slot] = cand[slot].with(i, 0.0);
        if (!admissible(cand)) continue;
        const Deviation cd = detail::evaluate(cfg.side, Fi, Vi, cand, cfg.tolerance);
        if (!cd.pass) {
          triple = cand;
          d = cd;
        }
      }
    }
    return Witness{triple[0], triple[1], triple[2], d.worst_index, d.max_deviation, t};
  }
  return std::nullopt;
}

}  // namespace t2alg
