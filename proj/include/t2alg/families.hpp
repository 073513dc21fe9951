#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "t2alg/basic.hpp"
#include "t2alg/generator.hpp"
#include "t2alg/operator_spec.hpp"
#include "t2alg/rescale.hpp"

namespace t2alg {

inline RealFn operator_function(const Grid& grid, const OperatorSpec& spec);

namespace detail {

inline constexpr double kEps = 1e-12;
inline constexpr double kBlockTolerance = 1e-9;

inline bool in(double x, double lo, double hi) { return x >= lo - kEps && x <= hi + kEps; }
inline bool in_square(double x, double y, double lo, double hi) { return in(x, lo, hi) && in(y, lo, hi); }
inline bool degenerate(double lo, double hi) { return hi - lo <= kEps; }
inline bool is_one(double x) { return x >= 1.0 - kEps; }
inline bool is_zero(double x) { return x <= kEps; }

/// Which neutral-element condition a block slot imposes on its operator.
enum class Role {
  conorm,      ///< 0 is a (two-sided) neutral element
  norm,        ///< 1 is a (two-sided) neutral element
  right_zero,  ///< G(x,0) = x
  right_one,   ///< G(x,1) = x
  left_zero,   ///< G(0,y) = y on a sub-range, checked by the caller
  left_one,    ///< G(1,y) = y on a sub-range, checked by the caller
};

inline bool zero_role(Role r) { return r == Role::conorm || r == Role::right_zero || r == Role::left_zero; }

[[noreturn]] inline void violation(const OperatorSpec& spec, const std::string& what) {
  throw Error(ErrorKind::spec_violation, std::string(to_string(spec.family)) + " " + what);
}

inline void check_neutral(const OperatorSpec& spec, const std::string& name, const RealFn& fn,
                          const Grid& grid, Role role) {
  if (role == Role::left_zero || role == Role::left_one) return;
  const double id = zero_role(role) ? 0.0 : 1.0;
  const bool two_sided = role == Role::conorm || role == Role::norm;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i);
    const bool ok = std::abs(fn(x, id) - x) <= kBlockTolerance &&
                    (!two_sided || std::abs(fn(id, x) - x) <= kBlockTolerance);
    if (!ok) {
      violation(spec, "requires block " + name + " to have " + (two_sided ? "" : "right side ") +
                          "neutral element " + (id == 0.0 ? "0" : "1"));
    }
  }
}

/// Resolves a block slot to a real function on [0,1]², validating its role.
inline RealFn block_fn(const Grid& grid, const OperatorSpec& spec, const std::string& name, Role role) {
  auto it = spec.blocks.find(name);
  if (it == spec.blocks.end()) {
    throw Error(ErrorKind::missing_block,
                std::string(to_string(spec.family)) + " requires block." + name);
  }
  const Block& block = it->second;
  if (const auto* kind = std::get_if<BasicKind>(&block.source)) {
    if (is_tnorm(*kind) == zero_role(role)) {
      violation(spec, "requires block " + name + " to be a " +
                          (zero_role(role) ? "t-conorm" : "t-norm") + ", got " +
                          std::string(to_string(*kind)));
    }
    return basic_fn(*kind);
  }
  if (std::holds_alternative<Block::FromGenerator>(block.source)) {
    if (!spec.generator) {
      throw Error(ErrorKind::missing_block, "block." + name + "=gen requires a generator");
    }
    const Generator s = spec.generator->on(grid);
    return zero_role(role) ? additive_tconorm_fn(s) : multiplicative_tnorm_fn(s);
  }
  RealFn fn;
  if (const auto* nested = std::get_if<std::shared_ptr<const OperatorSpec>>(&block.source)) {
    fn = operator_function(grid, **nested);
  } else {
    fn = std::get<std::shared_ptr<const BinaryOp>>(block.source)->formula();
  }
  check_neutral(spec, name, fn, grid, role);
  return fn;
}

/// Block slot with a fallback when absent.
inline RealFn block_or(const Grid& grid, const OperatorSpec& spec, const std::string& name, Role role,
                       RealFn fallback) {
  if (!spec.blocks.count(name)) return fallback;
  return block_fn(grid, spec, name, role);
}

/// Strict/nilpotent slots of the second lemma case: an explicit block, or
/// the shared generator when no block is given.
inline RealFn generated_block(const Grid& grid, const OperatorSpec& spec, const std::string& name, Role role) {
  auto it = spec.blocks.find(name);
  if (it != spec.blocks.end()) {
    if (const auto* kind = std::get_if<BasicKind>(&it->second.source)) {
      const BasicKind wanted = zero_role(role) ? BasicKind::SL : BasicKind::TP;
      if (*kind != wanted) {
        violation(spec, std::string("requires block ") + name + " to be " +
                            (zero_role(role) ? "a nilpotent t-conorm (SL or gen)"
                                             : "a strict t-norm (TP or gen)"));
      }
    }
    return block_fn(grid, spec, name, role);
  }
  if (!spec.generator) {
    throw Error(ErrorKind::missing_block, std::string(to_string(spec.family)) + " requires block." +
                                              name + " or a generator");
  }
  const Generator s = spec.generator->on(grid);
  return zero_role(role) ? additive_tconorm_fn(s) : multiplicative_tnorm_fn(s);
}

struct ParamRule {
  std::set<char> required;
  std::set<char> optional;
};

inline ParamRule param_rule(Family f) {
  switch (f) {
    case Family::basic_tnorm:
    case Family::basic_tconorm:
    case Family::custom_table: return {{}, {}};
    case Family::idempotent_uninorm:
    case Family::underline_uninorm:
    case Family::overline_uninorm: return {{'e'}, {}};
    case Family::uninorm_disj_i:
    case Family::uninorm_disj_iii:
    case Family::uninorm_conj_i:
    case Family::uninorm_conj_iii: return {{'e'}, {'k'}};
    case Family::uninorm_disj_ii:
    case Family::uninorm_conj_ii: return {{'e', 'a'}, {'k'}};
    case Family::nullnorm_disj_i:
    case Family::nullnorm_disj_iii:
    case Family::nullnorm_conj_i:
    case Family::nullnorm_conj_iii: return {{'e', 'k'}, {}};
    case Family::nullnorm_disj_ii:
    case Family::nullnorm_conj_ii: return {{'e', 'k', 'a'}, {}};
    case Family::zk_tconorm_ii: return {{'a'}, {'k'}};
    case Family::zk_F_tconorm: return {{'k'}, {'a'}};
    case Family::zk_F_umax:
    case Family::zk_F_umin: return {{'e', 'k'}, {'a'}};
  }
  return {};
}

struct Params {
  double e = 0.0;
  double k = 0.0;
  double a = 0.0;
  bool has_e = false;
  bool has_k = false;
  bool has_a = false;
};

inline Params check_params(const OperatorSpec& spec) {
  const ParamRule rule = param_rule(spec.family);
  const std::pair<char, const std::optional<double>*> all[] = {{'e', &spec.e}, {'k', &spec.k}, {'a', &spec.a}};
  Params p;
  for (const auto& [name, value] : all) {
    const bool allowed = rule.required.count(name) || rule.optional.count(name);
    if (value->has_value() && !allowed) violation(spec, std::string("does not take parameter ") + name);
    if (!value->has_value() && rule.required.count(name)) violation(spec, std::string("requires parameter ") + name);
    if (value->has_value() && !(**value >= 0.0 && **value <= 1.0)) {
      violation(spec, std::string("requires ") + name + " in [0,1]");
    }
  }
  if (spec.e) { p.e = *spec.e; p.has_e = true; }
  if (spec.k) { p.k = *spec.k; p.has_k = true; }
  if (spec.a) { p.a = *spec.a; p.has_a = true; }
  if (p.has_e && !(p.e > 0.0 && p.e < 1.0)) violation(spec, "requires e in (0,1)");
  if (p.has_k && !(p.k > 0.0 && p.k < 1.0)) violation(spec, "requires k in (0,1)");
  if (p.has_a && !(p.a < 1.0)) violation(spec, "requires a<1");
  return p;
}

inline void require(bool cond, const OperatorSpec& spec, const std::string& condition) {
  if (!cond) violation(spec, "requires " + condition);
}

/// Ordinal-sum default for the neutral-1 block on [low,1]: rescaled product on
/// [a,1]² when a is given, minimum elsewhere.
inline RealFn ordinal_sum_default(double a, bool has_a) {
  if (!has_a) return basic_fn(BasicKind::TM);
  RealFn product = rescaled(basic_fn(BasicKind::TP), a, 1.0);
  return [a, product](double x, double y) {
    if (in_square(x, y, a, 1.0)) return product(x, y);
    return std::min(x, y);
  };
}

/// Neutral-1 block of a Z_k family embedded on [low,1]²; a user block is
/// rescaled into the square and, when a is given, must equal the rescaled
/// product on [a,1]².
inline RealFn zk_upper_block(const Grid& grid, const OperatorSpec& spec, const std::string& name,
                             double low, const Params& p) {
  if (!spec.blocks.count(name)) return ordinal_sum_default(p.a, p.has_a);
  RealFn user = rescaled(block_fn(grid, spec, name, Role::norm), low, 1.0);
  if (p.has_a) {
    RealFn product = rescaled(basic_fn(BasicKind::TP), p.a, 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.point(i);
        const double y = grid.point(j);
        if (!in_square(x, y, p.a, 1.0)) continue;
        if (std::abs(user(x, y) - product(x, y)) > kBlockTolerance) {
          violation(spec, "requires " + name + "=T_P on [a,1]^2");
        }
      }
    }
  }
  return user;
}

inline RealFn family_function(const Grid& grid, const OperatorSpec& spec) {
  const Params p = check_params(spec);
  const double e = p.e;
  const double k = p.k;
  const double a = p.a;
  switch (spec.family) {
    case Family::basic_tnorm: return block_fn(grid, spec, "T", Role::norm);
    case Family::basic_tconorm: return block_fn(grid, spec, "S", Role::conorm);

    case Family::custom_table: {
      if (!spec.table) throw Error(ErrorKind::missing_block, "custom-table requires table=<file>");
      return spec.table->formula();
    }

    case Family::idempotent_uninorm: {
      const BoundarySource g = spec.gfun.value_or(BoundarySource{});
      std::vector<double> samples(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = g(grid.point(i), e);
      for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i] > samples[i - 1] + kEps) {
          throw Error(ErrorKind::invalid_boundary, "boundary function g must be non-increasing");
        }
      }
      if (std::abs(g(e, e) - e) > kBlockTolerance) {
        throw Error(ErrorKind::invalid_boundary, "boundary function g must satisfy g(e)=e");
      }
      return [g, e](double x, double y) {
        if (in_square(x, y, 0.0, e)) return std::min(x, y);
        if (in_square(x, y, e, 1.0)) return std::max(x, y);
        const double gx = g(x, e);
        if (y < gx - kEps) return std::min(x, y);
        if (y > gx + kEps) return std::max(x, y);
        const double ggx = g(gx, e);
        if (x > ggx + kEps) return std::max(x, y);
        // x < g(g(x)) and the ambiguous set x = g(g(x)) both take the minimum.
        return std::min(x, y);
      };
    }

    case Family::overline_uninorm:
    case Family::uninorm_disj_i: {
      if (p.has_k) require(e < k, spec, "e<k");
      return [e](double x, double y) {
        return in_square(x, y, 0.0, e) ? std::min(x, y) : std::max(x, y);
      };
    }

    case Family::underline_uninorm:
    case Family::uninorm_conj_i: {
      if (p.has_k) require(k < e, spec, "e>k");
      return [e](double x, double y) {
        return in_square(x, y, e, 1.0) ? std::max(x, y) : std::min(x, y);
      };
    }

    case Family::uninorm_disj_ii: {
      require(e < a, spec, "e<a");
      if (p.has_k) require(e < k && k <= a, spec, "e<k<=a");
      const RealFn s = rescaled(generated_block(grid, spec, "S", Role::conorm), a, 1.0);
      return [e, a, s](double x, double y) {
        if (in_square(x, y, 0.0, e)) return std::min(x, y);
        if (in_square(x, y, a, 1.0)) return s(x, y);
        return std::max(x, y);
      };
    }

    case Family::uninorm_conj_ii: {
      require(e <= a, spec, "e<=a");
      if (p.has_k) require(k < e, spec, "e>k");
      const RealFn s = rescaled(generated_block(grid, spec, "S", Role::conorm), a, 1.0);
      return [e, a, s](double x, double y) {
        // The minimum region is taken half-open in min(x,y) so that e stays neutral.
        if (std::min(x, y) < e - kEps) return std::min(x, y);
        if (in_square(x, y, a, 1.0)) return s(x, y);
        return std::max(x, y);
      };
    }

    case Family::uninorm_disj_iii: {
      if (p.has_k) require(k < e, spec, "e>k");
      return [e](double x, double y) {
        if (in_square(x, y, e, 1.0)) return std::max(x, y);
        if (is_one(x) || is_one(y)) return 1.0;
        return std::min(x, y);
      };
    }

    case Family::uninorm_conj_iii: {
      if (p.has_k) require(e < k, spec, "e<k");
      return [e](double x, double y) {
        if (in_square(x, y, 0.0, e)) return std::min(x, y);
        if (in_square(x, y, e, 1.0)) return std::max(x, y);
        if ((is_one(x) && !is_zero(y)) || (!is_zero(x) && is_one(y))) return 1.0;
        return std::min(x, y);
      };
    }

    case Family::nullnorm_disj_i:
    case Family::nullnorm_conj_iii: {
      require(e < k, spec, "e<k");
      const RealFn s1 = rescaled(block_fn(grid, spec, "S1", Role::conorm), 0.0, e);
      const RealFn s2 = rescaled(block_fn(grid, spec, "S2", Role::conorm), e, k);
      const RealFn t = rescaled(block_fn(grid, spec, "T", Role::norm), k, 1.0);
      return [e, k, s1, s2, t](double x, double y) {
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        if (in_square(x, y, 0.0, e)) return s1(x, y);
        if (in_square(x, y, e, k)) return s2(x, y);
        if (in_square(x, y, k, 1.0)) return t(x, y);
        if (lo <= e + kEps && e <= hi + kEps && hi <= k + kEps) return hi;
        return k;
      };
    }

    case Family::nullnorm_disj_ii: {
      require(e < k && k <= a, spec, "e<k<=a");
      const RealFn s1 = rescaled(block_fn(grid, spec, "S1", Role::conorm), 0.0, e);
      const RealFn s2 = rescaled(block_fn(grid, spec, "S2", Role::conorm), e, k);
      const bool middle = !degenerate(k, a);
      const RealFn t1 = middle ? rescaled(block_fn(grid, spec, "T1", Role::norm), k, a) : RealFn{};
      const RealFn t = rescaled(generated_block(grid, spec, "T", Role::norm), a, 1.0);
      return [e, k, a, middle, s1, s2, t1, t](double x, double y) {
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        if (in_square(x, y, 0.0, e)) return s1(x, y);
        if (in_square(x, y, e, k)) return s2(x, y);
        if (middle && in_square(x, y, k, a)) return t1(x, y);
        if (in_square(x, y, a, 1.0)) return t(x, y);
        if (lo <= e + kEps && e <= hi + kEps && hi <= k + kEps) return hi;
        if (k <= lo + kEps && lo <= a + kEps && a <= hi + kEps) return lo;
        return k;
      };
    }

    case Family::nullnorm_disj_iii:
    case Family::nullnorm_conj_i: {
      require(k < e, spec, "e>k");
      const RealFn s1 = rescaled(block_fn(grid, spec, "S1", Role::conorm), 0.0, k);
      const RealFn t1 = rescaled(block_fn(grid, spec, "T1", Role::norm), k, e);
      const RealFn t2 = rescaled(block_fn(grid, spec, "T2", Role::norm), e, 1.0);
      return [e, k, s1, t1, t2](double x, double y) {
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        if (in_square(x, y, 0.0, k)) return s1(x, y);
        if (in_square(x, y, k, e)) return t1(x, y);
        if (in_square(x, y, e, 1.0)) return t2(x, y);
        if (lo <= k + kEps && k <= hi + kEps) return k;
        return lo;
      };
    }

    case Family::nullnorm_conj_ii: {
      require(k < e && e <= a, spec, "k<e<=a");
      const RealFn s1 = rescaled(block_fn(grid, spec, "S1", Role::conorm), 0.0, k);
      const RealFn t1 = rescaled(block_fn(grid, spec, "T1", Role::norm), k, e);
      const bool middle = !degenerate(e, a);
      const RealFn t2 = middle ? rescaled(block_fn(grid, spec, "T2", Role::norm), e, a) : RealFn{};
      const RealFn t = rescaled(generated_block(grid, spec, "T", Role::norm), a, 1.0);
      return [e, k, a, middle, s1, t1, t2, t](double x, double y) {
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        if (in_square(x, y, 0.0, k)) return s1(x, y);
        if (in_square(x, y, k, e)) return t1(x, y);
        if (middle && in_square(x, y, e, a)) return t2(x, y);
        if (in_square(x, y, a, 1.0)) return t(x, y);
        if (lo <= k + kEps && k <= hi + kEps) return k;
        return lo;
      };
    }

    case Family::zk_tconorm_ii: {
      if (p.has_k) require(k <= a, spec, "a in [k,1)");
      const RealFn s = rescaled(basic_fn(BasicKind::SL), a, 1.0);
      return [a, s](double x, double y) {
        return in_square(x, y, a, 1.0) ? s(x, y) : std::max(x, y);
      };
    }

    case Family::zk_F_tconorm: {
      if (p.has_a) require(k <= a, spec, "a in [k,1)");
      const RealFn A = rescaled(block_or(grid, spec, "A", Role::conorm, basic_fn(BasicKind::SM)), 0.0, k);
      const RealFn B = zk_upper_block(grid, spec, "B", k, p);
      return [k, A, B](double x, double y) {
        if (in_square(x, y, 0.0, k)) return A(x, y);
        if (in_square(x, y, k, 1.0)) return B(x, y);
        return k;
      };
    }

    case Family::zk_F_umax: {
      require(e < k, spec, "e<k");
      if (p.has_a) require(k <= a, spec, "a in [k,1)");
      const RealFn A1 = rescaled(block_or(grid, spec, "A1", Role::conorm, basic_fn(BasicKind::SM)), 0.0, e);
      const RealFn A2 = rescaled(block_or(grid, spec, "A2", Role::right_zero, basic_fn(BasicKind::SM)), e, k);
      // A3 acts on the rectangle [0,e]x[e,k] in its own coordinates.
      const RealFn A3 = spec.blocks.count("A3") ? block_fn(grid, spec, "A3", Role::left_zero)
                                                : basic_fn(BasicKind::SM);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double y = grid.point(j);
        if (in(y, e, k) && std::abs(A3(0.0, y) - y) > kBlockTolerance) {
          violation(spec, "requires 0 to be a left side neutral element of A3");
        }
      }
      const RealFn B = zk_upper_block(grid, spec, "B", k, p);
      return [e, k, A1, A2, A3, B](double x, double y) {
        if (in_square(x, y, 0.0, e)) return A1(x, y);
        if (in_square(x, y, e, k)) return A2(x, y);
        if (in(x, 0.0, e) && in(y, e, k)) return A3(x, y);
        if (in(x, e, k) && in(y, 0.0, e)) return std::max(x, y);
        if (in_square(x, y, k, 1.0)) return B(x, y);
        return k;
      };
    }

    case Family::zk_F_umin: {
      require(k < e, spec, "k<e");
      if (p.has_a) require(e <= a, spec, "a in [e,1)");
      const RealFn A = rescaled(block_or(grid, spec, "A", Role::conorm, basic_fn(BasicKind::SM)), 0.0, k);
      const RealFn B1 = rescaled(block_or(grid, spec, "B1", Role::right_one, basic_fn(BasicKind::TM)), k, e);
      // B3 acts on the rectangle [e,1]x[k,e] in its own coordinates.
      const RealFn B3 = spec.blocks.count("B3") ? block_fn(grid, spec, "B3", Role::left_one)
                                                : basic_fn(BasicKind::TM);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double y = grid.point(j);
        if (in(y, k, e) && std::abs(B3(1.0, y) - y) > kBlockTolerance) {
          violation(spec, "requires 1 to be a left side neutral element of B3");
        }
      }
      const RealFn B2 = zk_upper_block(grid, spec, "B2", e, p);
      return [e, k, A, B1, B2, B3](double x, double y) {
        if (in_square(x, y, 0.0, k)) return A(x, y);
        if (in_square(x, y, k, e)) return B1(x, y);
        if (in(x, e, 1.0) && in(y, k, e)) return B3(x, y);
        if (in(x, k, e) && in(y, e, 1.0)) return std::min(x, y);
        if (in_square(x, y, e, 1.0)) return B2(x, y);
        return k;
      };
    }
  }
  throw Error(ErrorKind::spec_violation, "unsupported family");
}

}  // namespace detail

/// Real-valued formula of the operator described by spec.
inline RealFn operator_function(const Grid& grid, const OperatorSpec& spec) {
  RealFn fn = detail::family_function(grid, spec);
  if (spec.orientation == Orientation::right) {
    return [fn = std::move(fn)](double x, double y) { return fn(y, x); };
  }
  return fn;
}

inline OpMeta spec_meta(const OperatorSpec& spec) {
  OpMeta meta{std::string(to_string(spec.family)), {}};
  for (const auto& [key, spelled] : spec.text) meta.params[key] = spelled;
  for (const auto& [name, block] : spec.blocks) meta.params["block." + name] = block.label;
  if (spec.generator) meta.params["generator"] = spec.generator->label;
  if (spec.gfun) meta.params["gfun"] = spec.gfun->label;
  if (spec.orientation == Orientation::right) meta.params["orientation"] = "right";
  return meta;
}

/// Tabulates the operator described by spec on grid.
inline BinaryOp build_operator(const Grid& grid, const OperatorSpec& spec) {
  return BinaryOp::tabulate(grid, operator_function(grid, spec), spec_meta(spec));
}

/// Idempotent uninorm from a boundary function tabulated on the grid points.
inline BinaryOp idempotent_uninorm(const Grid& grid, double e, std::span<const double> gfun) {
  if (gfun.size() != grid.size()) {
    throw Error(ErrorKind::grid_mismatch, "boundary function must be tabulated on the grid");
  }
  OperatorSpec spec;
  spec.family = Family::idempotent_uninorm;
  spec.set("e", e, spell_parameter(e));
  BoundarySource g;
  g.kind = BoundarySource::Kind::samples;
  g.samples.assign(gfun.begin(), gfun.end());
  g.label = "table";
  spec.gfun = std::move(g);
  return build_operator(grid, spec);
}

}  // namespace t2alg
