#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>

#include "t2alg/binary_op.hpp"

namespace t2alg {

/// The three basic continuous t-norms and their dual t-conorms.
enum class BasicKind { TM, TP, TL, SM, SP, SL };

inline std::string_view to_string(BasicKind kind) {
  switch (kind) {
    case BasicKind::TM: return "TM";
    case BasicKind::TP: return "TP";
    case BasicKind::TL: return "TL";
    case BasicKind::SM: return "SM";
    case BasicKind::SP: return "SP";
    case BasicKind::SL: return "SL";
  }
  return "?";
}

inline std::optional<BasicKind> parse_basic_kind(std::string_view s) {
  for (BasicKind k : {BasicKind::TM, BasicKind::TP, BasicKind::TL, BasicKind::SM, BasicKind::SP,
                      BasicKind::SL}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

inline bool is_tnorm(BasicKind kind) {
  return kind == BasicKind::TM || kind == BasicKind::TP || kind == BasicKind::TL;
}

inline double basic_value(BasicKind kind, double x, double y) {
  switch (kind) {
    case BasicKind::TM: return std::min(x, y);
    case BasicKind::TP: return x * y;
    case BasicKind::TL: return std::max(x + y - 1.0, 0.0);
    case BasicKind::SM: return std::max(x, y);
    case BasicKind::SP: return x + y - x * y;
    case BasicKind::SL: return std::min(x + y, 1.0);
  }
  return 0.0;
}

inline RealFn basic_fn(BasicKind kind) {
  return [kind](double x, double y) { return basic_value(kind, x, y); };
}

inline BinaryOp basic_op(const Grid& grid, BasicKind kind) {
  return BinaryOp::tabulate(grid, basic_fn(kind), OpMeta{std::string(to_string(kind)), {}});
}

}  // namespace t2alg
