#pragma once

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "t2alg/binary_op.hpp"
#include "t2alg/ftv.hpp"

namespace t2alg::io {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_real(std::string_view s, const std::string& where) {
  s = trim(s);
  std::string buf(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE) {
    throw Error(ErrorKind::parse, where + ": not a number: '" + buf + "'");
  }
  return v;
}

/// Parses "p/q" or a decimal literal.
inline double parse_rational(std::string_view s, const std::string& where) {
  s = trim(s);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_real(s, where);
  const double p = parse_real(s.substr(0, slash), where);
  const double q = parse_real(s.substr(slash + 1), where);
  if (q == 0.0) throw Error(ErrorKind::parse, where + ": zero denominator");
  return p / q;
}

inline std::size_t parse_resolution_line(std::string_view line, const std::string& where) {
  line = trim(line);
  if (line.substr(0, 2) != "n=") throw Error(ErrorKind::parse, where + ": expected 'n=<resolution>'");
  const auto digits = trim(line.substr(2));
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw Error(ErrorKind::parse, where + ": bad resolution '" + std::string(digits) + "'");
  }
  return n;
}

inline std::string format_real(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << content;
}

inline std::vector<std::string_view> content_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

/// Operator table: "n=<resolution>" then n+1 rows of n+1 values, 12 significant digits.
inline std::string format_table(const BinaryOp& op) {
  std::string out = "n=" + std::to_string(op.grid().resolution()) + "\n";
  for (std::size_t i = 0; i < op.size(); ++i) {
    for (std::size_t j = 0; j < op.size(); ++j) {
      if (j) out += ',';
      out += format_real(op.at(i, j), 12);
    }
    out += '\n';
  }
  return out;
}

inline BinaryOp parse_table(std::string_view text, OpMeta meta = {"custom-table", {}}) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw Error(ErrorKind::parse, "line 1: empty operator table");
  const Grid grid(parse_resolution_line(lines[0], "line 1"));
  if (lines.size() != grid.size() + 1) {
    throw Error(ErrorKind::parse, "operator table needs " + std::to_string(grid.size()) +
                                      " rows, found " + std::to_string(lines.size() - 1));
  }
  std::vector<double> values;
  values.reserve(grid.size() * grid.size());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string where = "line " + std::to_string(r + 1);
    const auto cells = split(lines[r], ',');
    if (cells.size() != grid.size()) {
      throw Error(ErrorKind::parse, where + ": expected " + std::to_string(grid.size()) + " values");
    }
    for (auto c : cells) values.push_back(parse_real(c, where));
  }
  return BinaryOp::from_table(grid, std::move(values), std::move(meta));
}

/// Fuzzy truth value: "n=<resolution>" then one line of n+1 grades (round-trip precision).
inline std::string format_ftv(const FTV& f) {
  std::string out = "n=" + std::to_string(f.grid().resolution()) + "\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += ',';
    out += format_real(f[i], 17);
  }
  out += '\n';
  return out;
}

inline FTV parse_ftv(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.size() != 2) throw Error(ErrorKind::parse, "fuzzy truth value file needs exactly 2 lines");
  const Grid grid(parse_resolution_line(lines[0], "line 1"));
  std::vector<double> grades;
  for (auto c : split(lines[1], ',')) grades.push_back(parse_real(c, "line 2"));
  if (grades.size() != grid.size()) {
    throw Error(ErrorKind::parse, "line 2: expected " + std::to_string(grid.size()) + " grades");
  }
  return FTV(grid, std::move(grades));
}

inline BinaryOp load_table(const std::string& path) {
  return parse_table(read_file(path), OpMeta{"custom-table", {{"table", path}}});
}

inline FTV load_ftv(const std::string& path) { return parse_ftv(read_file(path)); }

inline void save_table(const std::string& path, const BinaryOp& op) { write_file(path, format_table(op)); }

inline void save_ftv(const std::string& path, const FTV& f) { write_file(path, format_ftv(f)); }

}  // namespace t2alg::io
