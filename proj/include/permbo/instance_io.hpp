#pragma once

// Readers for QAPLIB and the TSPLIB subset used by the benchmarks
// (EUC_2D coordinates and EXPLICIT FULL_MATRIX weights).

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "permbo/error.hpp"
#include "permbo/problems.hpp"

namespace permbo {

namespace io {

struct Token {
  std::string_view text;
  std::size_t line = 0;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(c)) {
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({text.substr(start, i - start), line});
    }
  }
  return out;
}

inline std::string describe(const Token& t) {
  std::string shown(t.text.substr(0, 32));
  for (char& ch : shown)
    if (!std::isprint(static_cast<unsigned char>(ch))) ch = '?';
  return "line " + std::to_string(t.line) + ", token '" + shown + "'";
}

inline double to_number(const Token& t) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw Error(ErrorKind::ParseError, "expected a number at " + describe(t));
  return v;
}

inline std::size_t to_size(const Token& t) {
  const double v = to_number(t);
  if (v < 1 || v != static_cast<double>(static_cast<long long>(v)) || v > 1e6)
    throw Error(ErrorKind::ParseError, "expected a positive integer dimension at " + describe(t));
  return static_cast<std::size_t>(v);
}

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace io

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// QAPLIB: n, then A (n*n, row-major), then B (n*n, row-major).
inline QapInstance parse_qaplib(std::string_view text) {
  const auto tokens = io::tokenize(text);
  if (tokens.empty()) throw Error(ErrorKind::ParseError, "empty QAPLIB input");
  const std::size_t n = io::to_size(tokens[0]);
  const std::size_t expected = 1 + 2 * n * n;
  if (tokens.size() != expected)
    throw Error(ErrorKind::DimensionMismatch, "QAPLIB n=" + std::to_string(n) + " needs " +
                                                  std::to_string(2 * n * n) + " matrix entries, found " +
                                                  std::to_string(tokens.size() - 1));
  QapInstance q;
  q.n = n;
  q.a.assign(n, std::vector<double>(n));
  q.b.assign(n, std::vector<double>(n));
  std::size_t k = 1;
  for (auto* m : {&q.a, &q.b})
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (*m)[i][j] = io::to_number(tokens[k++]);
  return q;
}

/// TSPLIB header keys followed by NODE_COORD_SECTION (EUC_2D) or
/// EDGE_WEIGHT_SECTION (EXPLICIT, FULL_MATRIX). Node ids are 1-based.
inline TspInstance parse_tsplib(std::string_view text) {
  std::optional<std::size_t> dimension;
  std::string weight_type, weight_format;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::string section;

  auto next_line = [&](std::string_view& out) {
    if (pos >= text.size()) return false;
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    out = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  while (next_line(line)) {
    const std::string t = io::trim(line);
    if (t.empty()) continue;
    const std::string u = io::upper(t);
    if (u == "NODE_COORD_SECTION" || u == "EDGE_WEIGHT_SECTION") {
      section = u;
      break;
    }
    if (u == "EOF") break;
    const auto colon = t.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 'KEY : VALUE'");
    const std::string key = io::upper(io::trim(std::string_view(t).substr(0, colon)));
    const std::string value = io::trim(std::string_view(t).substr(colon + 1));
    if (key == "DIMENSION") {
      dimension = io::to_size(io::Token{value, line_no});
    } else if (key == "EDGE_WEIGHT_TYPE") {
      weight_type = io::upper(value);
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      weight_format = io::upper(value);
    } else if (key == "TYPE") {
      if (io::upper(value) != "TSP")
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": unsupported TYPE '" + value + "'");
    }
    // NAME, COMMENT and unknown keys are ignored.
  }

  if (!dimension) throw Error(ErrorKind::ParseError, "missing DIMENSION");
  if (section.empty()) throw Error(ErrorKind::ParseError, "missing NODE_COORD_SECTION or EDGE_WEIGHT_SECTION");
  const std::size_t n = *dimension;

  const std::size_t body_start_line = line_no;
  const auto tokens = io::tokenize(text.substr(std::min(pos, text.size())));
  std::vector<io::Token> body;
  for (auto tok : tokens) {
    tok.line += body_start_line;
    if (io::upper(std::string(tok.text)) == "EOF") break;
    body.push_back(tok);
  }

  if (section == "NODE_COORD_SECTION") {
    if (weight_type != "EUC_2D")
      throw Error(ErrorKind::ParseError, "unsupported EDGE_WEIGHT_TYPE '" + weight_type + "' for coordinates");
    if (body.size() != 3 * n)
      throw Error(ErrorKind::DimensionMismatch, "DIMENSION " + std::to_string(n) + " needs " +
                                                    std::to_string(n) + " coordinate lines, found " +
                                                    std::to_string(body.size()) + " tokens");
    std::vector<Point2> pts(n);
    std::vector<bool> seen(n, false);
    for (std::size_t k = 0; k < n; ++k) {
      const auto id = io::to_size(body[3 * k]);
      if (id > n || seen[id - 1])
        throw Error(ErrorKind::ParseError, "bad or repeated node id at " + io::describe(body[3 * k]));
      seen[id - 1] = true;
      pts[id - 1] = {io::to_number(body[3 * k + 1]), io::to_number(body[3 * k + 2])};
    }
    return TspInstance::from_coords(std::move(pts));
  }

  if (weight_type != "EXPLICIT" || weight_format != "FULL_MATRIX")
    throw Error(ErrorKind::ParseError, "EDGE_WEIGHT_SECTION supported only for EXPLICIT FULL_MATRIX");
  if (body.size() != n * n)
    throw Error(ErrorKind::DimensionMismatch, "FULL_MATRIX of dimension " + std::to_string(n) + " needs " +
                                                  std::to_string(n * n) + " entries, found " +
                                                  std::to_string(body.size()));
  Matrix d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = io::to_number(body[i * n + j]);
  try {
    return TspInstance::from_matrix(std::move(d));
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace permbo
