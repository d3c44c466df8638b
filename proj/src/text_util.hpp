#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "otimapp/graph.hpp"

namespace otimapp::detail {

// Splits on '\n', dropping a trailing '\r' from each line.
inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    pos = nl + 1;
  }
  return out;
}

inline std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t k = line.find(sep, pos);
    if (k == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, k - pos));
    pos = k + 1;
  }
}

inline long to_long(std::string_view tok, int lineno) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw ParseError("bad integer '" + std::string(tok) + "'", lineno);
  }
  return v;
}

}  // namespace otimapp::detail
