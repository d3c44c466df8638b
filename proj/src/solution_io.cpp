#include <sstream>

#include "otimapp/solver.hpp"
#include "text_util.hpp"

namespace otimapp {

std::string serialize_solution(const Solution& paths) {
  std::ostringstream out;
  out << "otimapp-sol v1 n=" << paths.size() << '\n';
  for (std::size_t i = 0; i < paths.size(); ++i) {
    out << i << ": ";
    for (std::size_t t = 0; t < paths[i].size(); ++t) out << (t ? "," : "") << paths[i][t];
    out << '\n';
  }
  return out.str();
}

Solution parse_solution(std::string_view text) {
  using detail::to_long;
  auto lines = detail::lines_of(text);
  const std::string_view magic = "otimapp-sol v1 n=";
  if (lines.empty() || lines[0].rfind(magic, 0) != 0) {
    throw ParseError("expected 'otimapp-sol v1 n=<count>'", 1);
  }
  long n = to_long(lines[0].substr(magic.size()), 1);
  if (n < 0) throw ParseError("negative agent count", 1);
  Solution paths(static_cast<std::size_t>(n));
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  long rows = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const int lineno = static_cast<int>(k) + 1;
    std::string_view line = lines[k];
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected '<agent>: v0,v1,...'", lineno);
    long a = to_long(line.substr(0, colon), lineno);
    if (a < 0 || a >= n) throw ParseError("agent index out of range", lineno);
    if (seen[a]) throw ParseError("duplicate agent index", lineno);
    seen[a] = 1;
    std::string_view rest = line.substr(colon + 1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    if (rest.empty()) throw ParseError("empty path", lineno);
    for (std::string_view tok : detail::split_on(rest, ',')) {
      long v = to_long(tok, lineno);
      if (v < 0) throw ParseError("negative vertex id", lineno);
      paths[a].push_back(static_cast<Vertex>(v));
    }
    ++rows;
  }
  if (rows != n) {
    throw ParseError("expected " + std::to_string(n) + " paths", static_cast<int>(lines.size()));
  }
  return paths;
}

}  // namespace otimapp
