#include "ovc/formal.hpp"

#include <cctype>
#include <mutex>

namespace ovc {

const std::vector<LetterCut<NCPartition>>& LetterTraits<NCPartition>::cuts(const NCPartition& x) {
  static std::mutex mu;
  static std::map<NCPartition, std::vector<LetterCut<NCPartition>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(x);
    if (it != cache.end()) return it->second;
  }
  std::vector<LetterCut<NCPartition>> out;
  for (auto& c : ovc::cuts(x)) {
    // block 0 is the block of position 1
    out.push_back({std::move(c.lower), std::move(c.upper), !x.empty() && (c.kept_mask & 1)});
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(x, std::move(out)).first->second;
}

namespace detail {

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(trim_view(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + sep.size();
  }
  return parts;
}

Rational parse_rational(std::string_view s) {
  s = trim_view(s);
  if (s.empty()) throw ParseError("empty coefficient");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '-' && c != '/') {
      throw ParseError("bad coefficient '" + std::string(s) + "'");
    }
  }
  try {
    return Rational(std::string(s));
  } catch (const std::exception&) {
    throw ParseError("bad coefficient '" + std::string(s) + "'");
  }
}

}  // namespace detail

}  // namespace ovc
