#include "ovc/ncpart.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ovc/errors.hpp"

namespace ovc {

int max_elements() {
  if (const char* env = std::getenv("OVC_MAX_ELEMENTS")) {
    int value = 0;
    std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size() && value >= 0) return value;
  }
  return kDefaultMaxElements;
}

namespace {

// Sorts elements and blocks, checks the blocks partition [1, p]. Returns p.
int canonicalize(std::vector<Block>& blocks) {
  std::vector<int> all;
  for (auto& b : blocks) {
    if (b.empty()) throw MalformedPartition("empty block");
    std::sort(b.begin(), b.end());
    all.insert(all.end(), b.begin(), b.end());
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] != static_cast<int>(i) + 1) {
      if (i > 0 && all[i] == all[i - 1]) {
        throw MalformedPartition("element " + std::to_string(all[i]) + " appears twice");
      }
      throw MalformedPartition("blocks do not cover [1, " + std::to_string(all.size()) + "]");
    }
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const Block& a, const Block& b) { return a.front() < b.front(); });
  return static_cast<int>(all.size());
}

bool crossing_free(const std::vector<Block>& blocks, int p) {
  std::vector<int> label(static_cast<std::size_t>(p) + 1, -1);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (int e : blocks[i]) label[static_cast<std::size_t>(e)] = static_cast<int>(i);
  }
  // Anything strictly between two consecutive elements of a block must
  // belong to a block living entirely in that window.
  for (const auto& b : blocks) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      for (int c = b[j] + 1; c < b[j + 1]; ++c) {
        const Block& other = blocks[static_cast<std::size_t>(label[static_cast<std::size_t>(c)])];
        if (other.front() < b[j] || other.back() > b[j + 1]) return false;
      }
    }
  }
  return true;
}

void check_bound(int p) {
  if (p < 0) throw MalformedPartition("negative size");
  if (p > max_elements()) {
    throw ResourceLimit("size " + std::to_string(p) + " exceeds enumeration bound " +
                        std::to_string(max_elements()));
  }
}

std::vector<Block> shifted(const std::vector<Block>& blocks, int offset) {
  std::vector<Block> out = blocks;
  for (auto& b : out)
    for (int& e : b) e += offset;
  return out;
}

// Non-crossing partitions of [1, n] as raw block lists, built by choosing the
// block of 1 and filling the gaps it leaves.
const std::vector<std::vector<Block>>& nc_raw(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::vector<Block>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  std::vector<std::vector<Block>> out;
  if (n == 0) {
    out.push_back({});
  } else {
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
      Block first{1};
      for (int j = 0; j < n - 1; ++j)
        if (mask & (1u << j)) first.push_back(j + 2);
      // gaps: (first[i], first[i+1]) and (last, n]
      std::vector<std::pair<int, int>> gaps;  // (offset, length)
      for (std::size_t i = 0; i + 1 < first.size(); ++i) {
        gaps.emplace_back(first[i], first[i + 1] - first[i] - 1);
      }
      gaps.emplace_back(first.back(), n - first.back());
      std::vector<std::vector<Block>> partial{{first}};
      for (auto [offset, len] : gaps) {
        if (len == 0) continue;
        const auto& fill = nc_raw(len);
        std::vector<std::vector<Block>> next;
        next.reserve(partial.size() * fill.size());
        for (const auto& base : partial) {
          for (const auto& f : fill) {
            auto combined = base;
            auto moved = shifted(f, offset);
            combined.insert(combined.end(), moved.begin(), moved.end());
            next.push_back(std::move(combined));
          }
        }
        partial = std::move(next);
      }
      out.insert(out.end(), partial.begin(), partial.end());
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(n, std::move(out)).first->second;
}

}  // namespace

NCPartition::NCPartition(std::vector<Block> blocks, std::optional<ColorList> colors)
    : blocks_(std::move(blocks)) {
  size_ = canonicalize(blocks_);
  if (!crossing_free(blocks_, size_)) throw MalformedPartition("blocks cross");
  if (colors) {
    if (static_cast<int>(colors->size()) != size_) {
      throw MalformedPartition("color list has length " + std::to_string(colors->size()) +
                               ", expected " + std::to_string(size_));
    }
    for (int c : *colors)
      if (c < 0) throw MalformedPartition("negative color index");
    if (size_ > 0) colors_ = std::move(colors);
  }
}

NCPartition NCPartition::single_block(int size, std::optional<ColorList> colors) {
  if (size < 0) throw MalformedPartition("negative size");
  if (size == 0) return NCPartition({}, std::move(colors));
  Block b(static_cast<std::size_t>(size));
  std::iota(b.begin(), b.end(), 1);
  return NCPartition({b}, std::move(colors));
}

std::vector<int> NCPartition::block_labels() const {
  std::vector<int> label(static_cast<std::size_t>(size_));
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (int e : blocks_[i]) label[static_cast<std::size_t>(e - 1)] = static_cast<int>(i);
  }
  return label;
}

bool NCPartition::is_interval() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) {
    return b.back() - b.front() + 1 == static_cast<int>(b.size());
  });
}

bool is_noncrossing(const std::vector<Block>& blocks) {
  auto copy = blocks;
  int p = canonicalize(copy);
  return crossing_free(copy, p);
}

std::vector<NCPartition> enumerate_nc(int p) {
  check_bound(p);
  std::vector<NCPartition> out;
  for (const auto& raw : nc_raw(p)) out.emplace_back(raw);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NCPartition> enumerate_interval(int p) {
  check_bound(p);
  std::vector<NCPartition> out;
  if (p == 0) {
    out.emplace_back();
    return out;
  }
  // bit j set: a block boundary after position j + 1
  for (std::uint32_t mask = 0; mask < (1u << (p - 1)); ++mask) {
    std::vector<Block> blocks{{1}};
    for (int e = 2; e <= p; ++e) {
      if (mask & (1u << (e - 2))) blocks.emplace_back();
      blocks.back().push_back(e);
    }
    out.emplace_back(std::move(blocks));
  }
  std::sort(out.begin(), out.end());
  return out;
}

NCPartition gap_insert(const NCPartition& pi, const std::vector<NCPartition>& alphas) {
  if (static_cast<int>(alphas.size()) != pi.arity()) {
    throw ArityMismatch("gap_insert: " + std::to_string(alphas.size()) + " operands for arity " +
                        std::to_string(pi.arity()));
  }
  std::optional<bool> colored;
  auto note = [&](const NCPartition& x) {
    if (x.empty()) return;
    if (colored && *colored != x.colored()) throw ColorMismatch("gap_insert: mixed coloring");
    colored = x.colored();
  };
  note(pi);
  for (const auto& a : alphas) note(a);

  std::vector<Block> blocks;
  ColorList colors;
  int pos = 0;
  auto place = [&](const NCPartition& x, std::size_t first_block) {
    for (std::size_t i = 0; i < x.blocks().size(); ++i) {
      for (int e : x.blocks()[i]) blocks[first_block + i].push_back(pos + e);
    }
    if (x.colored()) colors.insert(colors.end(), x.colors()->begin(), x.colors()->end());
    pos += x.size();
  };
  // pi's blocks keep indices 0..#pi-1; inserted blocks are appended
  blocks.resize(static_cast<std::size_t>(pi.block_count()));
  const auto pi_labels = pi.block_labels();
  for (int gap = 0; gap <= pi.size(); ++gap) {
    const auto& a = alphas[static_cast<std::size_t>(gap)];
    std::size_t first = blocks.size();
    blocks.resize(first + a.blocks().size());
    place(a, first);
    if (gap < pi.size()) {
      ++pos;
      blocks[static_cast<std::size_t>(pi_labels[static_cast<std::size_t>(gap)])].push_back(pos);
      if (pi.colored()) colors.push_back((*pi.colors())[static_cast<std::size_t>(gap)]);
    }
  }
  std::erase_if(blocks, [](const Block& b) { return b.empty(); });
  if (colored.value_or(false)) return NCPartition(std::move(blocks), std::move(colors));
  return NCPartition(std::move(blocks));
}

NCPartition partial_insert(const NCPartition& pi, int slot, const NCPartition& alpha) {
  if (slot < 1 || slot > pi.arity()) {
    throw ArityMismatch("partial_insert: slot " + std::to_string(slot) + " outside [1, " +
                        std::to_string(pi.arity()) + "]");
  }
  std::vector<NCPartition> alphas(static_cast<std::size_t>(pi.arity()));
  alphas[static_cast<std::size_t>(slot - 1)] = alpha;
  return gap_insert(pi, alphas);
}

NCPartition standardize(const std::vector<Block>& blocks,
                        const std::optional<ColorList>& ambient_colors) {
  std::vector<int> all;
  for (const auto& b : blocks) {
    if (b.empty()) throw MalformedPartition("empty block");
    for (int e : b) {
      if (e < 1) throw MalformedPartition("non-positive element");
      all.push_back(e);
    }
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw MalformedPartition("duplicate element");
  }
  auto rank = [&](int e) {
    return static_cast<int>(std::lower_bound(all.begin(), all.end(), e) - all.begin()) + 1;
  };
  std::vector<Block> out;
  for (const auto& b : blocks) {
    Block nb;
    for (int e : b) nb.push_back(rank(e));
    out.push_back(std::move(nb));
  }
  if (!ambient_colors) return NCPartition(std::move(out));
  ColorList colors;
  for (int e : all) {
    if (static_cast<std::size_t>(e) > ambient_colors->size()) {
      throw MalformedPartition("element outside the colored ground set");
    }
    colors.push_back((*ambient_colors)[static_cast<std::size_t>(e - 1)]);
  }
  return NCPartition(std::move(out), std::move(colors));
}

NestingForest nesting_forest(const NCPartition& pi) {
  const auto& bl = pi.blocks();
  const int n = pi.block_count();
  NestingForest f;
  f.parent.assign(static_cast<std::size_t>(n), -1);
  f.children.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    int best = -1;
    const auto& V = bl[static_cast<std::size_t>(v)];
    for (int w = 0; w < n; ++w) {
      const auto& W = bl[static_cast<std::size_t>(w)];
      if (w == v || W.front() > V.front() || W.back() < V.back()) continue;
      if (best < 0 || W.back() - W.front() <
                          bl[static_cast<std::size_t>(best)].back() -
                              bl[static_cast<std::size_t>(best)].front()) {
        best = w;
      }
    }
    f.parent[static_cast<std::size_t>(v)] = best;
  }
  // blocks are sorted by minimum, so these lists come out left to right
  for (int v = 0; v < n; ++v) {
    int p = f.parent[static_cast<std::size_t>(v)];
    if (p < 0) f.roots.push_back(v);
    else f.children[static_cast<std::size_t>(p)].push_back(v);
  }
  return f;
}

std::uint64_t tree_factorial(const NestingForest& forest) {
  std::vector<std::uint64_t> subtree(static_cast<std::size_t>(forest.size()), 1);
  // children always have larger indices than their parent, so a reverse sweep
  // sees every subtree before its root
  std::uint64_t result = 1;
  for (int v = forest.size() - 1; v >= 0; --v) {
    for (int c : forest.children[static_cast<std::size_t>(v)]) {
      subtree[static_cast<std::size_t>(v)] += subtree[static_cast<std::size_t>(c)];
    }
    result *= subtree[static_cast<std::size_t>(v)];
  }
  return result;
}

std::uint64_t tree_factorial(const NCPartition& pi) { return tree_factorial(nesting_forest(pi)); }

std::uint64_t count_monotone_labelings_brute(const NCPartition& pi) {
  const int n = pi.block_count();
  if (n > max_elements()) throw ResourceLimit("too many blocks for labeling enumeration");
  const auto forest = nesting_forest(pi);
  std::vector<int> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 1);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      int p = forest.parent[static_cast<std::size_t>(v)];
      if (p >= 0 && label[static_cast<std::size_t>(v)] > label[static_cast<std::size_t>(p)]) {
        ok = false;
      }
    }
    if (ok) ++count;
  } while (std::next_permutation(label.begin(), label.end()));
  return count;
}

std::uint64_t count_monotone_labelings(const NCPartition& pi) {
  std::uint64_t brute = count_monotone_labelings_brute(pi);
  std::uint64_t fact = 1;
  for (int i = 2; i <= pi.block_count(); ++i) fact *= static_cast<std::uint64_t>(i);
  std::uint64_t formula = fact / tree_factorial(pi);
  if (brute != formula) {
    throw Error("monotone labeling count mismatch for " + to_text(pi) + ": " +
                std::to_string(brute) + " vs " + std::to_string(formula));
  }
  return brute;
}

std::vector<Cut> cuts(const NCPartition& pi) {
  std::vector<Cut> out;
  if (pi.empty()) {
    out.push_back({NCPartition(), {NCPartition()}, 0});
    return out;
  }
  const int n = pi.block_count();
  if (n > 62) throw ResourceLimit("too many blocks for cut enumeration");
  const auto forest = nesting_forest(pi);
  const auto& bl = pi.blocks();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool closed = true;
    for (int v = 0; v < n && closed; ++v) {
      int p = forest.parent[static_cast<std::size_t>(v)];
      if ((mask >> v & 1) && p >= 0 && !(mask >> p & 1)) closed = false;
    }
    if (!closed) continue;
    std::vector<Block> kept;
    std::vector<int> kept_positions;
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1) {
        kept.push_back(bl[static_cast<std::size_t>(v)]);
        for (int e : bl[static_cast<std::size_t>(v)]) kept_positions.push_back(e);
      }
    }
    std::sort(kept_positions.begin(), kept_positions.end());
    Cut cut;
    cut.kept_mask = mask;
    cut.lower = standardize(kept, pi.colors());
    // a dropped block sits inside one gap of the kept ones
    std::vector<std::vector<Block>> per_gap(kept_positions.size() + 1);
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1) continue;
      const auto& V = bl[static_cast<std::size_t>(v)];
      auto gap = static_cast<std::size_t>(
          std::lower_bound(kept_positions.begin(), kept_positions.end(), V.front()) -
          kept_positions.begin());
      per_gap[gap].push_back(V);
    }
    for (const auto& g : per_gap) cut.upper.push_back(standardize(g, pi.colors()));
    out.push_back(std::move(cut));
  }
  return out;
}

Factorization operadic_factorization(const NCPartition& pi) {
  if (pi.empty()) throw DomainError("the empty partition is the unit and has no factorization");
  const auto& V = pi.blocks().front();
  const int s = static_cast<int>(V.size());
  std::optional<ColorList> gen_colors;
  if (pi.colored()) {
    gen_colors.emplace();
    for (int e : V) gen_colors->push_back((*pi.colors())[static_cast<std::size_t>(e - 1)]);
  }
  Factorization f{NCPartition::single_block(s, gen_colors), {}, {}};
  // gap j of V (1 <= j <= s) holds positions between V[j-1] and V[j] (or the tail)
  std::vector<std::vector<Block>> gaps(static_cast<std::size_t>(s) + 1);
  for (std::size_t i = 1; i < pi.blocks().size(); ++i) {
    const auto& W = pi.blocks()[i];
    auto j = static_cast<std::size_t>(std::upper_bound(V.begin(), V.end(), W.front()) - V.begin());
    gaps[j].push_back(W);
  }
  // last slot first, so earlier slot numbers stay valid
  for (int j = s; j >= 1; --j) {
    const auto& g = gaps[static_cast<std::size_t>(j)];
    if (g.empty()) continue;
    f.slots.push_back(j + 1);
    f.operands.push_back(operadic_factorization(standardize(g, pi.colors())));
  }
  return f;
}

NCPartition evaluate(const Factorization& f) {
  NCPartition result = f.generator;
  for (std::size_t j = 0; j < f.slots.size(); ++j) {
    result = partial_insert(result, f.slots[j], evaluate(f.operands[j]));
  }
  return result;
}

std::string to_string(const Factorization& f) {
  std::string s = "1_" + std::to_string(f.generator.arity());
  if (f.generator.colored()) {
    VariableTable names;
    s += "[";
    for (std::size_t i = 0; i < f.generator.colors()->size(); ++i) {
      if (i) s += ",";
      s += names.name((*f.generator.colors())[i]);
    }
    s += "]";
  }
  for (std::size_t j = 0; j < f.slots.size(); ++j) {
    std::string inner = to_string(f.operands[j]);
    if (!f.operands[j].slots.empty()) inner = "(" + inner + ")";
    s = (j ? "(" + s + ")" : s) + " o_" + std::to_string(f.slots[j]) + " " + inner;
  }
  return s;
}

std::string to_text(const NCPartition& pi, const VariableTable& vars) {
  if (pi.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < pi.blocks().size(); ++i) {
    if (i) s += "|";
    const auto& b = pi.blocks()[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(b[j]);
    }
  }
  if (pi.colored()) {
    s += ";";
    for (std::size_t i = 0; i < pi.colors()->size(); ++i) {
      if (i) s += ",";
      s += vars.name((*pi.colors())[i]);
    }
  }
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected an integer, got '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

NCPartition parse_partition(std::string_view text, const VariableTable& vars) {
  text = trim(text);
  std::string_view body = text;
  std::optional<ColorList> colors;
  if (auto semi = text.find(';'); semi != std::string_view::npos) {
    body = trim(text.substr(0, semi));
    auto tail = trim(text.substr(semi + 1));
    colors.emplace();
    if (!tail.empty()) {
      for (auto name : split(tail, ',')) colors->push_back(vars.index(name));
    }
  }
  if (body == "0") {
    if (colors && !colors->empty()) throw ParseError("colors given for the empty partition");
    return NCPartition();
  }
  if (body.empty()) throw ParseError("empty partition text (use '0')");
  std::vector<Block> blocks;
  for (auto part : split(body, '|')) {
    Block b;
    for (auto e : split(part, ',')) b.push_back(parse_int(e));
    blocks.push_back(std::move(b));
  }
  return NCPartition(std::move(blocks), std::move(colors));
}

}  // namespace ovc
