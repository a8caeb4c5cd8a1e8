#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the enumeration or cut code it is meant to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "ovc/ncpart.hpp"

namespace oracle {

using Blocks = std::vector<std::vector<int>>;

/// All set partitions of [1, p] via restricted growth strings.
inline std::vector<Blocks> set_partitions(int p) {
  std::vector<Blocks> out;
  std::vector<int> rgs(static_cast<std::size_t>(p), 0);
  auto emit = [&] {
    int k = p ? *std::max_element(rgs.begin(), rgs.end()) + 1 : 0;
    Blocks b(static_cast<std::size_t>(k));
    for (int i = 0; i < p; ++i) b[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i + 1);
    out.push_back(b);
  };
  if (p == 0) {
    emit();
    return out;
  }
  // odometer over growth strings
  while (true) {
    emit();
    int i = p - 1;
    for (; i >= 1; --i) {
      int mx = *std::max_element(rgs.begin(), rgs.begin() + i);
      if (rgs[static_cast<std::size_t>(i)] <= mx) {
        ++rgs[static_cast<std::size_t>(i)];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
        break;
      }
    }
    if (i < 1) break;
  }
  return out;
}

/// Direct search for a < c < b < d with a, b in one block and c, d in another.
inline bool has_crossing(const Blocks& blocks) {
  for (std::size_t x = 0; x < blocks.size(); ++x)
    for (std::size_t y = 0; y < blocks.size(); ++y) {
      if (x == y) continue;
      for (int a : blocks[x])
        for (int b : blocks[x])
          for (int c : blocks[y])
            for (int d : blocks[y])
              if (a < c && c < b && b < d) return true;
    }
  return false;
}

inline bool is_interval(const Blocks& blocks) {
  for (const auto& b : blocks)
    if (b.back() - b.front() + 1 != static_cast<int>(b.size())) return false;
  return true;
}

inline bool hull_inside(const std::vector<int>& inner, const std::vector<int>& outer) {
  return outer.front() < inner.front() && inner.back() < outer.back();
}

/// Monotone labelings counted by assigning labels 1, 2, ... in turn to a
/// block none of whose nested blocks is still unlabeled (DP over subsets).
inline std::uint64_t monotone_labelings_dp(const ovc::NCPartition& pi) {
  const auto& bl = pi.blocks();
  const int n = static_cast<int>(bl.size());
  std::vector<std::uint64_t> ways(std::size_t{1} << n, 0);
  ways[0] = 1;
  for (std::uint32_t done = 0; done < (1u << n); ++done) {
    if (!ways[done]) continue;
    for (int v = 0; v < n; ++v) {
      if (done >> v & 1) continue;
      bool ready = true;
      for (int w = 0; w < n && ready; ++w)
        if (!(done >> w & 1) && w != v && hull_inside(bl[static_cast<std::size_t>(w)], bl[static_cast<std::size_t>(v)]))
          ready = false;
      if (ready) ways[done | (1u << v)] += ways[done];
    }
  }
  return ways.back();
}

/// Every (L, U) obtained from an arbitrary subset of blocks by splitting the
/// rest along the gaps of the kept elements, kept only when gap insertion
/// gives back pi.
inline std::vector<std::pair<ovc::NCPartition, std::vector<ovc::NCPartition>>> cut_inversions(
    const ovc::NCPartition& pi) {
  std::vector<std::pair<ovc::NCPartition, std::vector<ovc::NCPartition>>> out;
  const auto& bl = pi.blocks();
  const int n = static_cast<int>(bl.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::vector<int>> kept;
    std::vector<int> kept_pos;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1) {
        kept.push_back(bl[static_cast<std::size_t>(v)]);
        kept_pos.insert(kept_pos.end(), bl[static_cast<std::size_t>(v)].begin(), bl[static_cast<std::size_t>(v)].end());
      }
    std::sort(kept_pos.begin(), kept_pos.end());
    std::vector<std::vector<std::vector<int>>> gaps(kept_pos.size() + 1);
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1) continue;
      std::map<std::size_t, std::vector<int>> pieces;
      for (int e : bl[static_cast<std::size_t>(v)]) {
        auto g = static_cast<std::size_t>(std::lower_bound(kept_pos.begin(), kept_pos.end(), e) - kept_pos.begin());
        pieces[g].push_back(e);
      }
      for (auto& [g, piece] : pieces) gaps[g].push_back(piece);
    }
    auto L = ovc::standardize(kept, pi.colors());
    std::vector<ovc::NCPartition> U;
    for (const auto& g : gaps) U.push_back(ovc::standardize(g, pi.colors()));
    if (ovc::gap_insert(L, U) == pi) out.emplace_back(L, U);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace oracle
