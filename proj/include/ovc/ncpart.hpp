#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ovc/variables.hpp"

namespace ovc {

/// Strictly increasing list of 1-based positions.
using Block = std::vector<int>;
using ColorList = std::vector<int>;

/// Default bound on enumeration sizes; OVC_MAX_ELEMENTS overrides it.
constexpr int kDefaultMaxElements = 10;
int max_elements();

/// A non-crossing partition of [1, p] in canonical form, optionally colored.
///
/// Seen as an operation it has p + 1 inputs (one per gap) and one output.
/// The empty partition is the operad unit and is never colored.
class NCPartition {
 public:
  NCPartition() = default;

  /// Validates and canonicalizes. Throws MalformedPartition for overlapping
  /// blocks, holes, crossings, or a color list of the wrong length.
  NCPartition(std::vector<Block> blocks, std::optional<ColorList> colors = std::nullopt);

  /// The one-block partition of [1, size]; arity size + 1.
  static NCPartition single_block(int size, std::optional<ColorList> colors = std::nullopt);

  int size() const { return size_; }
  int arity() const { return size_ + 1; }
  bool empty() const { return size_ == 0; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::optional<ColorList>& colors() const { return colors_; }
  bool colored() const { return colors_.has_value(); }

  /// Block index (into blocks()) of each position; entry i is position i + 1.
  std::vector<int> block_labels() const;
  bool is_interval() const;

  auto operator<=>(const NCPartition&) const = default;
  bool operator==(const NCPartition&) const = default;

 private:
  int size_ = 0;
  std::vector<Block> blocks_;
  std::optional<ColorList> colors_;
};

/// Checks the crossing condition. Throws MalformedPartition if the blocks do
/// not partition [1, p].
bool is_noncrossing(const std::vector<Block>& blocks);

std::vector<NCPartition> enumerate_nc(int p);
std::vector<NCPartition> enumerate_interval(int p);

/// Inserts alphas[i] into gap i of pi. Colors concatenate; inputs must be all
/// colored or all uncolored (empty partitions are neutral).
NCPartition gap_insert(const NCPartition& pi, const std::vector<NCPartition>& alphas);
/// Inserts alpha into the 1-based input slot i (gap i - 1).
NCPartition partial_insert(const NCPartition& pi, int slot, const NCPartition& alpha);

/// Relabels blocks over an arbitrary ordered ground set onto [1, p].
/// `ambient_colors`, when given, is indexed by element - 1.
NCPartition standardize(const std::vector<Block>& blocks,
                        const std::optional<ColorList>& ambient_colors = std::nullopt);

struct Cut {
  NCPartition lower;
  std::vector<NCPartition> upper;
  std::uint64_t kept_mask = 0;
};

/// All decompositions pi = gap_insert(L, U) with L an englobing-closed set of
/// blocks, ordered by kept_mask.
std::vector<Cut> cuts(const NCPartition& pi);

struct NestingForest {
  std::vector<int> parent;  // -1 for roots
  std::vector<std::vector<int>> children;
  std::vector<int> roots;
  int size() const { return static_cast<int>(parent.size()); }
};

NestingForest nesting_forest(const NCPartition& pi);
std::uint64_t tree_factorial(const NestingForest& forest);
std::uint64_t tree_factorial(const NCPartition& pi);

/// Number of bijective labelings of blocks by 1..#blocks in which every
/// nested block gets a smaller label than the blocks englobing it.
/// Computed by brute force and by #pi! / tau(pi)!; throws if they disagree.
std::uint64_t count_monotone_labelings(const NCPartition& pi);
std::uint64_t count_monotone_labelings_brute(const NCPartition& pi);

/// generator, then operands[j] inserted at slots[j] in order.
struct Factorization {
  NCPartition generator;
  std::vector<int> slots;
  std::vector<Factorization> operands;
};

Factorization operadic_factorization(const NCPartition& pi);
NCPartition evaluate(const Factorization& f);
std::string to_string(const Factorization& f);

std::string to_text(const NCPartition& pi, const VariableTable& vars = {});
NCPartition parse_partition(std::string_view text, const VariableTable& vars = {});

}  // namespace ovc
