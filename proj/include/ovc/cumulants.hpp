#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ovc/ncpart.hpp"
#include "ovc/ovps.hpp"

namespace ovc {

enum class CumulantKind { Moment, Free, Boolean, Monotone };
std::string to_string(CumulantKind k);
CumulantKind parse_kind(std::string_view s);

/// Which innermost interval block e_pi collapses first.
enum class Collapse { Leftmost, Rightmost };

/// How the b's around a collapsed block are attached. Absorb feeds b_{k-1}
/// (or b_0) into the generator's first slot as b_{k-1} κ(1, b_k, ..., b_l);
/// Outside evaluates κ(1, b_k, ..., b_{l-1}, 1) and multiplies b_{k-1} and
/// b_l on either side.
enum class Grouping { Absorb, Outside };

/// Generators κ_w (arity |w| + 1) indexed by color words, built lazily up to
/// max_order and cached as dense tables.
class CumulantFamily {
 public:
  /// The moment family of a space.
  static CumulantFamily moments(std::shared_ptr<const OVMatrixSpace> space, int max_order);

  CumulantKind kind() const { return impl_->kind; }
  int max_order() const { return impl_->max_order; }
  const OVMatrixSpace& space() const { return *impl_->space; }
  std::shared_ptr<const OVMatrixSpace> space_ptr() const { return impl_->space; }

  /// Throws MissingEntry beyond max_order and DomainError for unknown
  /// variables. The empty word gives the identity.
  MultiMap generator(const std::vector<int>& word) const;

  /// Negative control: multiplies every cached and future entry of the given
  /// length by `factor`.
  void inject_fault(int length, Complex factor);

  friend CumulantFamily build_free(const CumulantFamily& moments);
  friend CumulantFamily build_boolean(const CumulantFamily& moments);
  friend CumulantFamily build_monotone(const CumulantFamily& moments);

 private:
  struct Impl {
    CumulantKind kind;
    int max_order;
    std::shared_ptr<const OVMatrixSpace> space;
    std::shared_ptr<const Impl> moments;  // null for the moment family
    std::mutex mu;
    std::map<std::vector<int>, MultiMap> cache;
    std::map<int, Complex> faults;
  };
  explicit CumulantFamily(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  static CumulantFamily derived(const CumulantFamily& moments, CumulantKind kind);
  MultiMap build_entry(const std::vector<int>& word) const;

  std::shared_ptr<Impl> impl_;
};

CumulantFamily build_free(const CumulantFamily& moments);
CumulantFamily build_boolean(const CumulantFamily& moments);
CumulantFamily build_monotone(const CumulantFamily& moments);

/// Colors of pi, or all zeros when pi is uncolored.
std::vector<int> colors_or_default(const NCPartition& pi);

/// Speicher's recursion: collapse an innermost interval block into the
/// neighbouring argument and recurse. args has arity(pi) entries.
Mat e_pi(const NCPartition& pi, const CumulantFamily& family, std::span<const Mat> args,
         Collapse order = Collapse::Leftmost, Grouping grouping = Grouping::Absorb);

/// The same recursion assembled as a map (generators, products and constants).
MultiMap e_pi_map(const NCPartition& pi, const CumulantFamily& family, Collapse order = Collapse::Leftmost);

/// Σ_π w(π) e_π over NC(n) (free, monotone with w = 1/τ(π)!) or Int(n)
/// (boolean), colored by `word`, as one tabulated map.
MultiMap moment_cumulant_sum(const CumulantFamily& family, const std::vector<int>& word,
                             Collapse order = Collapse::Rightmost);

struct McEntry {
  std::vector<int> word;
  Deviation free, boolean, monotone;
};

struct McReport {
  std::vector<McEntry> entries;
  std::map<int, Deviation> per_order;  // worst over the three families
  double tol = 1e-9;
  bool pass = true;
};

/// Re-sums each family over its partitions, collapsing in the opposite
/// order from the construction, and compares with the moments.
McReport verify_mc(const CumulantFamily& moments, const CumulantFamily& free, const CumulantFamily& boolean,
                   const CumulantFamily& monotone, const std::vector<std::vector<int>>& words, double tol = 1e-9);

/// All words over `alphabet` of length 1..max_len.
std::vector<std::vector<int>> all_color_words(const std::vector<int>& alphabet, int max_len);

}  // namespace ovc
